#pragma once

#include <Eigen/Dense>

#include "landau/grid.hpp"

namespace landau {

struct HydrodynamicState {
    double mass = 0.0;
    Eigen::Vector3d momentum = Eigen::Vector3d::Zero();
    double energy = 0.0;       // int f |v|^2
    double temperature = 0.0;  // (energy - |momentum|^2/mass) / (3 mass)
    double entropy = 0.0;      // int f log f, floored log
    double l_log_l = 0.0;      // int f |log f|, floored log
};

HydrodynamicState hydrodynamics(const Density& f);

struct LlogLBound {
    double l_log_l = 0.0;
    double bound = 0.0;   // gaussian_constant + 2*mass + 2*energy + entropy
    double margin = 0.0;  // bound - l_log_l, expected >= 0
    double gaussian_constant = 0.0;  // 2 int exp(-1-|v|^2)(1+|v|^2) dv
};

LlogLBound l_log_l_bound_check(const Density& f);

// The Gaussian constant above, evaluated by 1d adaptive quadrature
// (closed form 5 pi^{3/2} / e, but the quadrature value is the one used).
double l_log_l_gaussian_constant();

struct FisherReport {
    double grad_form = 0.0;   // int f |grad log f|^2
    double ratio_form = 0.0;  // int |grad f|^2 / max(f, floor)
    double sqrt_form = 0.0;   // 4 int |grad sqrt(f)|^2
    double value = 0.0;       // the sqrt form; smallest floor sensitivity
    double spread = 0.0;      // max pairwise relative gap between the forms
    int interior_margin = 0;
};

// interior_margin > 0 restricts the quadrature to cells at least that many
// cells away from every boundary face.
FisherReport fisher(const Density& f, int interior_margin = 0);

// int <v>^(gamma-2) f ||hess log f||_F^2 dv
double weighted_hessian_functional(const Density& f, double gamma, int interior_margin = 0);

// Lower bound int <v>^(gamma-2) f (lap log f)^2 <= 3 * weighted_hessian_functional,
// plus the Cauchy-Schwarz pairing used by the decay estimate. All three values
// are computed from the same cached log-derivatives.
struct HessianTraceChain {
    double weighted_hessian = 0.0;   // int <v>^(g-2) f ||H||^2
    double weighted_trace_sq = 0.0;  // int <v>^(g-2) f (tr H)^2
    double trace_integral = 0.0;     // int f tr H   (matches -i(f) in the continuum)
    double weight_moment = 0.0;      // int <v>^(2-g) f
};

HessianTraceChain hessian_trace_chain(const Density& f, double gamma, int interior_margin = 0);

} // namespace landau
