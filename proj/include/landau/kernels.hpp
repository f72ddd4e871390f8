#pragma once

#include <Eigen/Dense>

namespace landau {

// Collision kernel parameters for very soft potentials, gamma in [-3, -2).
// epsilon regularizes pointwise evaluations of r^gamma as (r^2+eps^2)^(gamma/2);
// the cutoff form eta(r) r^gamma needs no regularization away from r = 0.
struct KernelSpec {
    double gamma = -3.0;
    double epsilon = 0.0;
    double eta_sup_dd = 0.0;  // measured sup |eta''|
    // Measured sup_r 2^gamma (6 eta(r) r^(gamma-2) + max(eta''(r),0) r^gamma):
    // the constant in the Laplacian bound lap alpha_tilde <= c_delta 2^-gamma.
    double c_delta = 0.0;
};

// Validates gamma in [-3,-2) and epsilon >= 0, and fills the measured eta
// constants by dense sampling.
KernelSpec make_kernel(double gamma, double epsilon);

// a(z) = |z|^2 I - z z^T  (projection onto z-perp, scaled by |z|^2).
Eigen::Matrix3d a_matrix(const Eigen::Vector3d& z);

// b_k(z) = e_k x z. Satisfies sum_k b_k b_k^T = a(z).
Eigen::Vector3d b_field(int k, const Eigen::Vector3d& z);

// Increasing C^2 cutoff: r^5 on [0,1/2], quintic Hermite blend on [1/2,1]
// matching value and first two derivatives at both ends, 1 on [1,inf).
double eta(double r);
double eta_d(double r);
double eta_dd(double r);

// (r^2 + eps^2)^(gamma/2)
double alpha(const KernelSpec& spec, double r);
// d/dr of the above
double alpha_d(const KernelSpec& spec, double r);
// eta(r) r^gamma (unregularized; caller never evaluates at r = 0)
double alpha_tilde(const KernelSpec& spec, double r);
double alpha_tilde_d(const KernelSpec& spec, double r);

// int_{[-1/2,1/2]^3} |u|^p du for p in (-3, 1], by scaling refinement:
// W = S / (1 - 2^-(p+3)) with S the integral over the unit cube minus its
// half-size copy, evaluated by tensor Gauss-Legendre on three smooth boxes.
double cube_kernel_average(double p);

} // namespace landau
