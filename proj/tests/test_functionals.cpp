#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "landau/evolution.hpp"
#include "landau/functionals.hpp"
#include "landau/grid.hpp"

using namespace landau;

static int failures = 0;

#define REQUIRE(cond)                                                          \
    do {                                                                       \
        if (!(cond)) {                                                         \
            std::fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                        \
        }                                                                      \
    } while (0)

#define REQUIRE_NEAR(a, b, tol)                                                   \
    do {                                                                          \
        const double a_ = (a), b_ = (b), tol_ = (tol);                            \
        if (!(std::abs(a_ - b_) <= tol_)) {                                       \
            std::fprintf(stderr, "FAIL %s:%d: |%s - %s| = |%.17g - %.17g| > %g\n", \
                         __FILE__, __LINE__, #a, #b, a_, b_, tol_);               \
            ++failures;                                                           \
        }                                                                         \
    } while (0)

namespace {

Density initial_on(InitialData::Kind kind, int n, double extent, double temperature = 1.0,
                   Eigen::Vector3d mean = Eigen::Vector3d::Zero(), double amplitude = 0.2) {
    InitialData d;
    d.kind = kind;
    d.temperature = temperature;
    d.mean = mean;
    d.amplitude = amplitude;
    return make_initial(d, make_grid(n, extent));
}

void maxwellian_moments() {
    const Density f = initial_on(InitialData::Kind::maxwellian, 24, 7.0);
    const HydrodynamicState hy = hydrodynamics(f);

    REQUIRE_NEAR(hy.mass, 1.0, 1e-13);  // exact grid rescale
    REQUIRE_NEAR(hy.momentum.norm(), 0.0, 1e-13);
    REQUIRE_NEAR(hy.energy, 3.0, 1e-4);
    REQUIRE_NEAR(hy.temperature, 1.0, 1e-4);
    // Continuum value -(3/2)(1 + log(2 pi)).
    REQUIRE_NEAR(hy.entropy, -4.256815599614018, 5e-3);

    // Cell centers sit at half-integer multiples of h, so the discrete peak
    // is the maxwellian at (h/2, h/2, h/2), not at the origin.
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, v);
    const double h = f.grid.h;
    const double at_center = std::pow(2.0 * M_PI, -1.5) * std::exp(-3.0 * h * h / 8.0);
    REQUIRE_NEAR(peak, at_center, 2e-4);
    REQUIRE(peak < std::pow(2.0 * M_PI, -1.5));
}

void fisher_equilibrium_and_scaling() {
    const Density f = initial_on(InitialData::Kind::maxwellian, 32, 8.0);
    const FisherReport r = fisher(f);
    REQUIRE_NEAR(r.grad_form, 3.0, 1e-6);
    REQUIRE_NEAR(r.value, 3.0, 1e-2);
    REQUIRE(r.spread <= 0.01);
    REQUIRE(r.value == r.sqrt_form);

    // i(M_T) = 3/T.
    const Density g = initial_on(InitialData::Kind::maxwellian, 32, 6.0, 0.5);
    REQUIRE_NEAR(fisher(g).value, 6.0, 0.1);

    // Restricting to the interior changes little for a centered gaussian.
    const FisherReport ri = fisher(f, 2);
    REQUIRE(ri.interior_margin == 2);
    REQUIRE_NEAR(ri.value, 3.0, 2e-2);
}

void fisher_homogeneity() {
    const Density f = initial_on(InitialData::Kind::perturbed_maxwellian, 16, 6.0);
    Density cf = f;
    for (double& v : cf.values) v *= 3.7;
    cf.floor_delta = f.floor_delta * 3.7;  // floor is relative to the peak

    const FisherReport a = fisher(f);
    const FisherReport b = fisher(cf);
    REQUIRE_NEAR(b.value / a.value, 3.7, 3.7 * 1e-12);
    REQUIRE_NEAR(b.grad_form / a.grad_form, 3.7, 3.7 * 1e-12);
    REQUIRE_NEAR(b.ratio_form / a.ratio_form, 3.7, 3.7 * 1e-12);
}

void l_log_l_bound_suite() {
    const double closed = 5.0 * std::pow(M_PI, 1.5) / M_E;
    REQUIRE_NEAR(l_log_l_gaussian_constant(), closed, 1e-8);

    for (auto kind : {InitialData::Kind::maxwellian, InitialData::Kind::bimaxwellian,
                      InitialData::Kind::bump, InitialData::Kind::perturbed_maxwellian}) {
        const Density f = initial_on(kind, 16, 6.0, 1.0, Eigen::Vector3d(0, 0, 1.0));
        const LlogLBound lb = l_log_l_bound_check(f);
        REQUIRE(lb.margin >= 0.0);
        const HydrodynamicState hy = hydrodynamics(f);
        REQUIRE(hy.l_log_l >= hy.entropy);
        REQUIRE(hy.l_log_l >= 0.0);
    }
}

void weighted_hessian_on_maxwellian() {
    // log f is exactly quadratic, so the discrete hessian is exactly -I/T and
    // whf = 3/T^2 * int <v>^(gamma-2) f at the same quadrature points.
    const double gamma = -3.0;
    const Density f = initial_on(InitialData::Kind::maxwellian, 20, 6.0);
    const double whf = weighted_hessian_functional(f, gamma);

    double oracle = 0.0;
    const double h3 = f.grid.h * f.grid.h * f.grid.h;
    for (std::size_t c = 0; c < f.grid.cells(); ++c) {
        const double w = std::pow(1.0 + f.grid.point(c).squaredNorm(), 0.5 * (gamma - 2.0));
        oracle += w * f.values[c] * 3.0 * h3;
    }
    REQUIRE_NEAR(whf, oracle, 1e-10 * std::abs(oracle));

    const HessianTraceChain chain = hessian_trace_chain(f, gamma);
    REQUIRE_NEAR(chain.weighted_hessian, whf, 1e-12 * whf);
    // Equality case of Cauchy-Schwarz: H = -I makes (tr H)^2 = 3 ||H||^2.
    REQUIRE_NEAR(chain.weighted_trace_sq, 3.0 * chain.weighted_hessian,
                 1e-10 * chain.weighted_trace_sq);
    // Integration by parts: int f lap log f = -i(f) in the continuum.
    REQUIRE_NEAR(chain.trace_integral, -3.0, 1e-6);
    REQUIRE(chain.weight_moment > 0.0);
}

void trace_chain_inequality_generic() {
    // On a non-gaussian field the trace bound is strict but must still hold.
    const Density f = initial_on(InitialData::Kind::bimaxwellian, 16, 6.0, 1.0,
                                 Eigen::Vector3d(0, 0, 1.2));
    const HessianTraceChain chain = hessian_trace_chain(f, -2.5);
    REQUIRE(chain.weighted_trace_sq <= 3.0 * chain.weighted_hessian * (1.0 + 1e-12));
    REQUIRE(chain.weighted_hessian > 0.0);
}

void bimaxwellian_energy_closed_form() {
    const Eigen::Vector3d mean(0, 0, 1.2);
    const Density f = initial_on(InitialData::Kind::bimaxwellian, 24, 7.0, 1.0, mean);
    const HydrodynamicState hy = hydrodynamics(f);
    // Two half-mass humps at +-mean: E = 3T + |mean|^2, P = 0.
    REQUIRE_NEAR(hy.energy, 3.0 + mean.squaredNorm(), 2e-3);
    REQUIRE_NEAR(hy.momentum.norm(), 0.0, 1e-12);
    REQUIRE_NEAR(hy.mass, 1.0, 1e-13);
}

} // namespace

int main() {
    maxwellian_moments();
    fisher_equilibrium_and_scaling();
    fisher_homogeneity();
    l_log_l_bound_suite();
    weighted_hessian_on_maxwellian();
    trace_chain_inequality_generic();
    bimaxwellian_energy_closed_form();

    if (failures) {
        std::fprintf(stderr, "%d failure(s)\n", failures);
        return 1;
    }
    std::puts("all functional checks passed");
    return 0;
}
