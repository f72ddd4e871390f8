#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "landau/coefficients.hpp"
#include "landau/functionals.hpp"
#include "landau/grid.hpp"
#include "landau/kernels.hpp"
#include "landau/pair.hpp"

namespace landau {

// CFL breach or non-finite state mid-run; mapped to exit code 4 by the CLI.
struct numerical_abort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InitialData {
    enum class Kind { maxwellian, bimaxwellian, bump, perturbed_maxwellian };
    Kind kind = Kind::maxwellian;
    double mass = 1.0;
    double temperature = 1.0;
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();  // bimaxwellian: humps at +-mean
    double support_radius = 3.0;                     // bump
    double amplitude = 0.2;                          // perturbed_maxwellian
    bool rescale_mass = true;                        // exact grid-mass rescale to `mass`
};

// Samples the closed-form density at cell centers. Throws on non-positive
// temperature, mass, support radius, or |amplitude| >= 1.
Density make_initial(const InitialData& data, const VelocityGrid& grid);

struct InitialReport {
    double mass = 0.0;
    double energy = 0.0;
    double entropy = 0.0;
    double w_moment = 0.0;  // int f <v>^(2-gamma)
};

InitialReport describe_initial(const Density& f, double gamma);

struct StepControls {
    double cfl_safety = 0.9;
    ConvMode conv = ConvMode::fft;
    bool semi_implicit = false;      // freeze coefficients, implicit diffusion
    double implicit_tol = 1e-13;     // relative residual for the iterative solve
    int implicit_max_iters = 2000;
};

struct StepInfo {
    double dt = 0.0;
    double lambda_max = 0.0;
    double cfl_limit = 0.0;      // admissible explicit dt at this state
    double clipped_mass = 0.0;   // mass removed by clipping negatives (reported, never hidden)
    std::size_t clipped_cells = 0;
    int solver_iters = 0;        // semi-implicit only
};

// Explicit conservative face-flux Euler update (default), or semi-implicit
// with the diffusion part solved iteratively. Explicit mode throws
// numerical_abort when dt exceeds cfl_safety * h^2 / (6 lambda_max), naming
// the admissible dt.
Density step(const Density& f, const KernelSpec& spec, double dt,
             const StepControls& controls = {}, StepInfo* info = nullptr);

// Admissible explicit dt (without the safety factor).
double cfl_limit(const Density& f, const KernelSpec& spec, ConvMode mode = ConvMode::fft);

// C^2 compactly supported tensor test function
// psi(v) = amplitude * prod_k phi((v_k - center_k)/scale), phi(x) = (1-x^2)^3 on |x|<1.
// sup-norm of the Hessian entries is analytic: 6 * amplitude / scale^2.
struct PsiBump {
    std::string name;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double scale = 2.0;
    double amplitude = 1.0;

    double value(const Eigen::Vector3d& v) const;
    double hess_sup() const { return 6.0 * amplitude / (scale * scale); }
};

std::vector<PsiBump> default_psi_family();

struct TrajectorySample {
    double t = 0.0;
    int step_index = 0;
    HydrodynamicState hydro;
    double l_log_l = 0.0;
    double fisher = 0.0;
    double linf = 0.0;
    double w_moment = 0.0;  // int f <v>^(2-gamma)
    double whf = 0.0;       // int <v>^(gamma-2) f ||hess log f||^2
    double weighted_trace_sq = 0.0;  // int <v>^(gamma-2) f (lap log f)^2
    double trace_integral = 0.0;     // int f lap log f
    std::map<std::string, double> lpk;            // requested L^p_k norms
    std::map<std::string, double> psi_integrals;  // int f psi per test bump
    double dt = 0.0;
    double clipped_mass = 0.0;
    bool has_dissipation = false;
    DissipationReport dissipation;
};

struct RunControls {
    double horizon = 0.5;
    double dt = 0.0;           // 0 -> per-step CFL-limited dt
    double max_dt = 0.0;       // 0 -> no cap (auto mode only)
    int sample_stride = 1;     // record every k-th step
    int dissipation_stride = 10;  // expensive pair report every k-th step
    bool record_dissipation = true;
    bool record_psi = false;
    std::vector<std::pair<double, double>> lpk_norms;  // (p, k)
    // Record (t, state) at the first step whose time reaches each entry;
    // entries past the horizon attach to the final state.
    std::vector<double> snapshot_times;
    StepControls step;
};

struct TrajectoryRecord {
    VelocityGrid grid;
    KernelSpec spec;
    std::vector<TrajectorySample> samples;
    std::vector<std::pair<double, std::vector<double>>> snapshots;  // per requested time
    double mass0 = 0.0;
    double max_mass_drift_rel = 0.0;
    double total_clipped_mass = 0.0;
    bool entropy_monotone = true;  // upward steps <= 1e-3 * |value| tolerated
    bool fisher_monotone = true;
    double worst_entropy_uptick = 0.0;  // most positive upward step observed
    double worst_fisher_uptick = 0.0;
};

TrajectoryRecord run(const InitialData& data, const KernelSpec& spec,
                     const VelocityGrid& grid, const RunControls& controls);

struct DecayCheck {
    double c0_fit = 0.0;   // max over t>0 of i(t) * t / (1+t)
    double c_ref = 0.0;    // max of i over the early window (first 20% of t>0 samples)
    bool pass = false;     // i(t) <= 1.05 * c_ref * (1 + 1/t) for all later samples
    double worst_excess = 0.0;  // max of i(t) / (c_ref (1+1/t)) - 1 past the window
};

// Requires >= 10 samples with t > 0. The i-series may be taken from a record
// or supplied directly (synthetic falsifiability fixtures).
DecayCheck fisher_decay_check(const TrajectoryRecord& traj);
DecayCheck fisher_decay_check(const std::vector<double>& t, const std::vector<double>& i);

struct OdeSampleRow {
    double t = 0.0;
    double fd_rate = 0.0;      // -(i_{s+1} - i_{s-1}) / (t_{s+1} - t_{s-1})
    double rhs = 0.0;          // c2_hat i^2 - C1 M0 i - C2 M0^2
    double margin = 0.0;       // fd_rate - rhs
    double dominant = 0.0;
    double cs_residual = 0.0;  // Cauchy-Schwarz chain slack (>= -1e-12 scale)
    double trace_slack = 0.0;  // 3*whf - weighted trace-square (>= -1e-12 scale)
    double parts_mismatch = 0.0;  // |i + int f lap log f| / i, discrete parts error
};

struct OdeCheck {
    double c2_hat = 0.0;
    double sup_w_moment = 0.0;
    double kappa_fit = 0.0;  // least-squares slope of w_moment(t)
    std::vector<OdeSampleRow> rows;
    bool cs_chain_ok = true;
    bool margins_ok = true;
    bool moment_growth_ok = true;  // w(t) <= 1.05 (w(0) + max(kappa,0) t)
    bool pass = false;
};

// c1, C1, C2 as produced by dissipation_inequality_check.
OdeCheck ode_inequality_check(const TrajectoryRecord& traj, double c1, double C1, double C2);

struct HolderCheck {
    double sup_ratio = 0.0;  // sup_tau |int (f(tau)-f0) psi| / (tau^1/2 ||hess psi||^1/2)
    double sup_tau = 0.0;    // where the sup is attained
    std::vector<std::pair<double, double>> rows;  // (t, ratio)
};

// Requires the trajectory to have recorded psi integrals for bump.name.
HolderCheck holder_initial_check(const TrajectoryRecord& traj, const PsiBump& bump);

struct DissipationConsistencyRow {
    double t = 0.0;
    double fd = 0.0;    // -(di/dt) by centered differences of samples
    double total = 0.0; // fisher_dissipation_total at the sample
    double rel_err = 0.0;
    double tol_rel = 0.0;
    bool pass = false;
};

// Compares -di/dt against the dissipation total at every sample carrying a
// report (endpoints skipped). Tolerance per sample:
// max(0.10, dt-curvature envelope + h_env_rel).
std::vector<DissipationConsistencyRow> dissipation_consistency_check(
    const TrajectoryRecord& traj, double h_env_rel);

} // namespace landau
