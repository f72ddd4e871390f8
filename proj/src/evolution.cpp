#include "landau/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "landau/reduce.hpp"

namespace landau {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gaussian3(const Eigen::Vector3d& v, const Eigen::Vector3d& mean, double T) {
    const double norm = std::pow(2.0 * kPi * T, -1.5);
    return norm * std::exp(-(v - mean).squaredNorm() / (2.0 * T));
}

} // namespace

Density make_initial(const InitialData& data, const VelocityGrid& grid) {
    if (!(data.mass > 0.0))
        throw std::invalid_argument("make_initial: mass must be positive");
    std::vector<double> vals(grid.cells());
    switch (data.kind) {
        case InitialData::Kind::maxwellian: {
            if (!(data.temperature > 0.0))
                throw std::invalid_argument("make_initial: temperature must be positive");
            for (std::size_t c = 0; c < vals.size(); ++c)
                vals[c] = data.mass * gaussian3(grid.point(c), data.mean, data.temperature);
            break;
        }
        case InitialData::Kind::bimaxwellian: {
            if (!(data.temperature > 0.0))
                throw std::invalid_argument("make_initial: temperature must be positive");
            for (std::size_t c = 0; c < vals.size(); ++c) {
                const Eigen::Vector3d v = grid.point(c);
                vals[c] = 0.5 * data.mass *
                          (gaussian3(v, data.mean, data.temperature) +
                           gaussian3(v, -data.mean, data.temperature));
            }
            break;
        }
        case InitialData::Kind::bump: {
            const double R = data.support_radius;
            if (!(R > 0.0))
                throw std::invalid_argument("make_initial: support radius must be positive");
            for (std::size_t c = 0; c < vals.size(); ++c) {
                const double r2 = (grid.point(c) - data.mean).squaredNorm();
                vals[c] = r2 < R * R
                              ? data.mass * std::exp(1.0 - R * R / (R * R - r2))
                              : 0.0;
            }
            break;
        }
        case InitialData::Kind::perturbed_maxwellian: {
            if (!(data.temperature > 0.0))
                throw std::invalid_argument("make_initial: temperature must be positive");
            if (!(std::abs(data.amplitude) < 1.0))
                throw std::invalid_argument(
                    "make_initial: |amplitude| must be < 1 to keep the density positive");
            const double k0 = kPi / grid.extent;
            for (std::size_t c = 0; c < vals.size(); ++c) {
                const Eigen::Vector3d v = grid.point(c);
                const double mod = 1.0 + data.amplitude * std::cos(k0 * v.x()) *
                                             std::cos(k0 * v.y()) * std::cos(k0 * v.z());
                vals[c] = data.mass * gaussian3(v, data.mean, data.temperature) * mod;
            }
            break;
        }
    }
    if (data.rescale_mass) {
        const double m = integrate(grid, vals);
        if (!(m > 0.0)) throw std::invalid_argument("make_initial: zero grid mass");
        const double s = data.mass / m;
        for (double& v : vals) v *= s;
    }
    return make_density(grid, std::move(vals));
}

InitialReport describe_initial(const Density& f, double gamma) {
    InitialReport rep;
    const HydrodynamicState hy = hydrodynamics(f);
    rep.mass = hy.mass;
    rep.energy = hy.energy;
    rep.entropy = hy.entropy;
    rep.w_moment = weighted_lp_norm(f, 1.0, 2.0 - gamma);
    return rep;
}

double cfl_limit(const Density& f, const KernelSpec& spec, ConvMode mode) {
    const CoefficientFields coeff = coefficient_fields(f, spec, mode);
    if (!(coeff.lambda_max > 0.0)) return std::numeric_limits<double>::infinity();
    return f.grid.h * f.grid.h / (6.0 * coeff.lambda_max);
}

namespace {

// Matrix-free BiCGSTAB for (I - dt * Ldiff) x = rhs. Returns iterations used;
// throws numerical_abort if the residual fails to reach tol.
int bicgstab_implicit(const VelocityGrid& grid, const KernelSpec& spec,
                      const CoefficientFields& coeff, double dt,
                      const std::vector<double>& rhs, std::vector<double>& x,
                      double tol, int max_iters) {
    using V = Eigen::VectorXd;
    const auto N = static_cast<Eigen::Index>(rhs.size());
    auto apply = [&](const V& in) {
        Density tmp{grid, std::vector<double>(in.data(), in.data() + N), 1e-300};
        const std::vector<double> q = collision_q(tmp, spec, coeff, FluxPart::diffusion);
        V out(N);
        for (Eigen::Index c = 0; c < N; ++c) out[c] = in[c] - dt * q[static_cast<std::size_t>(c)];
        return out;
    };
    const V b = Eigen::Map<const V>(rhs.data(), N);
    V xv = b;
    V r = b - apply(xv);
    const V r0 = r;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        x.assign(rhs.size(), 0.0);
        return 0;
    }
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    V p = V::Zero(N), v = V::Zero(N);
    int it = 0;
    for (; it < max_iters; ++it) {
        if (r.norm() <= tol * bnorm) break;
        const double rho1 = r0.dot(r);
        if (rho1 == 0.0) throw numerical_abort("semi-implicit solve broke down (rho = 0)");
        if (it == 0) {
            p = r;
        } else {
            const double beta = (rho1 / rho) * (alpha / omega);
            p = r + beta * (p - omega * v);
        }
        v = apply(p);
        alpha = rho1 / r0.dot(v);
        const V s = r - alpha * v;
        if (s.norm() <= tol * bnorm) {
            xv += alpha * p;
            r = s;
            break;
        }
        const V t = apply(s);
        omega = t.dot(s) / t.dot(t);
        xv += alpha * p + omega * s;
        r = s - omega * t;
        rho = rho1;
    }
    if (r.norm() > tol * bnorm) {
        std::ostringstream os;
        os << "semi-implicit solve did not converge: relative residual " << r.norm() / bnorm
           << " after " << it << " iterations";
        throw numerical_abort(os.str());
    }
    x.assign(xv.data(), xv.data() + N);
    return it;
}

} // namespace

Density step(const Density& f, const KernelSpec& spec, double dt,
             const StepControls& controls, StepInfo* info) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("step: dt must be positive and finite");
    const CoefficientFields coeff = coefficient_fields(f, spec, controls.conv);
    const double limit = coeff.lambda_max > 0.0
                             ? f.grid.h * f.grid.h / (6.0 * coeff.lambda_max)
                             : std::numeric_limits<double>::infinity();
    StepInfo local;
    local.dt = dt;
    local.lambda_max = coeff.lambda_max;
    local.cfl_limit = limit;

    std::vector<double> next;
    if (!controls.semi_implicit) {
        if (dt > controls.cfl_safety * limit * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "step: dt = " << dt << " violates the CFL bound; admissible dt = "
               << controls.cfl_safety * limit << " (h^2 / (6 lambda_max) = " << limit << ")";
            throw numerical_abort(os.str());
        }
        const std::vector<double> q = collision_q(f, spec, coeff, FluxPart::both);
        next.resize(f.values.size());
        for (std::size_t c = 0; c < next.size(); ++c) next[c] = f.values[c] + dt * q[c];
    } else {
        // drift explicit, diffusion implicit with frozen coefficients
        const std::vector<double> qd = collision_q(f, spec, coeff, FluxPart::drift);
        std::vector<double> rhs(f.values.size());
        for (std::size_t c = 0; c < rhs.size(); ++c) rhs[c] = f.values[c] + dt * qd[c];
        local.solver_iters = bicgstab_implicit(f.grid, spec, coeff, dt, rhs, next,
                                               controls.implicit_tol,
                                               controls.implicit_max_iters);
    }

    double clipped = 0.0;
    std::size_t nclip = 0;
    for (double& v : next) {
        if (!std::isfinite(v))
            throw numerical_abort("step: non-finite value produced; reduce dt");
        if (v < 0.0) {
            clipped -= v;
            v = 0.0;
            ++nclip;
        }
    }
    const double h3 = f.grid.h * f.grid.h * f.grid.h;
    local.clipped_mass = clipped * h3;
    local.clipped_cells = nclip;
    if (info) *info = local;
    return Density{f.grid, std::move(next), f.floor_delta};
}

double PsiBump::value(const Eigen::Vector3d& v) const {
    double out = amplitude;
    for (int k = 0; k < 3; ++k) {
        const double x = (v[k] - center[k]) / scale;
        if (std::abs(x) >= 1.0) return 0.0;
        const double u = 1.0 - x * x;
        out *= u * u * u;
    }
    return out;
}

std::vector<PsiBump> default_psi_family() {
    return {
        PsiBump{"psi_origin", Eigen::Vector3d::Zero(), 2.0, 1.0},
        PsiBump{"psi_offset", Eigen::Vector3d(1.0, 0.5, 0.0), 1.5, 1.0},
        PsiBump{"psi_narrow", Eigen::Vector3d(-0.5, 0.0, 0.75), 1.0, 1.0},
    };
}

namespace {

TrajectorySample take_sample(const Density& f, const KernelSpec& spec, double t,
                             int step_index, const RunControls& controls, double dt,
                             double clipped, bool with_dissipation) {
    TrajectorySample s;
    s.t = t;
    s.step_index = step_index;
    s.hydro = hydrodynamics(f);
    s.l_log_l = s.hydro.l_log_l;
    s.fisher = fisher(f).value;
    s.linf = *std::max_element(f.values.begin(), f.values.end());
    const HessianTraceChain chain = hessian_trace_chain(f, spec.gamma);
    s.w_moment = chain.weight_moment;
    s.whf = chain.weighted_hessian;
    s.weighted_trace_sq = chain.weighted_trace_sq;
    s.trace_integral = chain.trace_integral;
    for (const auto& [p, k] : controls.lpk_norms) {
        std::ostringstream key;
        key << "L" << p << "_" << k;
        s.lpk[key.str()] = weighted_lp_norm(f, p, k);
    }
    if (controls.record_psi) {
        for (const PsiBump& bump : default_psi_family()) {
            std::vector<double> prod(f.grid.cells());
            for (std::size_t c = 0; c < prod.size(); ++c)
                prod[c] = f.values[c] * bump.value(f.grid.point(c));
            s.psi_integrals[bump.name] = integrate(f.grid, prod);
        }
    }
    s.dt = dt;
    s.clipped_mass = clipped;
    if (with_dissipation) {
        const PairContext ctx = make_pair_context(f, spec);
        s.dissipation = fisher_dissipation_terms(ctx);
        s.has_dissipation = true;
    }
    return s;
}

} // namespace

TrajectoryRecord run(const InitialData& data, const KernelSpec& spec,
                     const VelocityGrid& grid, const RunControls& controls) {
    if (!(controls.horizon > 0.0))
        throw std::invalid_argument("run: horizon must be positive");
    if (controls.sample_stride < 1 || controls.dissipation_stride < 1)
        throw std::invalid_argument("run: strides must be >= 1");

    TrajectoryRecord rec;
    rec.grid = grid;
    rec.spec = spec;

    Density f = make_initial(data, grid);
    rec.mass0 = integrate(grid, f.values);

    std::vector<double> pending = controls.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::size_t next_snap = 0;
    auto capture_due = [&](double now) {
        while (next_snap < pending.size() && now >= pending[next_snap] - 1e-12) {
            rec.snapshots.emplace_back(now, f.values);
            ++next_snap;
        }
    };

    const bool diss_ok = controls.record_dissipation && grid.n <= 24;
    double t = 0.0;
    int step_index = 0;
    rec.samples.push_back(take_sample(f, spec, t, 0, controls, 0.0, 0.0, diss_ok));
    capture_due(t);

    const double T = controls.horizon;
    while (t < T * (1.0 - 1e-12)) {
        double dt_step;
        if (controls.dt > 0.0) {
            dt_step = controls.dt;
        } else {
            dt_step = controls.step.cfl_safety * cfl_limit(f, spec, controls.step.conv);
            if (controls.max_dt > 0.0) dt_step = std::min(dt_step, controls.max_dt);
        }
        dt_step = std::min(dt_step, T - t);
        StepInfo info;
        f = step(f, spec, dt_step, controls.step, &info);
        t += dt_step;
        ++step_index;
        rec.total_clipped_mass += info.clipped_mass;
        capture_due(t);

        const bool final_step = !(t < T * (1.0 - 1e-12));
        const bool sample_now = step_index % controls.sample_stride == 0 || final_step;
        if (sample_now) {
            const bool with_diss = diss_ok && step_index % controls.dissipation_stride == 0;
            rec.samples.push_back(take_sample(f, spec, t, step_index, controls, info.dt,
                                              info.clipped_mass, with_diss));
        }
    }
    while (next_snap < pending.size()) {
        rec.snapshots.emplace_back(t, f.values);
        ++next_snap;
    }

    for (std::size_t s = 0; s < rec.samples.size(); ++s) {
        const double drift =
            std::abs(rec.samples[s].hydro.mass - rec.mass0) / std::max(rec.mass0, 1e-300);
        rec.max_mass_drift_rel = std::max(rec.max_mass_drift_rel, drift);
        if (s > 0) {
            const auto& prev = rec.samples[s - 1];
            const auto& cur = rec.samples[s];
            const double e_up = cur.hydro.entropy - prev.hydro.entropy;
            const double e_tol = 1e-3 * std::max(std::abs(prev.hydro.entropy), 1e-300);
            if (e_up > e_tol) rec.entropy_monotone = false;
            rec.worst_entropy_uptick =
                std::max(rec.worst_entropy_uptick,
                         e_up / std::max(std::abs(prev.hydro.entropy), 1e-300));
            const double f_up = cur.fisher - prev.fisher;
            const double f_tol = 1e-3 * std::max(std::abs(prev.fisher), 1e-300);
            if (f_up > f_tol) rec.fisher_monotone = false;
            rec.worst_fisher_uptick =
                std::max(rec.worst_fisher_uptick,
                         f_up / std::max(std::abs(prev.fisher), 1e-300));
        }
    }
    return rec;
}

DecayCheck fisher_decay_check(const std::vector<double>& t, const std::vector<double>& i) {
    if (t.size() != i.size())
        throw std::invalid_argument("fisher_decay_check: series length mismatch");
    std::vector<std::size_t> pos;
    for (std::size_t s = 0; s < t.size(); ++s)
        if (t[s] > 0.0) pos.push_back(s);
    if (pos.size() < 10)
        throw std::invalid_argument("fisher_decay_check: need at least 10 samples with t > 0");

    DecayCheck chk;
    for (std::size_t s : pos)
        chk.c0_fit = std::max(chk.c0_fit, i[s] * t[s] / (1.0 + t[s]));

    const std::size_t n_early =
        std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(0.2 * pos.size())));
    for (std::size_t q = 0; q < n_early && q < pos.size(); ++q)
        chk.c_ref = std::max(chk.c_ref, i[pos[q]]);

    chk.pass = true;
    chk.worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t q = n_early; q < pos.size(); ++q) {
        const std::size_t s = pos[q];
        const double bound = chk.c_ref * (1.0 + 1.0 / t[s]);
        const double excess = i[s] / bound - 1.0;
        chk.worst_excess = std::max(chk.worst_excess, excess);
        if (excess > 0.05) chk.pass = false;
    }
    return chk;
}

DecayCheck fisher_decay_check(const TrajectoryRecord& traj) {
    std::vector<double> t, i;
    t.reserve(traj.samples.size());
    i.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        t.push_back(s.t);
        i.push_back(s.fisher);
    }
    return fisher_decay_check(t, i);
}

OdeCheck ode_inequality_check(const TrajectoryRecord& traj, double c1, double C1, double C2) {
    const auto& S = traj.samples;
    if (S.size() < 3)
        throw std::invalid_argument("ode_inequality_check: need at least 3 samples");
    OdeCheck chk;
    const double M0 = traj.mass0;

    for (const auto& s : S) chk.sup_w_moment = std::max(chk.sup_w_moment, s.w_moment);
    chk.c2_hat = c1 / (3.0 * chk.sup_w_moment);

    for (std::size_t s = 1; s + 1 < S.size(); ++s) {
        OdeSampleRow row;
        row.t = S[s].t;
        row.fd_rate = -(S[s + 1].fisher - S[s - 1].fisher) / (S[s + 1].t - S[s - 1].t);
        const double i = S[s].fisher;
        row.rhs = chk.c2_hat * i * i - C1 * M0 * i - C2 * M0 * M0;
        row.margin = row.fd_rate - row.rhs;
        row.dominant = std::max({std::abs(row.fd_rate), chk.c2_hat * i * i, C1 * M0 * i,
                                 C2 * M0 * M0});
        // exact discrete Cauchy-Schwarz: (int f trH)^2 <= wtr2 * w_moment
        row.cs_residual =
            S[s].weighted_trace_sq * S[s].w_moment - S[s].trace_integral * S[s].trace_integral;
        row.trace_slack = 3.0 * S[s].whf - S[s].weighted_trace_sq;
        row.parts_mismatch = std::abs(S[s].fisher + S[s].trace_integral) /
                             std::max(S[s].fisher, 1e-300);
        const double cs_scale = std::abs(S[s].weighted_trace_sq * S[s].w_moment) + 1e-300;
        if (row.cs_residual < -1e-12 * cs_scale) chk.cs_chain_ok = false;
        if (row.trace_slack < -1e-12 * (3.0 * std::abs(S[s].whf) + 1e-300))
            chk.cs_chain_ok = false;
        if (row.margin < -0.10 * row.dominant) chk.margins_ok = false;
        chk.rows.push_back(row);
    }

    // linear-growth shape of w_moment
    const double w0 = S.front().w_moment;
    double num = 0.0, den = 0.0;
    for (const auto& s : S)
        if (s.t > 0.0) {
            num += s.t * (s.w_moment - w0);
            den += s.t * s.t;
        }
    chk.kappa_fit = den > 0.0 ? num / den : 0.0;
    const double kap = std::max(chk.kappa_fit, 0.0);
    for (const auto& s : S)
        if (s.w_moment > 1.05 * (w0 + kap * s.t) + 1e-12 * w0) chk.moment_growth_ok = false;

    chk.pass = chk.cs_chain_ok && chk.margins_ok && chk.moment_growth_ok;
    return chk;
}

HolderCheck holder_initial_check(const TrajectoryRecord& traj, const PsiBump& bump) {
    const auto& S = traj.samples;
    if (S.empty()) throw std::invalid_argument("holder_initial_check: empty trajectory");
    const auto it0 = S.front().psi_integrals.find(bump.name);
    if (it0 == S.front().psi_integrals.end())
        throw std::invalid_argument("holder_initial_check: trajectory has no recorded "
                                    "integrals for test function '" + bump.name + "'");
    const double ref = it0->second;
    const double t0 = S.front().t;
    const double denom_h = std::sqrt(bump.hess_sup());

    HolderCheck chk;
    for (const auto& s : S) {
        const double tau = s.t - t0;
        if (tau <= 0.0) continue;
        const double val = s.psi_integrals.at(bump.name);
        const double ratio = std::abs(val - ref) / (std::sqrt(tau) * denom_h);
        chk.rows.emplace_back(s.t, ratio);
        if (ratio > chk.sup_ratio) {
            chk.sup_ratio = ratio;
            chk.sup_tau = tau;
        }
    }
    return chk;
}

std::vector<DissipationConsistencyRow> dissipation_consistency_check(
    const TrajectoryRecord& traj, double h_env_rel) {
    const auto& S = traj.samples;
    std::vector<DissipationConsistencyRow> rows;
    for (std::size_t s = 1; s + 1 < S.size(); ++s) {
        if (!S[s].has_dissipation) continue;
        DissipationConsistencyRow row;
        row.t = S[s].t;
        const double dtw = S[s + 1].t - S[s - 1].t;
        row.fd = -(S[s + 1].fisher - S[s - 1].fisher) / dtw;
        row.total = S[s].dissipation.fisher_dissipation_total;
        const double scale = std::max(std::abs(row.fd), std::abs(row.total));
        // first-order-in-dt lag envelope from the measured curvature of i(t)
        const double dtl = S[s].t - S[s - 1].t;
        const double dtr = S[s + 1].t - S[s].t;
        const double curv =
            std::abs((S[s + 1].fisher - S[s].fisher) / dtr - (S[s].fisher - S[s - 1].fisher) / dtl) /
            (0.5 * dtw);
        const double env_dt = 0.5 * std::max(dtl, dtr) * curv;
        row.tol_rel = std::max(0.10, 2.0 * env_dt / std::max(scale, 1e-300) + h_env_rel);
        row.rel_err = std::abs(row.fd - row.total) / std::max(scale, 1e-300);
        const double abs_floor = 1e-8 * std::max(1.0, S[s].fisher);
        row.pass = std::abs(row.fd - row.total) <= row.tol_rel * scale + abs_floor;
        rows.push_back(row);
    }
    return rows;
}

} // namespace landau
