#include "landau/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "CLI11.hpp"

#include "landau/evolution.hpp"
#include "landau/functionals.hpp"
#include "landau/gamma2.hpp"
#include "landau/io.hpp"
#include "landau/kernels.hpp"
#include "landau/pair.hpp"
#include "landau/reduce.hpp"

namespace landau {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

int finish(Summary& s, std::vector<std::string>& failed, std::ostream& out) {
    if (!failed.empty()) s.add("failed.checks", join_names(failed));
    out << s.text();
    return failed.empty() ? kExitOk : kExitCheckFailure;
}

void add_hydro_rows(Summary& s, const std::string& prefix, const HydrodynamicState& hy) {
    s.add(prefix + ".mass", hy.mass);
    s.add(prefix + ".px", hy.momentum.x());
    s.add(prefix + ".py", hy.momentum.y());
    s.add(prefix + ".pz", hy.momentum.z());
    s.add(prefix + ".energy", hy.energy);
    s.add(prefix + ".temperature", hy.temperature);
    s.add(prefix + ".entropy", hy.entropy);
    s.add(prefix + ".llogl", hy.l_log_l);
}

void add_dissipation_rows(Summary& s, const std::string& prefix, const DissipationReport& d) {
    s.add(prefix + ".entropy_dissipation", d.entropy_dissipation);
    s.add(prefix + ".d_par", d.d_par);
    s.add(prefix + ".d_rad", d.d_rad);
    s.add(prefix + ".d_sph", d.d_sph);
    s.add(prefix + ".r_sph", d.r_sph);
    s.add(prefix + ".fisher_dissipation_total", d.fisher_dissipation_total);
    s.add(prefix + ".d_par_cut", d.d_par_cut);
    s.add(prefix + ".d_rad_cut", d.d_rad_cut);
    s.add(prefix + ".d_sph_cut", d.d_sph_cut);
    s.add(prefix + ".r_sph_cut", d.r_sph_cut);
    s.add(prefix + ".j1", d.j1);
    s.add(prefix + ".j2", d.j2);
    for (const auto& [name, value] : d.margins) s.add(prefix + ".margin." + name, value);
}

bool enabled(const RunConfig& cfg, const std::string& name) {
    return std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end();
}

} // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    RunConfig cfg = parse_config_file(opt.config);
    if (opt.out_dir) {
        cfg.out_dir = *opt.out_dir;
        validate_config(cfg);
    }

    const VelocityGrid grid = make_grid(cfg.n, cfg.extent);
    const double eps = cfg.epsilon < 0.0 ? 0.5 * grid.h : cfg.epsilon;
    const KernelSpec spec = make_kernel(cfg.gamma, eps);

    RunControls rc;
    rc.horizon = cfg.horizon;
    rc.dt = cfg.dt;
    rc.max_dt = cfg.max_dt;
    rc.sample_stride = cfg.sample_stride;
    rc.dissipation_stride = cfg.dissipation_stride;
    rc.record_dissipation = true;
    rc.snapshot_times = cfg.snapshot_times;
    rc.step.cfl_safety = cfg.cfl_safety;
    rc.step.semi_implicit = cfg.semi_implicit;

    const TrajectoryRecord traj = run(cfg.initial, spec, grid, rc);

    const std::filesystem::path dir = cfg.out_dir;
    const auto series_path = dir / "series.csv";
    atomic_write(series_path, series_csv(traj, cfg.cutoff_columns));

    Summary s;
    s.add("grid.n", std::to_string(cfg.n));
    s.add("grid.extent", cfg.extent);
    s.add("kernel.gamma", cfg.gamma);
    s.add("kernel.epsilon", eps);
    s.add("kernel.eta_sup_dd", spec.eta_sup_dd);
    s.add("kernel.c_delta", spec.c_delta);
    s.add("initial.kind", to_string(cfg.initial.kind));
    s.add("run.samples", static_cast<std::uint64_t>(traj.samples.size()));
    s.add("run.steps", static_cast<std::uint64_t>(traj.samples.back().step_index));
    s.add("run.mass_drift_rel", traj.max_mass_drift_rel);
    s.add("run.clipped_mass", traj.total_clipped_mass);
    s.add("output.series", series_path.string());

    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.lfsh", k);
        const auto snap_path = dir / name;
        Snapshot snap;
        snap.grid = grid;
        snap.gamma = cfg.gamma;
        snap.time = traj.snapshots[k].first;
        snap.values = traj.snapshots[k].second;
        save_snapshot(snap_path, snap);
        const std::string key = "output.snapshot." + std::to_string(k);
        s.add(key + ".file", snap_path.string());
        s.add(key + ".time", snap.time);
    }

    const auto& last = traj.samples.back();
    s.add("final.t", last.t);
    add_hydro_rows(s, "final", last.hydro);
    s.add("final.fisher", last.fisher);
    s.add("final.linf", last.linf);
    s.add("final.w_moment", last.w_moment);

    std::vector<std::string> failed;
    auto verdict = [&](const std::string& name, bool raw_pass, bool scaled_pass) {
        s.add_flag("check." + name, scaled_pass);
        s.add_flag("check." + name + ".raw", raw_pass);
        if (!scaled_pass) failed.push_back(name);
    };

    if (enabled(cfg, "conservation")) {
        const double drift = traj.max_mass_drift_rel;
        s.add("check.conservation.mass_drift_rel", drift);
        verdict("conservation", drift <= 1e-9, drift <= 1e-9 * tol_scale());
    }
    if (enabled(cfg, "monotonicity")) {
        s.add("check.monotonicity.worst_entropy_uptick", traj.worst_entropy_uptick);
        s.add("check.monotonicity.worst_fisher_uptick", traj.worst_fisher_uptick);
        const bool ok = traj.entropy_monotone && traj.fisher_monotone;
        verdict("monotonicity", ok, ok);
    }
    if (enabled(cfg, "decay")) {
        std::size_t positive = 0;
        for (const auto& smp : traj.samples)
            if (smp.t > 0.0) ++positive;
        if (positive < 10) {
            s.add("check.decay.note", "needs >= 10 samples with t > 0");
            verdict("decay", false, false);
        } else {
            const DecayCheck dc = fisher_decay_check(traj);
            s.add("check.decay.c0_fit", dc.c0_fit);
            s.add("check.decay.c_ref", dc.c_ref);
            s.add("check.decay.worst_excess", dc.worst_excess);
            verdict("decay", dc.pass, dc.pass);
        }
    }
    if (enabled(cfg, "consistency")) {
        const auto rows = dissipation_consistency_check(traj, 0.0);
        if (rows.empty()) {
            s.add("check.consistency.note", "no interior dissipation samples recorded");
            verdict("consistency", false, false);
        } else {
            double worst_rel = 0.0, worst_tol = 0.0, worst_t = 0.0;
            bool ok = true;
            for (const auto& r : rows) {
                if (r.rel_err > worst_rel) {
                    worst_rel = r.rel_err;
                    worst_tol = r.tol_rel;
                    worst_t = r.t;
                }
                ok = ok && r.pass;
            }
            s.add("check.consistency.samples", static_cast<std::uint64_t>(rows.size()));
            s.add("check.consistency.worst_rel_err", worst_rel);
            s.add("check.consistency.worst_tol_rel", worst_tol);
            s.add("check.consistency.worst_t", worst_t);
            verdict("consistency", ok, ok);
        }
    }

    if (!failed.empty()) s.add("failed.checks", join_names(failed));
    atomic_write(dir / "summary.txt", s.text());
    out << s.text();
    return failed.empty() ? kExitOk : kExitCheckFailure;
}

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out) {
    Snapshot snap = load_snapshot(opt.snapshot);
    const double gamma = opt.gamma.value_or(snap.gamma);
    if (!(gamma >= -3.0 && gamma < -2.0))
        throw input_error("analyze: gamma must be in [-3, -2), got " + format_double(gamma));

    const VelocityGrid grid = snap.grid;
    const Density f = make_density(grid, std::move(snap.values));
    const KernelSpec spec = make_kernel(gamma, 0.5 * grid.h);

    Summary s;
    s.add("snapshot.file", opt.snapshot.string());
    s.add("snapshot.n", std::to_string(grid.n));
    s.add("snapshot.extent", grid.extent);
    s.add("snapshot.gamma", gamma);
    s.add("snapshot.time", snap.time);

    const HydrodynamicState hy = hydrodynamics(f);
    add_hydro_rows(s, "hydro", hy);
    const FisherReport fr = fisher(f);
    s.add("fisher.value", fr.value);
    s.add("fisher.grad_form", fr.grad_form);
    s.add("fisher.ratio_form", fr.ratio_form);
    s.add("fisher.sqrt_form", fr.sqrt_form);
    s.add("fisher.spread", fr.spread);

    std::vector<std::string> failed;
    const bool pairwise = opt.pairwise || opt.brute_force || opt.coercivity;
    if (!pairwise) return finish(s, failed, out);

    const PairContext ctx = make_pair_context(f, spec);
    const DissipationReport rep = fisher_dissipation_terms(ctx);
    add_dissipation_rows(s, "diss", rep);
    const JTerms jt = j_terms(ctx);
    s.add("j.bound_rhs", jt.bound_rhs);
    s.add("j.margin", jt.margin);

    if (opt.brute_force) {
        const DissipationReport ref = fisher_dissipation_terms_bruteforce(f, spec);
        const std::vector<std::pair<double, double>> fields = {
            {rep.entropy_dissipation, ref.entropy_dissipation},
            {rep.d_par, ref.d_par},
            {rep.d_rad, ref.d_rad},
            {rep.d_sph, ref.d_sph},
            {rep.r_sph, ref.r_sph},
            {rep.fisher_dissipation_total, ref.fisher_dissipation_total},
            {rep.d_par_cut, ref.d_par_cut},
            {rep.d_rad_cut, ref.d_rad_cut},
            {rep.d_sph_cut, ref.d_sph_cut},
            {rep.r_sph_cut, ref.r_sph_cut},
            {rep.j1, ref.j1},
            {rep.j2, ref.j2}};
        double scale = 0.0;
        for (const auto& [a, b] : fields) scale = std::max({scale, std::abs(a), std::abs(b)});
        double worst = 0.0;
        for (const auto& [a, b] : fields) {
            const double denom = std::max({std::abs(a), std::abs(b), 1e-14 * scale, 1e-300});
            worst = std::max(worst, std::abs(a - b) / denom);
        }
        s.add("brute.max_rel_dev", worst);
        const bool ok = worst <= 1e-12 * tol_scale();
        s.add_flag("brute.agreement", ok);
        if (!ok) failed.push_back("brute.agreement");
    }

    if (opt.coercivity) {
        const CoercivityProbe cp = coercivity_probe(ctx);
        s.add("coercivity.c_min", cp.c_min);
        s.add("coercivity.c_min_basis", cp.c_min_basis);
        s.add("coercivity.c_min_field", cp.c_min_field);
        const double whf = weighted_hessian_functional(f, gamma);
        s.add("coercivity.weighted_hessian", whf);
        const InequalityCheck ic =
            dissipation_inequality_check(rep, cp, hy.mass, fr.grad_form, whf, spec);
        s.add("inequality.factor", ic.factor);
        s.add("inequality.c1", ic.c1);
        s.add("inequality.C1", ic.C1);
        s.add("inequality.C2", ic.C2);
        s.add("inequality.margin1", ic.margin1);
        s.add("inequality.margin1_scale", ic.margin1_scale);
        s.add("inequality.lambda3_margin_raw", ic.lambda3_margin_raw);
        s.add("inequality.lambda3_margin_cut", ic.lambda3_margin_cut);
        s.add("inequality.jchain_margin", ic.jchain_margin);
        s.add("inequality.j2_margin", ic.j2_margin);
        s.add_flag("inequality.pass", ic.pass);
        if (!ic.pass) failed.push_back("inequality");
    }

    return finish(s, failed, out);
}

int cmd_gamma2(const Gamma2Options& opt, std::ostream& out) {
    Summary s;
    std::vector<std::string> failed;

    const SphereGrid lin_grid = make_sphere_grid(opt.lin_n_theta, opt.lin_n_phi);
    const Gamma2Evaluator lin_eval(lin_grid);
    const double amp = 0.05;
    auto harmonic_field = [&](int l, int m, bool symmetric) {
        return sphere_field_from(
            lin_grid,
            [&](const Eigen::Vector3d& sigma) {
                const double theta = std::acos(std::clamp(sigma.z(), -1.0, 1.0));
                const double phi = std::atan2(sigma.y(), sigma.x());
                return std::exp(amp * real_spherical_harmonic(l, m, theta, phi));
            },
            symmetric);
    };
    const double ratio_l2 = lin_eval.ratio(harmonic_field(2, 0, true));
    const double ratio_l1 = lin_eval.ratio(harmonic_field(1, 0, false));
    s.add("lin.l2.ratio", ratio_l2);
    s.add("lin.l1.ratio", ratio_l1);
    const bool l2_ok = std::abs(ratio_l2 - 6.0) <= 0.05;
    const bool l1_ok = std::abs(ratio_l1 - 2.0) <= 0.05;
    s.add_flag("lin.l2", l2_ok);
    s.add_flag("lin.l1", l1_ok);
    if (!l2_ok) failed.push_back("lin.l2");
    if (!l1_ok) failed.push_back("lin.l1");

    const ProbeResult pr =
        probe_minimum(opt.seeds, opt.max_degree, opt.steps, opt.seed, opt.n_theta, opt.n_phi);
    s.add("probe.seeds", static_cast<std::uint64_t>(opt.seeds));
    s.add("probe.max_degree", std::to_string(opt.max_degree));
    s.add("probe.steps", std::to_string(opt.steps));
    s.add("probe.seed", static_cast<std::uint64_t>(opt.seed));
    for (std::size_t k = 0; k < pr.seed_ratios.size(); ++k)
        s.add("probe.seed_ratio." + std::to_string(k), pr.seed_ratios[k]);
    s.add("probe.min_ratio", pr.min_ratio);
    s.add("probe.argmin_seed", std::to_string(pr.argmin_seed));
    const bool min_ok = pr.min_ratio >= 5.4;
    s.add_flag("probe.min", min_ok);
    if (!min_ok) failed.push_back("probe.min");

    return finish(s, failed, out);
}

int cmd_selftest(std::ostream& out) {
    Summary s;
    std::vector<std::string> failed;
    auto record = [&](const std::string& name, bool ok) {
        s.add_flag("selftest." + name, ok);
        if (!ok) failed.push_back(name);
    };
    const char* fault_env = std::getenv("LF_SELFTEST_FAULT");
    const std::string fault = fault_env ? fault_env : "";

    {
        std::mt19937_64 rng(9001);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        double worst = 0.0;
        for (int sample = 0; sample < 10000; ++sample) {
            Eigen::Vector3d v, w, gv, gw;
            do {
                v = {u(rng), u(rng), u(rng)};
                w = {u(rng), u(rng), u(rng)};
            } while ((v - w).norm() < 0.1);
            gv = {u(rng), u(rng), u(rng)};
            gw = {u(rng), u(rng), u(rng)};
            const double g2 = gv.squaredNorm() + gw.squaredNorm();
            worst = std::max(worst,
                             decomposition_identity_residual(gv, gw, v, w) / std::max(g2, 1e-300));
        }
        s.add("decomposition.worst_rel_residual", worst);
        record("decomposition", worst <= 1e-12);
    }

    {
        std::mt19937_64 rng(4242);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        double worst_a = 0.0, worst_tr = 0.0;
        for (int sample = 0; sample < 200; ++sample) {
            const Eigen::Vector3d z{u(rng), u(rng), u(rng)};
            Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
            for (int k = 0; k < 3; ++k) {
                const Eigen::Vector3d bk = b_field(k, z);
                sum += bk * bk.transpose();
            }
            const Eigen::Matrix3d a = a_matrix(z);
            const double z2 = std::max(z.squaredNorm(), 1e-300);
            worst_a = std::max(worst_a, (a - sum).norm() / z2);
            worst_tr = std::max(worst_tr, std::abs(a.trace() - 2.0 * z.squaredNorm()) / z2);
        }
        s.add("a_decomposition.worst", worst_a);
        s.add("trace_relation.worst", worst_tr);
        record("a_decomposition", worst_a <= 1e-14);
        record("trace_relation", worst_tr <= 1e-14);
    }

    {
        // Frozen cutoff values: r^5 below the blend, exact knots, saturation.
        struct Row {
            double r, expected;
        };
        std::vector<Row> table = {{0.25, 0.0009765625}, {0.5, 0.03125}, {1.0, 1.0}, {2.0, 1.0}};
        if (fault == "eta") table[1].expected += 1e-3;
        double worst = 0.0;
        for (const auto& row : table) worst = std::max(worst, std::abs(eta(row.r) - row.expected));
        bool increasing = true;
        for (int k = 0; k + 1 <= 200; ++k) {
            const double r0 = 1.5 * k / 200.0, r1 = 1.5 * (k + 1) / 200.0;
            if (eta(r1) < eta(r0) - 1e-12) increasing = false;
        }
        const double jump = std::abs(eta(0.5 + 1e-9) - eta(0.5 - 1e-9)) +
                            std::abs(eta(1.0 + 1e-9) - eta(1.0 - 1e-9));
        const KernelSpec spec = make_kernel(-3.0, 0.0);
        s.add("eta.table_worst_abs", worst);
        s.add("eta.knot_jump", jump);
        s.add("eta.sup_dd", spec.eta_sup_dd);
        s.add("eta.c_delta", spec.c_delta);
        record("eta_table", worst <= 1e-13 && increasing && jump <= 1e-8);
        record("eta_curvature", spec.eta_sup_dd >= 20.0 && spec.eta_sup_dd <= 21.5);
        record("eta_c_delta", spec.c_delta >= 13.0 && spec.c_delta <= 13.5);
    }

    {
        const double unit = cube_kernel_average(0.0);
        const double coulomb = cube_kernel_average(-1.0);
        s.add("quadrature.cube_unit", unit);
        s.add("quadrature.cube_coulomb", coulomb);
        // Quadrature-node rounding accumulates to ~1e-11 over the box sums.
        record("cube_quadrature",
               std::abs(unit - 1.0) <= 1e-10 && std::abs(coulomb - 2.380077363979554) <= 1e-9);

        const SphereGrid sg = make_sphere_grid(16, 16);
        const SphereField one = sphere_field_from(sg, [](const Eigen::Vector3d&) { return 1.0; },
                                                  true);
        const double area = sphere_integral(one);
        SphereField y2 = one;
        for (int it = 0; it < sg.n_theta; ++it)
            for (int ip = 0; ip < sg.n_phi; ++ip)
                y2.values[sg.idx(it, ip)] = std::pow(
                    real_spherical_harmonic(2, 0, sg.theta[it], ip * sg.dphi), 2);
        const double norm = sphere_integral(y2);
        s.add("quadrature.sphere_area", area);
        s.add("quadrature.y20_norm", norm);
        record("sphere_quadrature",
               std::abs(area - 4.0 * kPi) <= 1e-12 * 4.0 * kPi && std::abs(norm - 1.0) <= 1e-12);
    }

    {
        const VelocityGrid grid = make_grid(8, 4.0);
        InitialData data;
        const Density f = make_initial(data, grid);
        Snapshot snap;
        snap.grid = grid;
        snap.gamma = -3.0;
        snap.time = 0.25;
        snap.values = f.values;
        const auto path = std::filesystem::temp_directory_path() / "landau_selftest.lfsh";
        save_snapshot(path, snap);
        const Snapshot back = load_snapshot(path);
        const bool exact = back.grid.n == grid.n && back.grid.extent == grid.extent &&
                           back.gamma == snap.gamma && back.time == snap.time &&
                           hash_values(back.values) == hash_values(snap.values);
        bool guards = false;
        {
            // Corrupt the magic and expect a refusal; then truncate.
            std::ifstream in(path, std::ios::binary);
            std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            raw[0] = 'X';
            const auto bad = std::filesystem::temp_directory_path() / "landau_selftest_bad.lfsh";
            atomic_write(bad, raw);
            try {
                load_snapshot(bad);
            } catch (const input_error&) {
                guards = true;
            }
            try {
                atomic_write(bad, raw.substr(0, 20));
                load_snapshot(bad);
                guards = false;
            } catch (const input_error&) {
            }
            std::filesystem::remove(bad);
        }
        std::filesystem::remove(path);
        record("snapshot_roundtrip", exact);
        record("snapshot_guards", guards);
    }

    {
        RunConfig cfg;
        cfg.n = 24;
        cfg.extent = 5.5;
        cfg.gamma = -2.5;
        cfg.epsilon = 0.01;
        cfg.initial.kind = InitialData::Kind::perturbed_maxwellian;
        cfg.initial.amplitude = 0.15;
        cfg.initial.mean = {0.1, -0.2, 0.3};
        cfg.dt = 1e-4;
        cfg.max_dt = 2e-3;
        cfg.checks = {"conservation", "decay"};
        cfg.snapshot_times = {0.0, 0.25};
        cfg.seed = 77;
        const std::string text = serialize_config(cfg);
        std::istringstream in(text);
        const RunConfig back = parse_config(in);
        record("config_roundtrip", back == cfg && serialize_config(back) == text);
    }

    return finish(s, failed, out);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Landau collision laboratory: evolution runs, dissipation reports, "
                 "curvature probes"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::string sim_out;
    auto* sub_sim = app.add_subcommand(
        "simulate", "Run a configured evolution; write series, snapshots, and a summary");
    sub_sim->add_option("--config", sim.config, "run configuration file")->required();
    auto* sim_out_opt =
        sub_sim->add_option("--out", sim_out, "override the configured output directory");

    AnalyzeOptions an;
    double gamma_flag = 0.0;
    auto* sub_an = app.add_subcommand("analyze", "Report functionals of a stored snapshot");
    sub_an->add_option("--snapshot", an.snapshot, "snapshot file")->required();
    auto* gamma_opt =
        sub_an->add_option("--gamma", gamma_flag, "override the snapshot kernel exponent");
    sub_an->add_flag("--pairwise", an.pairwise, "compute the pairwise dissipation functionals");
    sub_an->add_flag("--brute-force", an.brute_force,
                     "compare the pair loop against the naive reference (small grids)");
    sub_an->add_flag("--coercivity", an.coercivity,
                     "run the coercivity scan and the inequality margins");

    Gamma2Options g2;
    auto* sub_g2 = app.add_subcommand("gamma2", "Spherical curvature-ratio probe");
    sub_g2->add_option("--degree", g2.max_degree, "max harmonic degree (even)");
    sub_g2->add_option("--seeds", g2.seeds, "descent restarts");
    sub_g2->add_option("--steps", g2.steps, "descent steps per restart");
    sub_g2->add_option("--seed", g2.seed, "base random seed");
    sub_g2->add_option("--n-theta", g2.n_theta, "probe colatitude nodes");
    sub_g2->add_option("--n-phi", g2.n_phi, "probe longitude nodes");

    auto* sub_st = app.add_subcommand("selftest", "Run the identity and format suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        if (sub_sim->parsed()) {
            if (sim_out_opt->count() > 0) sim.out_dir = sim_out;
            return cmd_simulate(sim, out);
        }
        if (sub_an->parsed()) {
            if (gamma_opt->count() > 0) an.gamma = gamma_flag;
            return cmd_analyze(an, out);
        }
        if (sub_g2->parsed()) return cmd_gamma2(g2, out);
        if (sub_st->parsed()) return cmd_selftest(out);
    } catch (const numerical_abort& e) {
        err << "numerical abort: " << e.what() << '\n';
        return kExitNumericalAbort;
    } catch (const input_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    err << "error: no subcommand given\n";
    return kExitInputError;
}

} // namespace landau
