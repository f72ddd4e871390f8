#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <cstring>

#include "landau/evolution.hpp"
#include "landau/functionals.hpp"
#include "landau/gamma2.hpp"
#include "landau/io.hpp"
#include "landau/kernels.hpp"
#include "landau/pair.hpp"

namespace py = pybind11;
using namespace landau;

namespace {

using CubeArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Density density_from(const CubeArray& arr, double extent) {
    const auto buf = arr.request();
    int n = 0;
    if (buf.ndim == 3) {
        if (buf.shape[0] != buf.shape[1] || buf.shape[1] != buf.shape[2])
            throw std::invalid_argument("values must be an (n, n, n) cube");
        n = static_cast<int>(buf.shape[0]);
    } else if (buf.ndim == 1) {
        n = static_cast<int>(std::llround(std::cbrt(static_cast<double>(buf.shape[0]))));
        if (static_cast<py::ssize_t>(n) * n * n != buf.shape[0])
            throw std::invalid_argument("flat values must have n^3 entries");
    } else {
        throw std::invalid_argument("values must be 1-d (n^3) or 3-d (n, n, n)");
    }
    const VelocityGrid grid = make_grid(n, extent);
    const auto* ptr = static_cast<const double*>(buf.ptr);
    return make_density(grid, std::vector<double>(ptr, ptr + grid.cells()));
}

py::array_t<double> cube_array(const VelocityGrid& grid, const std::vector<double>& values) {
    py::array_t<double> out({grid.n, grid.n, grid.n});
    std::memcpy(out.mutable_data(), values.data(), values.size() * sizeof(double));
    return out;
}

KernelSpec kernel_from(double gamma, std::optional<double> epsilon, const VelocityGrid& grid) {
    return make_kernel(gamma, epsilon.value_or(0.5 * grid.h));
}

InitialData initial_from(const std::string& kind, double mass, double temperature,
                         std::array<double, 3> mean, double support_radius, double amplitude) {
    InitialData data;
    data.kind = initial_kind_from(kind);
    data.mass = mass;
    data.temperature = temperature;
    data.mean = Eigen::Vector3d(mean[0], mean[1], mean[2]);
    data.support_radius = support_radius;
    data.amplitude = amplitude;
    return data;
}

py::dict hydro_dict(const HydrodynamicState& hy) {
    py::dict d;
    d["mass"] = hy.mass;
    d["momentum"] = py::make_tuple(hy.momentum.x(), hy.momentum.y(), hy.momentum.z());
    d["energy"] = hy.energy;
    d["temperature"] = hy.temperature;
    d["entropy"] = hy.entropy;
    d["llogl"] = hy.l_log_l;
    return d;
}

py::dict dissipation_dict(const DissipationReport& rep) {
    py::dict d;
    d["entropy_dissipation"] = rep.entropy_dissipation;
    d["d_par"] = rep.d_par;
    d["d_rad"] = rep.d_rad;
    d["d_sph"] = rep.d_sph;
    d["r_sph"] = rep.r_sph;
    d["fisher_dissipation_total"] = rep.fisher_dissipation_total;
    d["d_par_cut"] = rep.d_par_cut;
    d["d_rad_cut"] = rep.d_rad_cut;
    d["d_sph_cut"] = rep.d_sph_cut;
    d["r_sph_cut"] = rep.r_sph_cut;
    d["j1"] = rep.j1;
    d["j2"] = rep.j2;
    py::dict margins;
    for (const auto& [name, value] : rep.margins) margins[py::str(name)] = value;
    d["margins"] = margins;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Velocity-space collision laboratory: densities on a cubic grid, "
              "entropy/Fisher functionals, pairwise dissipation reports, evolution runs";

    py::register_exception<numerical_abort>(m, "NumericalAbort", PyExc_RuntimeError);
    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);

    m.def(
        "initial",
        [](const std::string& kind, int n, double extent, double mass, double temperature,
           std::array<double, 3> mean, double support_radius, double amplitude) {
            const VelocityGrid grid = make_grid(n, extent);
            const Density f = make_initial(
                initial_from(kind, mass, temperature, mean, support_radius, amplitude), grid);
            return cube_array(grid, f.values);
        },
        py::arg("kind"), py::arg("n"), py::arg("extent"), py::arg("mass") = 1.0,
        py::arg("temperature") = 1.0, py::arg("mean") = std::array<double, 3>{0.0, 0.0, 0.0},
        py::arg("support_radius") = 3.0, py::arg("amplitude") = 0.2,
        "Sample a named closed-form initial density at cell centers");

    m.def(
        "cell_centers",
        [](int n, double extent) {
            const VelocityGrid grid = make_grid(n, extent);
            std::vector<double> centers(static_cast<std::size_t>(grid.n));
            for (int i = 0; i < grid.n; ++i) centers[static_cast<std::size_t>(i)] = grid.center(i);
            return py::array_t<double>(static_cast<py::ssize_t>(centers.size()), centers.data());
        },
        py::arg("n"), py::arg("extent"), "1-d cell-center coordinates of the cubic grid");

    m.def(
        "hydrodynamics",
        [](const CubeArray& values, double extent) {
            return hydro_dict(hydrodynamics(density_from(values, extent)));
        },
        py::arg("values"), py::arg("extent"),
        "Mass, momentum, energy, temperature, entropy, and the L log L norm");

    m.def(
        "fisher",
        [](const CubeArray& values, double extent) {
            const FisherReport fr = fisher(density_from(values, extent));
            py::dict d;
            d["value"] = fr.value;
            d["grad_form"] = fr.grad_form;
            d["ratio_form"] = fr.ratio_form;
            d["sqrt_form"] = fr.sqrt_form;
            d["spread"] = fr.spread;
            return d;
        },
        py::arg("values"), py::arg("extent"),
        "Fisher information in its three discrete forms plus their spread");

    m.def(
        "dissipation",
        [](const CubeArray& values, double extent, double gamma, std::optional<double> epsilon) {
            const Density f = density_from(values, extent);
            const KernelSpec spec = kernel_from(gamma, epsilon, f.grid);
            const PairContext ctx = make_pair_context(f, spec);
            return dissipation_dict(fisher_dissipation_terms(ctx));
        },
        py::arg("values"), py::arg("extent"), py::arg("gamma"),
        py::arg("epsilon") = std::nullopt,
        "Pairwise entropy/Fisher dissipation report (grids up to n = 24)");

    m.def(
        "step",
        [](const CubeArray& values, double extent, double gamma, double dt,
           std::optional<double> epsilon, bool semi_implicit) {
            const Density f = density_from(values, extent);
            const KernelSpec spec = kernel_from(gamma, epsilon, f.grid);
            StepControls controls;
            controls.semi_implicit = semi_implicit;
            StepInfo info;
            const Density g = step(f, spec, dt, controls, &info);
            py::dict d;
            d["dt"] = info.dt;
            d["lambda_max"] = info.lambda_max;
            d["cfl_limit"] = info.cfl_limit;
            d["clipped_mass"] = info.clipped_mass;
            d["solver_iters"] = info.solver_iters;
            return py::make_tuple(cube_array(g.grid, g.values), d);
        },
        py::arg("values"), py::arg("extent"), py::arg("gamma"), py::arg("dt"),
        py::arg("epsilon") = std::nullopt, py::arg("semi_implicit") = false,
        "One conservative face-flux Euler update; raises NumericalAbort past the CFL limit");

    m.def(
        "cfl_limit",
        [](const CubeArray& values, double extent, double gamma, std::optional<double> epsilon) {
            const Density f = density_from(values, extent);
            return cfl_limit(f, kernel_from(gamma, epsilon, f.grid));
        },
        py::arg("values"), py::arg("extent"), py::arg("gamma"),
        py::arg("epsilon") = std::nullopt, "Admissible explicit time step at this state");

    m.def(
        "run_series",
        [](const std::string& kind, int n, double extent, double gamma, double horizon,
           double dt, double mass, double temperature, std::array<double, 3> mean,
           double support_radius, double amplitude, std::optional<double> epsilon,
           int sample_stride, bool record_dissipation, int dissipation_stride) {
            const VelocityGrid grid = make_grid(n, extent);
            const KernelSpec spec = kernel_from(gamma, epsilon, grid);
            RunControls rc;
            rc.horizon = horizon;
            rc.dt = dt;
            rc.sample_stride = sample_stride;
            rc.record_dissipation = record_dissipation;
            rc.dissipation_stride = dissipation_stride;
            const TrajectoryRecord traj =
                run(initial_from(kind, mass, temperature, mean, support_radius, amplitude), spec,
                    grid, rc);
            auto column = [&](auto&& get) {
                std::vector<double> vals;
                vals.reserve(traj.samples.size());
                for (const auto& s : traj.samples) vals.push_back(get(s));
                return py::array_t<double>(static_cast<py::ssize_t>(vals.size()), vals.data());
            };
            py::dict d;
            d["t"] = column([](const TrajectorySample& s) { return s.t; });
            d["mass"] = column([](const TrajectorySample& s) { return s.hydro.mass; });
            d["energy"] = column([](const TrajectorySample& s) { return s.hydro.energy; });
            d["entropy"] = column([](const TrajectorySample& s) { return s.hydro.entropy; });
            d["fisher"] = column([](const TrajectorySample& s) { return s.fisher; });
            d["linf"] = column([](const TrajectorySample& s) { return s.linf; });
            d["mass_drift_rel"] = traj.max_mass_drift_rel;
            d["entropy_monotone"] = traj.entropy_monotone;
            d["fisher_monotone"] = traj.fisher_monotone;
            py::list diss;
            for (const auto& s : traj.samples)
                if (s.has_dissipation) {
                    py::dict row = dissipation_dict(s.dissipation);
                    row["t"] = s.t;
                    diss.append(row);
                }
            d["dissipation"] = diss;
            return d;
        },
        py::arg("kind"), py::arg("n"), py::arg("extent"), py::arg("gamma"),
        py::arg("horizon"), py::arg("dt") = 0.0, py::arg("mass") = 1.0,
        py::arg("temperature") = 1.0, py::arg("mean") = std::array<double, 3>{0.0, 0.0, 0.0},
        py::arg("support_radius") = 3.0, py::arg("amplitude") = 0.2,
        py::arg("epsilon") = std::nullopt, py::arg("sample_stride") = 1,
        py::arg("record_dissipation") = false, py::arg("dissipation_stride") = 10,
        "Evolve a named initial density and return the sampled functional series");

    m.def(
        "save_snapshot",
        [](const std::filesystem::path& path, const CubeArray& values, double extent,
           double gamma, double time) {
            const Density f = density_from(values, extent);
            Snapshot snap;
            snap.grid = f.grid;
            snap.gamma = gamma;
            snap.time = time;
            snap.values = f.values;
            save_snapshot(path, snap);
        },
        py::arg("path"), py::arg("values"), py::arg("extent"), py::arg("gamma") = -3.0,
        py::arg("time") = 0.0, "Write the binary state format (atomic, bit-exact round trip)");

    m.def(
        "load_snapshot",
        [](const std::filesystem::path& path) {
            const Snapshot snap = load_snapshot(path);
            py::dict d;
            d["values"] = cube_array(snap.grid, snap.values);
            d["extent"] = snap.grid.extent;
            d["gamma"] = snap.gamma;
            d["time"] = snap.time;
            return d;
        },
        py::arg("path"), "Read the binary state format back");

    m.def(
        "gamma2_probe",
        [](int seeds, int max_degree, int steps, std::uint64_t seed, int n_theta, int n_phi) {
            const ProbeResult pr = probe_minimum(seeds, max_degree, steps, seed, n_theta, n_phi);
            py::dict d;
            d["min_ratio"] = pr.min_ratio;
            d["argmin_seed"] = pr.argmin_seed;
            d["seed_ratios"] = py::array_t<double>(
                static_cast<py::ssize_t>(pr.seed_ratios.size()), pr.seed_ratios.data());
            return d;
        },
        py::arg("seeds") = 8, py::arg("max_degree") = 4, py::arg("steps") = 40,
        py::arg("seed") = 12345, py::arg("n_theta") = 24, py::arg("n_phi") = 48,
        "Descent probe for the minimal spherical curvature ratio");

    m.def("eta", &eta, py::arg("r"), "Increasing C^2 cutoff used by the pairwise kernels");
    m.def("cube_kernel_average", &cube_kernel_average, py::arg("p"),
          "Mean of |u|^p over the unit cube, p in (-3, 1]");
}
