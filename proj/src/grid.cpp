#include "landau/grid.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "landau/reduce.hpp"

namespace landau {

VelocityGrid make_grid(int n, double extent) {
    if (n < 4) {
        std::ostringstream os;
        os << "make_grid: n must be at least 4, got " << n;
        throw std::invalid_argument(os.str());
    }
    if (n % 2 != 0) {
        std::ostringstream os;
        os << "make_grid: n must be even so no cell center sits at the origin, got " << n;
        throw std::invalid_argument(os.str());
    }
    if (!std::isfinite(extent) || extent <= 0.0) {
        std::ostringstream os;
        os << "make_grid: extent must be finite and positive, got " << extent;
        throw std::invalid_argument(os.str());
    }
    VelocityGrid g;
    g.n = n;
    g.extent = extent;
    g.h = 2.0 * extent / n;
    return g;
}

Density make_density(const VelocityGrid& grid, std::vector<double> values,
                     double analysis_floor) {
    if (values.size() != grid.cells()) {
        std::ostringstream os;
        os << "make_density: value count " << values.size() << " does not match grid with "
           << grid.cells() << " cells";
        throw std::invalid_argument(os.str());
    }
    double maxf = 0.0;
    for (std::size_t c = 0; c < values.size(); ++c) {
        double v = values[c];
        if (!std::isfinite(v) || v < 0.0) {
            auto [i, j, k] = grid.unflat(c);
            std::ostringstream os;
            os << "make_density: invalid value " << v << " at cell (" << i << "," << j << ","
               << k << ")";
            throw std::invalid_argument(os.str());
        }
        if (v > maxf) maxf = v;
    }
    if (!(analysis_floor > 0.0)) {
        throw std::invalid_argument("make_density: analysis_floor must be positive");
    }
    Density d;
    d.grid = grid;
    d.values = std::move(values);
    d.floor_delta = std::max(1e-300, analysis_floor * maxf);
    return d;
}

double integrate(const VelocityGrid& grid, std::span<const double> cell_values) {
    if (cell_values.size() != grid.cells()) {
        throw std::invalid_argument("integrate: value count does not match grid");
    }
    for (std::size_t c = 0; c < cell_values.size(); ++c) {
        if (!std::isfinite(cell_values[c])) {
            auto [i, j, k] = grid.unflat(c);
            std::ostringstream os;
            os << "integrate: non-finite value at cell (" << i << "," << j << "," << k << ")";
            throw std::domain_error(os.str());
        }
    }
    return grid.h * grid.h * grid.h * pairwise_sum(cell_values);
}

namespace {

// One-dimensional derivative along one axis of the flattened field.
// Interior: (f[i+1]-f[i-1])/2h. Boundary: second-order one-sided.
inline void d1_line(const double* f, double* out, int n, std::ptrdiff_t s, double h) {
    const double inv2h = 1.0 / (2.0 * h);
    out[0] = (-3.0 * f[0] + 4.0 * f[s] - f[2 * s]) * inv2h;
    for (int i = 1; i + 1 < n; ++i) {
        out[static_cast<std::ptrdiff_t>(i) * s] =
            (f[(i + 1) * s] - f[(i - 1) * s]) * inv2h;
    }
    out[static_cast<std::ptrdiff_t>(n - 1) * s] =
        (3.0 * f[(n - 1) * s] - 4.0 * f[(n - 2) * s] + f[(n - 3) * s]) * inv2h;
}

// Sixth-order interior variant; falls back to the second-order stencils on
// the three-cell rim. Exact on quadratics everywhere, like d1_line.
inline void d1_line6(const double* f, double* out, int n, std::ptrdiff_t s, double h) {
    const double inv2h = 1.0 / (2.0 * h);
    const double inv60h = 1.0 / (60.0 * h);
    for (int i = 0; i < n; ++i) {
        double v;
        if (i >= 3 && i + 3 < n) {
            v = (-f[(i - 3) * s] + 9.0 * f[(i - 2) * s] - 45.0 * f[(i - 1) * s] +
                 45.0 * f[(i + 1) * s] - 9.0 * f[(i + 2) * s] + f[(i + 3) * s]) * inv60h;
        } else if (i == 0) {
            v = (-3.0 * f[0] + 4.0 * f[s] - f[2 * s]) * inv2h;
        } else if (i == n - 1) {
            v = (3.0 * f[(n - 1) * s] - 4.0 * f[(n - 2) * s] + f[(n - 3) * s]) * inv2h;
        } else {
            v = (f[(i + 1) * s] - f[(i - 1) * s]) * inv2h;
        }
        out[static_cast<std::ptrdiff_t>(i) * s] = v;
    }
}

// Pure second derivative along one axis. Interior: standard 3-point.
// Boundary: 4-point one-sided, exact on quadratics.
inline void d2_line(const double* f, double* out, int n, std::ptrdiff_t s, double h) {
    const double invh2 = 1.0 / (h * h);
    out[0] = (2.0 * f[0] - 5.0 * f[s] + 4.0 * f[2 * s] - f[3 * s]) * invh2;
    for (int i = 1; i + 1 < n; ++i) {
        out[static_cast<std::ptrdiff_t>(i) * s] =
            (f[(i + 1) * s] - 2.0 * f[i * s] + f[(i - 1) * s]) * invh2;
    }
    out[static_cast<std::ptrdiff_t>(n - 1) * s] =
        (2.0 * f[(n - 1) * s] - 5.0 * f[(n - 2) * s] + 4.0 * f[(n - 3) * s] -
         f[(n - 4) * s]) * invh2;
}

enum class LineOp { d1, d2, d1_order6 };

void apply_axis(const VelocityGrid& g, std::span<const double> in, std::vector<double>& out,
                int axis, LineOp op) {
    const int n = g.n;
    out.resize(g.cells());
    const std::ptrdiff_t strides[3] = {static_cast<std::ptrdiff_t>(n) * n, n, 1};
    const std::ptrdiff_t s = strides[axis];
    // Iterate over all lines perpendicular to `axis`.
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            std::size_t base;
            if (axis == 0) base = g.flat(0, a, b);
            else if (axis == 1) base = g.flat(a, 0, b);
            else base = g.flat(a, b, 0);
            if (op == LineOp::d2) d2_line(in.data() + base, out.data() + base, n, s, g.h);
            else if (op == LineOp::d1_order6)
                d1_line6(in.data() + base, out.data() + base, n, s, g.h);
            else d1_line(in.data() + base, out.data() + base, n, s, g.h);
        }
    }
}

} // namespace

Vec3Field gradient(const VelocityGrid& grid, std::span<const double> values) {
    if (values.size() != grid.cells()) {
        throw std::invalid_argument("gradient: value count does not match grid");
    }
    Vec3Field out;
    for (int axis = 0; axis < 3; ++axis)
        apply_axis(grid, values, out.comp[axis], axis, LineOp::d1);
    return out;
}

Vec3Field gradient6(const VelocityGrid& grid, std::span<const double> values) {
    if (values.size() != grid.cells()) {
        throw std::invalid_argument("gradient6: value count does not match grid");
    }
    Vec3Field out;
    for (int axis = 0; axis < 3; ++axis)
        apply_axis(grid, values, out.comp[axis], axis, LineOp::d1_order6);
    return out;
}

SymMat3Field hessian(const VelocityGrid& grid, std::span<const double> values) {
    if (values.size() != grid.cells()) {
        throw std::invalid_argument("hessian: value count does not match grid");
    }
    SymMat3Field out;
    for (int axis = 0; axis < 3; ++axis)
        apply_axis(grid, values, out.comp[axis], axis, LineOp::d2);

    Vec3Field g1 = gradient(grid, values);
    // Mixed entries: average D_a(D_b f) and D_b(D_a f).
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    std::vector<double> tmp;
    for (int p = 0; p < 3; ++p) {
        const int a = pairs[p][0], b = pairs[p][1];
        apply_axis(grid, g1.comp[b], tmp, a, LineOp::d1);
        std::vector<double>& mixed = out.comp[3 + p];
        mixed = std::move(tmp);
        apply_axis(grid, g1.comp[a], tmp, b, LineOp::d1);
        for (std::size_t c = 0; c < mixed.size(); ++c) mixed[c] = 0.5 * (mixed[c] + tmp[c]);
        tmp.clear();
    }
    return out;
}

LogDerivatives log_derivatives(const Density& f) {
    LogDerivatives out;
    const std::size_t N = f.grid.cells();
    out.log_f.resize(N);
    double floored_mass = 0.0;
    double total_mass = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
        const double v = f.values[c];
        total_mass += v;
        if (v < f.floor_delta) {
            out.log_f[c] = std::log(f.floor_delta);
            ++out.floored_cells;
            floored_mass += v;
        } else {
            out.log_f[c] = std::log(v);
        }
    }
    out.floored_mass_fraction = total_mass > 0.0 ? floored_mass / total_mass : 0.0;
    out.grad = gradient(f.grid, out.log_f);
    out.hess = hessian(f.grid, out.log_f);
    return out;
}

double weighted_lp_norm(const Density& f, double p, double weight_exponent) {
    if (!(p >= 1.0)) {
        throw std::invalid_argument("weighted_lp_norm: p must be in [1, inf]");
    }
    const VelocityGrid& g = f.grid;
    const std::size_t N = g.cells();
    if (std::isinf(p)) {
        double best = 0.0;
        for (std::size_t c = 0; c < N; ++c) {
            const Eigen::Vector3d v = g.point(c);
            const double w = std::pow(1.0 + v.squaredNorm(), 0.5 * weight_exponent);
            best = std::max(best, w * std::abs(f.values[c]));
        }
        return best;
    }
    std::vector<double> cell(N);
    for (std::size_t c = 0; c < N; ++c) {
        const Eigen::Vector3d v = g.point(c);
        const double w = std::pow(1.0 + v.squaredNorm(), 0.5 * weight_exponent);
        cell[c] = std::pow(w * std::abs(f.values[c]), p);
    }
    return std::pow(integrate(g, cell), 1.0 / p);
}

std::uint64_t hash_values(std::span<const double> values) {
    // FNV-1a over the raw bytes.
    std::uint64_t h = 1469598103934665603ull;
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

} // namespace landau
