#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace landau {

// Uniform cubic velocity grid on [-extent, extent]^3 with n cells per axis.
// Cell centers sit at -extent + (i + 1/2) h, h = 2 extent / n.
struct VelocityGrid {
    int n = 0;
    double extent = 0.0;
    double h = 0.0;

    std::size_t cells() const { return static_cast<std::size_t>(n) * n * n; }
    double center(int i) const { return -extent + (i + 0.5) * h; }
    std::size_t flat(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }
    std::array<int, 3> unflat(std::size_t c) const {
        int k = static_cast<int>(c % n);
        int j = static_cast<int>((c / n) % n);
        int i = static_cast<int>(c / (static_cast<std::size_t>(n) * n));
        return {i, j, k};
    }
    Eigen::Vector3d point(int i, int j, int k) const {
        return {center(i), center(j), center(k)};
    }
    Eigen::Vector3d point(std::size_t c) const {
        auto [i, j, k] = unflat(c);
        return point(i, j, k);
    }
};

// Throws std::invalid_argument for n < 4, odd n, or non-finite/non-positive extent.
VelocityGrid make_grid(int n, double extent);

// Nonnegative density sample on a grid. floor_delta is used only inside
// logarithms: log_derivatives works on log(max(f, floor_delta)).
struct Density {
    VelocityGrid grid;
    std::vector<double> values;
    double floor_delta = 1e-300;
};

// floor_delta = max(1e-300, analysis_floor * max f). Throws on size mismatch,
// negative entries, or non-finite entries.
Density make_density(const VelocityGrid& grid, std::vector<double> values,
                     double analysis_floor = 1e-14);

// h^3 * pairwise-tree sum. Throws std::domain_error naming the first
// non-finite cell index.
double integrate(const VelocityGrid& grid, std::span<const double> cell_values);

struct Vec3Field {
    std::array<std::vector<double>, 3> comp;
};

// Symmetric 3x3 per cell, components ordered xx, yy, zz, xy, xz, yz.
struct SymMat3Field {
    std::array<std::vector<double>, 6> comp;
    Eigen::Matrix3d at(std::size_t c) const {
        Eigen::Matrix3d m;
        m << comp[0][c], comp[3][c], comp[4][c],
             comp[3][c], comp[1][c], comp[5][c],
             comp[4][c], comp[5][c], comp[2][c];
        return m;
    }
};

// Second-order central differences; second-order one-sided rows at the
// boundary. Exact on quadratics including the boundary rows.
Vec3Field gradient(const VelocityGrid& grid, std::span<const double> values);

// Sixth-order central differences away from the boundary, second-order on
// the three-cell rim. Used where quadrature accuracy matters more than
// stencil locality (the Fisher forms).
Vec3Field gradient6(const VelocityGrid& grid, std::span<const double> values);

// Mixed entries are the average of the two composition orders of the
// first-derivative stencils, so the output is symmetric by construction.
SymMat3Field hessian(const VelocityGrid& grid, std::span<const double> values);

struct LogDerivatives {
    std::vector<double> log_f;
    Vec3Field grad;
    SymMat3Field hess;
    std::size_t floored_cells = 0;     // cells where f < floor_delta
    double floored_mass_fraction = 0;  // mass of floored cells / total mass
};

LogDerivatives log_derivatives(const Density& f);

// ||f||_{L^p_m} = || <v>^m f ||_p with <v> = sqrt(1+|v|^2); p = inf gives
// sup_cell <v>^m |f|. Throws for p < 1.
double weighted_lp_norm(const Density& f, double p, double weight_exponent);

struct WeightedNorm {
    double p = 1.0;
    double weight_exponent = 0.0;
    double value = 0.0;
};

std::uint64_t hash_values(std::span<const double> values);

} // namespace landau
