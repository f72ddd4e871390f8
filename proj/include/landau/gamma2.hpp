#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace landau {

// Latitude-longitude sphere grid: Gauss-Legendre colatitude nodes (no points
// at the poles), uniform longitudes. n_phi is even so the grid is closed
// under the antipodal map (it,ip) -> (n_theta-1-it, ip+n_phi/2).
struct SphereGrid {
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> theta;   // ascending in (0, pi)
    std::vector<double> wtheta;  // GL weights in cos(theta); sum 2
    double dphi = 0.0;

    std::size_t nodes() const { return static_cast<std::size_t>(n_theta) * n_phi; }
    std::size_t idx(int it, int ip) const {
        return static_cast<std::size_t>(it) * n_phi + ip;
    }
    std::array<int, 2> antipode(int it, int ip) const {
        return {n_theta - 1 - it, (ip + n_phi / 2) % n_phi};
    }
    Eigen::Vector3d sigma(int it, int ip) const;
    double weight(int it) const { return wtheta[it] * dphi; }  // area weight
};

// Throws for n_theta < 8 or n_phi < 8 or odd n_phi.
SphereGrid make_sphere_grid(int n_theta, int n_phi);

// Positive field on the sphere grid. If symmetric is set, construction
// checks antipodal pairs agree to 1e-14 relative.
struct SphereField {
    SphereGrid grid;
    std::vector<double> values;
    bool symmetric = false;
};

SphereField make_sphere_field(const SphereGrid& grid, std::vector<double> values,
                              bool symmetric = false);
SphereField sphere_field_from(const SphereGrid& grid,
                              const std::function<double(const Eigen::Vector3d&)>& fn,
                              bool symmetric = false);

double sphere_integral(const SphereField& f);

// Antipodal average (f(s)+f(-s))/2; idempotent, mass preserving.
SphereField symmetrize(const SphereField& f);

// Orthonormal real spherical harmonics, l <= 12.
double real_spherical_harmonic(int l, int m, double theta, double phi);

struct Gamma2Report {
    double numerator = 0.0;    // sum_ij int f (b_i . grad(b_j . grad log f))^2
    double denominator = 0.0;  // sum_k  int f (b_k . grad log f)^2
    double ratio = 0.0;
    double intrinsic_numerator = 0.0;  // int f (||P Hamb P||^2 + |grad_s log f|^2)
    double cross_check_rel = 0.0;      // |numerator - intrinsic| / numerator
};

// Evaluates the ratio by extending log f zero-homogeneously off the sphere
// (value at x is the interpolant at x/|x|) and applying nested central
// differences with ambient step shell_step along the b-fields b_k = e_k x s.
// Interpolation stencils are precomputed per grid, so repeated evaluation on
// the same grid is a gather.
class Gamma2Evaluator {
public:
    explicit Gamma2Evaluator(SphereGrid grid, double shell_step = 0.01);

    // Full report including the intrinsic-form cross-check.
    Gamma2Report evaluate(const SphereField& f) const;
    // b-field forms only; throws std::domain_error on a degenerate
    // (constant-log) field with denominator < 1e-12 * integral of f.
    double ratio(const SphereField& f) const;

    const SphereGrid& grid() const { return grid_; }
    double shell_step() const { return h_s_; }

private:
    struct Stencil {
        std::array<std::int32_t, 16> idx;
        std::array<double, 16> w;
    };
    SphereGrid grid_;
    double h_s_ = 0.0;
    // Per node: 6 gradient points, then for each of 3 b-directions 2 offset
    // points each carrying 6 gradient points (36), then 12 for the ambient
    // Hessian off-diagonals: layout documented in the implementation.
    std::vector<Stencil> stencils_;

    Gamma2Report evaluate_impl(const SphereField& f, bool with_intrinsic) const;
};

// One-shot convenience wrapper.
Gamma2Report gamma2_ratio(const SphereField& f);

struct ProbeResult {
    double min_ratio = 0.0;
    std::vector<double> coeffs;  // packed (l,m), l even ascending, m = -l..l
    int argmin_seed = 0;
    std::vector<double> seed_ratios;  // best ratio per seed, index = seed slot
};

// Projected gradient descent on gamma2 ratios of log-linear fields
// log f = sum c_a Y_a over even harmonic degrees 2..max_harmonic_degree.
// Deterministic for a fixed seed. Throws for max_harmonic_degree < 2.
ProbeResult probe_minimum(int seed_count, int max_harmonic_degree, int steps,
                          std::uint64_t seed = 12345, int n_theta = 24, int n_phi = 48);

} // namespace landau
