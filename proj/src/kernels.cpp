#include "landau/kernels.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <gsl/gsl_integration.h>

namespace landau {

namespace {

constexpr double kBlendLo = 0.5;
constexpr double kBlendHi = 1.0;
constexpr double kBlendW = kBlendHi - kBlendLo;

// Quintic Hermite coefficients against the basis {H0..H5} in s = (r-1/2)/(1/2):
// endpoint data from r^5 at 1/2 and the constant 1 at 1.
struct BlendData {
    double f0 = std::pow(kBlendLo, 5);
    double d0 = 5.0 * std::pow(kBlendLo, 4) * kBlendW;
    double s0 = 20.0 * std::pow(kBlendLo, 3) * kBlendW * kBlendW;
    double f1 = 1.0;
    double d1 = 0.0;
    double s1 = 0.0;
};

double blend_value(double s) {
    const BlendData b;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double h5 = 0.5 * s3 - s4 + 0.5 * s5;
    return h0 * b.f0 + h1 * b.d0 + h2 * b.s0 + h3 * b.f1 + h4 * b.d1 + h5 * b.s1;
}

double blend_d(double s) {
    const BlendData b;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const double h0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double h1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double h2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
    const double h3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    const double h4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    const double h5 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;
    return h0 * b.f0 + h1 * b.d0 + h2 * b.s0 + h3 * b.f1 + h4 * b.d1 + h5 * b.s1;
}

double blend_dd(double s) {
    const BlendData b;
    const double s2 = s * s, s3 = s2 * s;
    const double h0 = -60.0 * s + 180.0 * s2 - 120.0 * s3;
    const double h1 = -36.0 * s + 96.0 * s2 - 60.0 * s3;
    const double h2 = 1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3;
    const double h3 = 60.0 * s - 180.0 * s2 + 120.0 * s3;
    const double h4 = -24.0 * s + 84.0 * s2 - 60.0 * s3;
    const double h5 = 3.0 * s - 12.0 * s2 + 10.0 * s3;
    return h0 * b.f0 + h1 * b.d0 + h2 * b.s0 + h3 * b.f1 + h4 * b.d1 + h5 * b.s1;
}

} // namespace

double eta(double r) {
    if (r <= 0.0) return 0.0;
    if (r <= kBlendLo) return std::pow(r, 5);
    if (r >= kBlendHi) return 1.0;
    return blend_value((r - kBlendLo) / kBlendW);
}

double eta_d(double r) {
    if (r <= 0.0) return 0.0;
    if (r <= kBlendLo) return 5.0 * std::pow(r, 4);
    if (r >= kBlendHi) return 0.0;
    return blend_d((r - kBlendLo) / kBlendW) / kBlendW;
}

double eta_dd(double r) {
    if (r <= 0.0) return 0.0;
    if (r <= kBlendLo) return 20.0 * r * r * r;
    if (r >= kBlendHi) return 0.0;
    return blend_dd((r - kBlendLo) / kBlendW) / (kBlendW * kBlendW);
}

KernelSpec make_kernel(double gamma, double epsilon) {
    if (!(gamma >= -3.0) || !(gamma < -2.0)) {
        std::ostringstream os;
        os << "make_kernel: gamma must lie in [-3,-2), got " << gamma;
        throw std::invalid_argument(os.str());
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        std::ostringstream os;
        os << "make_kernel: epsilon must be finite and nonnegative, got " << epsilon;
        throw std::invalid_argument(os.str());
    }
    KernelSpec spec;
    spec.gamma = gamma;
    spec.epsilon = epsilon;

    // Measured constants by dense deterministic sampling, cached per gamma.
    // eta'' vanishes outside (0,1); the Laplacian bound term decays like
    // r^(gamma-2) past 1.
    static std::mutex mu;
    static std::map<double, std::pair<double, double>> cache;
    {
        std::scoped_lock lock(mu);
        auto it = cache.find(gamma);
        if (it != cache.end()) {
            spec.eta_sup_dd = it->second.first;
            spec.c_delta = it->second.second;
            return spec;
        }
    }
    const int m = 2'000'000;
    double sup_dd = 0.0;
    double sup_cd = 0.0;
    const double two_g = std::pow(2.0, gamma);
    for (int i = 1; i <= m; ++i) {
        const double r = 1.25 * static_cast<double>(i) / m;
        const double dd = eta_dd(r);
        sup_dd = std::max(sup_dd, std::abs(dd));
        const double term =
            two_g * (6.0 * eta(r) * std::pow(r, gamma - 2.0) +
                     std::max(dd, 0.0) * std::pow(r, gamma));
        sup_cd = std::max(sup_cd, term);
    }
    spec.eta_sup_dd = sup_dd;
    spec.c_delta = sup_cd;
    std::scoped_lock lock(mu);
    cache[gamma] = {sup_dd, sup_cd};
    return spec;
}

Eigen::Matrix3d a_matrix(const Eigen::Vector3d& z) {
    return z.squaredNorm() * Eigen::Matrix3d::Identity() - z * z.transpose();
}

Eigen::Vector3d b_field(int k, const Eigen::Vector3d& z) {
    if (k < 0 || k > 2) throw std::invalid_argument("b_field: k must be 0, 1 or 2");
    return Eigen::Vector3d::Unit(k).cross(z);
}

double alpha(const KernelSpec& spec, double r) {
    return std::pow(r * r + spec.epsilon * spec.epsilon, 0.5 * spec.gamma);
}

double alpha_d(const KernelSpec& spec, double r) {
    const double q = r * r + spec.epsilon * spec.epsilon;
    return spec.gamma * r * std::pow(q, 0.5 * spec.gamma - 1.0);
}

double alpha_tilde(const KernelSpec& spec, double r) {
    if (r <= 0.0) throw std::domain_error("alpha_tilde: r must be positive");
    return eta(r) * std::pow(r, spec.gamma);
}

double alpha_tilde_d(const KernelSpec& spec, double r) {
    if (r <= 0.0) throw std::domain_error("alpha_tilde_d: r must be positive");
    return eta_d(r) * std::pow(r, spec.gamma) +
           spec.gamma * eta(r) * std::pow(r, spec.gamma - 1.0);
}

double cube_kernel_average(double p) {
    if (!(p > -3.0) || !(p <= 1.0)) {
        throw std::invalid_argument("cube_kernel_average: p must lie in (-3, 1]");
    }
    static std::mutex mu;
    static std::map<double, double> cache;
    {
        std::scoped_lock lock(mu);
        auto it = cache.find(p);
        if (it != cache.end()) return it->second;
    }

    constexpr int nq = 48;
    gsl_integration_glfixed_table* tab = gsl_integration_glfixed_table_alloc(nq);
    auto fill = [&](double a, double b, std::array<double, nq>& x, std::array<double, nq>& w) {
        for (int i = 0; i < nq; ++i) gsl_integration_glfixed_point(a, b, i, &x[i], &w[i], tab);
    };
    auto box = [&](double ax, double bx, double ay, double by, double az, double bz) {
        std::array<double, nq> x{}, wx{}, y{}, wy{}, z{}, wz{};
        fill(ax, bx, x, wx);
        fill(ay, by, y, wy);
        fill(az, bz, z, wz);
        double s = 0.0;
        for (int i = 0; i < nq; ++i)
            for (int j = 0; j < nq; ++j)
                for (int k = 0; k < nq; ++k) {
                    const double r2 = x[i] * x[i] + y[j] * y[j] + z[k] * z[k];
                    s += wx[i] * wy[j] * wz[k] * std::pow(r2, 0.5 * p);
                }
        return s;
    };
    // Octant of cube(1) minus cube(1/2): three disjoint boxes keeping the
    // integrand smooth (some coordinate is at least 1/4 in each).
    const double S = 8.0 * (box(0.25, 0.5, 0.0, 0.5, 0.0, 0.5) +
                            box(0.0, 0.25, 0.25, 0.5, 0.0, 0.5) +
                            box(0.0, 0.25, 0.0, 0.25, 0.25, 0.5));
    gsl_integration_glfixed_table_free(tab);
    const double value = S / (1.0 - std::pow(2.0, -(p + 3.0)));

    std::scoped_lock lock(mu);
    cache[p] = value;
    return value;
}

} // namespace landau
