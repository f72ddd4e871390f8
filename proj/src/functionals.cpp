#include "landau/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace landau {

namespace {

bool interior(const VelocityGrid& g, std::size_t c, int margin) {
    if (margin <= 0) return true;
    auto [i, j, k] = g.unflat(c);
    return i >= margin && i < g.n - margin && j >= margin && j < g.n - margin &&
           k >= margin && k < g.n - margin;
}

double weight_pow(const Eigen::Vector3d& v, double expo) {
    return std::pow(1.0 + v.squaredNorm(), 0.5 * expo);
}

} // namespace

HydrodynamicState hydrodynamics(const Density& f) {
    const VelocityGrid& g = f.grid;
    const std::size_t N = g.cells();
    std::vector<double> m(N), px(N), py(N), pz(N), e(N), s(N), l(N);
    const double logfloor = std::log(f.floor_delta);
    for (std::size_t c = 0; c < N; ++c) {
        const double fv = f.values[c];
        const Eigen::Vector3d v = g.point(c);
        m[c] = fv;
        px[c] = fv * v.x();
        py[c] = fv * v.y();
        pz[c] = fv * v.z();
        e[c] = fv * v.squaredNorm();
        const double lg = fv >= f.floor_delta ? std::log(fv) : logfloor;
        s[c] = fv > 0.0 ? fv * lg : 0.0;
        l[c] = fv > 0.0 ? fv * std::abs(lg) : 0.0;
    }
    HydrodynamicState out;
    out.mass = integrate(g, m);
    out.momentum = {integrate(g, px), integrate(g, py), integrate(g, pz)};
    out.energy = integrate(g, e);
    out.entropy = integrate(g, s);
    out.l_log_l = integrate(g, l);
    out.temperature = out.mass > 0.0
        ? (out.energy - out.momentum.squaredNorm() / out.mass) / (3.0 * out.mass)
        : 0.0;
    return out;
}

double l_log_l_gaussian_constant() {
    // 2 int_{R^3} exp(-1-|v|^2)(1+|v|^2) dv = 8 pi e^-1 int_0^inf e^{-r^2}(1+r^2) r^2 dr.
    // Adaptive Simpson on [0, 12]; the integrand is below 1e-60 past r = 12.
    struct Simpson {
        static double integrand(double r) {
            return std::exp(-r * r) * (1.0 + r * r) * r * r;
        }
        static double recurse(double a, double b, double fa, double fm, double fb,
                              double whole, double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = integrand(lm), frm = integrand(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol) {
                return left + right + (left + right - whole) / 15.0;
            }
            return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
                   recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
        }
        static double run(double a, double b, double tol) {
            const double m = 0.5 * (a + b);
            const double fa = integrand(a), fm = integrand(m), fb = integrand(b);
            const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            return recurse(a, b, fa, fm, fb, whole, tol, 0);
        }
    };
    static const double value =
        8.0 * M_PI * std::exp(-1.0) * Simpson::run(0.0, 12.0, 1e-14);
    return value;
}

LlogLBound l_log_l_bound_check(const Density& f) {
    const HydrodynamicState hs = hydrodynamics(f);
    LlogLBound out;
    out.gaussian_constant = l_log_l_gaussian_constant();
    out.l_log_l = hs.l_log_l;
    out.bound = out.gaussian_constant + 2.0 * hs.mass + 2.0 * hs.energy + hs.entropy;
    out.margin = out.bound - out.l_log_l;
    return out;
}

FisherReport fisher(const Density& f, int interior_margin) {
    const VelocityGrid& g = f.grid;
    const std::size_t N = g.cells();
    if (interior_margin < 0 || 2 * interior_margin >= g.n - 3) {
        throw std::invalid_argument("fisher: interior margin leaves too few cells");
    }

    LogDerivatives ld;
    ld.log_f.resize(N);
    std::vector<double> sqrtf(N);
    const double logfloor = std::log(f.floor_delta);
    for (std::size_t c = 0; c < N; ++c) {
        const double fv = f.values[c];
        ld.log_f[c] = fv >= f.floor_delta ? std::log(fv) : logfloor;
        sqrtf[c] = std::sqrt(fv);
    }
    const Vec3Field glog = gradient6(g, ld.log_f);
    const Vec3Field gf = gradient6(g, f.values);
    const Vec3Field gs = gradient6(g, sqrtf);

    // Cells below the analysis floor are excluded from all three quadratures:
    // their log is clamped and the ratio form would divide by the floor.
    std::vector<double> a(N), b(N), c3(N);
    for (std::size_t c = 0; c < N; ++c) {
        const double fv = f.values[c];
        if (!interior(g, c, interior_margin) || fv < f.floor_delta) {
            a[c] = b[c] = c3[c] = 0.0;
            continue;
        }
        const double gl2 = glog.comp[0][c] * glog.comp[0][c] +
                           glog.comp[1][c] * glog.comp[1][c] +
                           glog.comp[2][c] * glog.comp[2][c];
        const double gf2 = gf.comp[0][c] * gf.comp[0][c] + gf.comp[1][c] * gf.comp[1][c] +
                           gf.comp[2][c] * gf.comp[2][c];
        const double gs2 = gs.comp[0][c] * gs.comp[0][c] + gs.comp[1][c] * gs.comp[1][c] +
                           gs.comp[2][c] * gs.comp[2][c];
        a[c] = fv * gl2;
        b[c] = gf2 / std::max(fv, f.floor_delta);
        c3[c] = 4.0 * gs2;
    }
    FisherReport out;
    out.grad_form = integrate(g, a);
    out.ratio_form = integrate(g, b);
    out.sqrt_form = integrate(g, c3);
    out.value = out.sqrt_form;
    out.interior_margin = interior_margin;
    const double lo = std::min({out.grad_form, out.ratio_form, out.sqrt_form});
    const double hi = std::max({out.grad_form, out.ratio_form, out.sqrt_form});
    out.spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
    return out;
}

HessianTraceChain hessian_trace_chain(const Density& f, double gamma, int interior_margin) {
    const VelocityGrid& g = f.grid;
    const std::size_t N = g.cells();
    const LogDerivatives ld = log_derivatives(f);
    std::vector<double> wh(N), wt(N), ti(N), wm(N);
    for (std::size_t c = 0; c < N; ++c) {
        const Eigen::Vector3d v = g.point(c);
        const double wdown = weight_pow(v, gamma - 2.0);
        const double wup = weight_pow(v, 2.0 - gamma);
        const double fv = f.values[c];
        wm[c] = wup * fv;
        if (!interior(g, c, interior_margin)) {
            wh[c] = wt[c] = ti[c] = 0.0;
            continue;
        }
        double frob = 0.0;
        const double hxx = ld.hess.comp[0][c], hyy = ld.hess.comp[1][c],
                     hzz = ld.hess.comp[2][c], hxy = ld.hess.comp[3][c],
                     hxz = ld.hess.comp[4][c], hyz = ld.hess.comp[5][c];
        frob = hxx * hxx + hyy * hyy + hzz * hzz +
               2.0 * (hxy * hxy + hxz * hxz + hyz * hyz);
        const double tr = hxx + hyy + hzz;
        wh[c] = wdown * fv * frob;
        wt[c] = wdown * fv * tr * tr;
        ti[c] = fv * tr;
    }
    HessianTraceChain out;
    out.weighted_hessian = integrate(g, wh);
    out.weighted_trace_sq = integrate(g, wt);
    out.trace_integral = integrate(g, ti);
    out.weight_moment = integrate(g, wm);
    return out;
}

double weighted_hessian_functional(const Density& f, double gamma, int interior_margin) {
    return hessian_trace_chain(f, gamma, interior_margin).weighted_hessian;
}

} // namespace landau
