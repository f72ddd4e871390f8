#include "landau/gamma2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <gsl/gsl_integration.h>

#include "landau/reduce.hpp"

namespace landau {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

Eigen::Vector3d SphereGrid::sigma(int it, int ip) const {
    const double th = theta[it];
    const double ph = ip * dphi;
    const double st = std::sin(th);
    return {st * std::cos(ph), st * std::sin(ph), std::cos(th)};
}

SphereGrid make_sphere_grid(int n_theta, int n_phi) {
    if (n_theta < 8)
        throw std::invalid_argument("make_sphere_grid: n_theta must be >= 8");
    if (n_phi < 8 || n_phi % 2 != 0)
        throw std::invalid_argument("make_sphere_grid: n_phi must be even and >= 8");
    SphereGrid g;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    g.dphi = 2.0 * kPi / n_phi;
    gsl_integration_glfixed_table* t =
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n_theta));
    std::vector<std::pair<double, double>> nodes(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        double xi = 0.0, wi = 0.0;
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &xi, &wi, t);
        nodes[i] = {xi, wi};
    }
    gsl_integration_glfixed_table_free(t);
    // theta ascending <=> cos(theta) descending
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    g.theta.resize(n_theta);
    g.wtheta.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        g.theta[i] = std::acos(std::clamp(nodes[i].first, -1.0, 1.0));
        g.wtheta[i] = nodes[i].second;
    }
    return g;
}

SphereField make_sphere_field(const SphereGrid& grid, std::vector<double> values,
                              bool symmetric) {
    if (values.size() != grid.nodes())
        throw std::invalid_argument("make_sphere_field: expected " +
                                    std::to_string(grid.nodes()) + " values, got " +
                                    std::to_string(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("make_sphere_field: non-finite value at node " +
                                        std::to_string(i));
        if (values[i] <= 0.0)
            throw std::invalid_argument("make_sphere_field: non-positive value at node " +
                                        std::to_string(i));
    }
    if (symmetric) {
        for (int it = 0; it < grid.n_theta; ++it)
            for (int ip = 0; ip < grid.n_phi; ++ip) {
                auto [jt, jp] = grid.antipode(it, ip);
                const double a = values[grid.idx(it, ip)];
                const double b = values[grid.idx(jt, jp)];
                if (std::abs(a - b) > 1e-14 * std::max(a, b))
                    throw std::invalid_argument(
                        "make_sphere_field: symmetric flag set but antipodal values differ "
                        "at node (" + std::to_string(it) + "," + std::to_string(ip) + ")");
            }
    }
    return SphereField{grid, std::move(values), symmetric};
}

SphereField sphere_field_from(const SphereGrid& grid,
                              const std::function<double(const Eigen::Vector3d&)>& fn,
                              bool symmetric) {
    std::vector<double> vals(grid.nodes());
    for (int it = 0; it < grid.n_theta; ++it)
        for (int ip = 0; ip < grid.n_phi; ++ip) vals[grid.idx(it, ip)] = fn(grid.sigma(it, ip));
    return make_sphere_field(grid, std::move(vals), symmetric);
}

double sphere_integral(const SphereField& f) {
    std::vector<double> terms(f.grid.nodes());
    for (int it = 0; it < f.grid.n_theta; ++it) {
        const double w = f.grid.weight(it);
        for (int ip = 0; ip < f.grid.n_phi; ++ip)
            terms[f.grid.idx(it, ip)] = w * f.values[f.grid.idx(it, ip)];
    }
    return pairwise_sum(terms);
}

SphereField symmetrize(const SphereField& f) {
    std::vector<double> vals(f.grid.nodes());
    for (int it = 0; it < f.grid.n_theta; ++it)
        for (int ip = 0; ip < f.grid.n_phi; ++ip) {
            auto [jt, jp] = f.grid.antipode(it, ip);
            vals[f.grid.idx(it, ip)] =
                0.5 * (f.values[f.grid.idx(it, ip)] + f.values[f.grid.idx(jt, jp)]);
        }
    SphereField out{f.grid, std::move(vals), true};
    return out;
}

double real_spherical_harmonic(int l, int m, double theta, double phi) {
    if (l < 0 || l > 12 || std::abs(m) > l)
        throw std::invalid_argument("real_spherical_harmonic: need 0 <= |m| <= l <= 12");
    const int am = std::abs(m);
    const double x = std::cos(theta);
    const double p = std::assoc_legendre(static_cast<unsigned>(l), static_cast<unsigned>(am), x);
    const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) *
                                  std::exp(std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0)));
    if (m == 0) return norm * p;
    if (m > 0) return std::sqrt(2.0) * norm * p * std::cos(m * phi);
    return std::sqrt(2.0) * norm * p * std::sin(am * phi);
}

namespace {

// 4-point Lagrange weights on abscissae a[] at x.
std::array<double, 4> lagrange4(const std::array<double, 4>& a, double x) {
    std::array<double, 4> w{};
    for (int i = 0; i < 4; ++i) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            num *= x - a[j];
            den *= a[i] - a[j];
        }
        w[i] = num / den;
    }
    return w;
}

} // namespace

Gamma2Evaluator::Gamma2Evaluator(SphereGrid grid, double shell_step)
    : grid_(std::move(grid)), h_s_(shell_step) {
    if (!(h_s_ > 0.0) || h_s_ > 0.1)
        throw std::invalid_argument("Gamma2Evaluator: shell_step must be in (0, 0.1]");

    const int nt = grid_.n_theta, np = grid_.n_phi;
    const double dphi = grid_.dphi;

    // Tensor Lagrange stencil for the zero-homogeneous extension evaluated at
    // ambient point x: interpolate node values of g at angles of x/|x|.
    // theta stencils crossing a pole pick up the mirrored ring shifted by pi.
    auto point_stencil = [&](const Eigen::Vector3d& x) {
        Stencil s{};
        const double rho = x.norm();
        const double th = std::acos(std::clamp(x.z() / rho, -1.0, 1.0));
        double ph = std::atan2(x.y(), x.x());
        if (ph < 0.0) ph += 2.0 * kPi;

        const auto& T = grid_.theta;
        const int jl = static_cast<int>(std::upper_bound(T.begin(), T.end(), th) - T.begin()) - 1;
        std::array<double, 4> ta{};
        int ring[4];
        int shift[4];
        for (int q = 0; q < 4; ++q) {
            const int jj = jl - 1 + q;
            if (jj < 0) {
                ring[q] = -1 - jj;
                ta[q] = -T[ring[q]];
                shift[q] = np / 2;
            } else if (jj >= nt) {
                ring[q] = 2 * nt - 1 - jj;
                ta[q] = 2.0 * kPi - T[ring[q]];
                shift[q] = np / 2;
            } else {
                ring[q] = jj;
                ta[q] = T[jj];
                shift[q] = 0;
            }
        }
        const auto wt = lagrange4(ta, th);

        const double u = ph / dphi;
        const int ip0 = static_cast<int>(std::floor(u));
        const double t = u - ip0;
        const auto wp = lagrange4({-1.0, 0.0, 1.0, 2.0}, t);

        for (int q = 0; q < 4; ++q)
            for (int r = 0; r < 4; ++r) {
                const int ip = ((ip0 - 1 + r + shift[q]) % np + np) % np;
                s.idx[q * 4 + r] = static_cast<std::int32_t>(grid_.idx(ring[q], ip));
                s.w[q * 4 + r] = wt[q] * wp[r];
            }
        return s;
    };

    const double h = h_s_;
    stencils_.reserve(grid_.nodes() * 54);
    for (int it = 0; it < nt; ++it)
        for (int ip = 0; ip < np; ++ip) {
            const Eigen::Vector3d sg = grid_.sigma(it, ip);
            // 0..5: sg +- h e_k
            for (int k = 0; k < 3; ++k) {
                stencils_.push_back(point_stencil(sg + h * Eigen::Vector3d::Unit(k)));
                stencils_.push_back(point_stencil(sg - h * Eigen::Vector3d::Unit(k)));
            }
            // 6..41: for each b_i direction, the two offset points' gradients
            for (int i = 0; i < 3; ++i) {
                const Eigen::Vector3d bi = Eigen::Vector3d::Unit(i).cross(sg);
                for (int sgn = 0; sgn < 2; ++sgn) {
                    const Eigen::Vector3d xc = sg + (sgn == 0 ? h : -h) * bi;
                    for (int k = 0; k < 3; ++k) {
                        stencils_.push_back(point_stencil(xc + h * Eigen::Vector3d::Unit(k)));
                        stencils_.push_back(point_stencil(xc - h * Eigen::Vector3d::Unit(k)));
                    }
                }
            }
            // 42..53: ambient Hessian cross terms, pairs (0,1),(0,2),(1,2)
            for (int k = 0; k < 3; ++k)
                for (int l = k + 1; l < 3; ++l) {
                    const Eigen::Vector3d ek = Eigen::Vector3d::Unit(k);
                    const Eigen::Vector3d el = Eigen::Vector3d::Unit(l);
                    stencils_.push_back(point_stencil(sg + h * ek + h * el));
                    stencils_.push_back(point_stencil(sg + h * ek - h * el));
                    stencils_.push_back(point_stencil(sg - h * ek + h * el));
                    stencils_.push_back(point_stencil(sg - h * ek - h * el));
                }
        }
}

Gamma2Report Gamma2Evaluator::evaluate_impl(const SphereField& f, bool with_intrinsic) const {
    if (f.grid.n_theta != grid_.n_theta || f.grid.n_phi != grid_.n_phi)
        throw std::invalid_argument("Gamma2Evaluator: field grid does not match evaluator grid");
    const std::size_t N = grid_.nodes();
    std::vector<double> g(N);
    for (std::size_t c = 0; c < N; ++c) g[c] = std::log(f.values[c]);

    auto gather = [&](const Stencil& s) {
        double v = 0.0;
        for (int q = 0; q < 16; ++q) v += s.w[q] * g[static_cast<std::size_t>(s.idx[q])];
        return v;
    };

    const double h = h_s_;
    std::vector<double> num_terms(N), den_terms(N), intr_terms(with_intrinsic ? N : 0);

    for (int it = 0; it < grid_.n_theta; ++it) {
        const double wq = grid_.weight(it);
        for (int ip = 0; ip < grid_.n_phi; ++ip) {
            const std::size_t c = grid_.idx(it, ip);
            const Stencil* st = &stencils_[c * 54];
            const Eigen::Vector3d sg = grid_.sigma(it, ip);
            const double fv = f.values[c];

            double pm[6];
            for (int q = 0; q < 6; ++q) pm[q] = gather(st[q]);
            const Eigen::Vector3d grad((pm[0] - pm[1]) / (2 * h), (pm[2] - pm[3]) / (2 * h),
                                       (pm[4] - pm[5]) / (2 * h));

            double den = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double lk = Eigen::Vector3d::Unit(k).cross(sg).dot(grad);
                den += lk * lk;
            }
            den_terms[c] = wq * fv * den;

            double num = 0.0;
            for (int i = 0; i < 3; ++i) {
                const Eigen::Vector3d bi = Eigen::Vector3d::Unit(i).cross(sg);
                const Stencil* sp = st + 6 + i * 12;
                double phi_p[3], phi_m[3];
                for (int sgn = 0; sgn < 2; ++sgn) {
                    const Eigen::Vector3d xc = sg + (sgn == 0 ? h : -h) * bi;
                    const Stencil* sq = sp + sgn * 6;
                    double q6[6];
                    for (int q = 0; q < 6; ++q) q6[q] = gather(sq[q]);
                    const Eigen::Vector3d gx((q6[0] - q6[1]) / (2 * h), (q6[2] - q6[3]) / (2 * h),
                                             (q6[4] - q6[5]) / (2 * h));
                    for (int j = 0; j < 3; ++j) {
                        const double pj = Eigen::Vector3d::Unit(j).cross(xc).dot(gx);
                        (sgn == 0 ? phi_p : phi_m)[j] = pj;
                    }
                }
                for (int j = 0; j < 3; ++j) {
                    const double lij = (phi_p[j] - phi_m[j]) / (2 * h);
                    num += lij * lij;
                }
            }
            num_terms[c] = wq * fv * num;

            if (with_intrinsic) {
                Eigen::Matrix3d H;
                const double g0 = g[c];
                H(0, 0) = (pm[0] - 2 * g0 + pm[1]) / (h * h);
                H(1, 1) = (pm[2] - 2 * g0 + pm[3]) / (h * h);
                H(2, 2) = (pm[4] - 2 * g0 + pm[5]) / (h * h);
                const Stencil* sx = st + 42;
                int off = 0;
                for (int k = 0; k < 3; ++k)
                    for (int l = k + 1; l < 3; ++l) {
                        const double pp = gather(sx[off + 0]);
                        const double pmv = gather(sx[off + 1]);
                        const double mp = gather(sx[off + 2]);
                        const double mm = gather(sx[off + 3]);
                        H(k, l) = H(l, k) = (pp - pmv - mp + mm) / (4 * h * h);
                        off += 4;
                    }
                const Eigen::Matrix3d P = Eigen::Matrix3d::Identity() - sg * sg.transpose();
                const Eigen::Matrix3d Hs = P * H * P;
                const Eigen::Vector3d gt = P * grad;
                intr_terms[c] = wq * fv * (Hs.squaredNorm() + gt.squaredNorm());
            }
        }
    }

    Gamma2Report rep;
    rep.numerator = pairwise_sum(num_terms);
    rep.denominator = pairwise_sum(den_terms);
    const double mass = sphere_integral(f);
    if (rep.denominator < 1e-12 * mass)
        throw std::domain_error("gamma2_ratio: degenerate field (log f is constant to within "
                                "the quadrature threshold)");
    rep.ratio = rep.numerator / rep.denominator;
    if (with_intrinsic) {
        rep.intrinsic_numerator = pairwise_sum(intr_terms);
        rep.cross_check_rel = std::abs(rep.numerator - rep.intrinsic_numerator) /
                              std::max(rep.numerator, 1e-300);
    }
    return rep;
}

Gamma2Report Gamma2Evaluator::evaluate(const SphereField& f) const {
    return evaluate_impl(f, true);
}

double Gamma2Evaluator::ratio(const SphereField& f) const {
    return evaluate_impl(f, false).ratio;
}

Gamma2Report gamma2_ratio(const SphereField& f) {
    Gamma2Evaluator eval(f.grid);
    return eval.evaluate(f);
}

ProbeResult probe_minimum(int seed_count, int max_harmonic_degree, int steps,
                          std::uint64_t seed, int n_theta, int n_phi) {
    if (max_harmonic_degree < 2)
        throw std::invalid_argument(
            "probe_minimum: max_harmonic_degree < 2 leaves only constants, which are "
            "degenerate for the ratio");
    if (max_harmonic_degree % 2 != 0)
        throw std::invalid_argument("probe_minimum: max_harmonic_degree must be even "
                                    "(antipodal symmetry)");
    if (seed_count < 1 || steps < 1)
        throw std::invalid_argument("probe_minimum: seed_count and steps must be positive");

    const SphereGrid grid = make_sphere_grid(n_theta, n_phi);
    const Gamma2Evaluator eval(grid);

    std::vector<std::pair<int, int>> modes;
    for (int l = 2; l <= max_harmonic_degree; l += 2)
        for (int m = -l; m <= l; ++m) modes.emplace_back(l, m);
    const int dim = static_cast<int>(modes.size());

    // basis values at nodes
    Eigen::MatrixXd B(grid.nodes(), dim);
    for (int it = 0; it < grid.n_theta; ++it)
        for (int ip = 0; ip < grid.n_phi; ++ip) {
            const std::size_t c = grid.idx(it, ip);
            for (int a = 0; a < dim; ++a)
                B(static_cast<Eigen::Index>(c), a) =
                    real_spherical_harmonic(modes[a].first, modes[a].second, grid.theta[it],
                                            ip * grid.dphi);
        }

    auto project = [&](Eigen::VectorXd c) {
        for (int a = 0; a < dim; ++a) c[a] = std::clamp(c[a], -0.9, 0.9);
        const double nrm = c.norm();
        if (nrm > 1.8) c *= 1.8 / nrm;
        return c;
    };

    auto ratio_of = [&](const Eigen::VectorXd& c) -> double {
        Eigen::VectorXd gv = B * c;
        std::vector<double> vals(grid.nodes());
        for (std::size_t i = 0; i < grid.nodes(); ++i)
            vals[i] = std::exp(gv[static_cast<Eigen::Index>(i)]);
        SphereField field = symmetrize(SphereField{grid, std::move(vals), false});
        try {
            return eval.ratio(field);
        } catch (const std::domain_error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    struct SeedOut {
        double ratio = std::numeric_limits<double>::infinity();
        Eigen::VectorXd coeffs;
    };
    std::vector<SeedOut> outs(static_cast<std::size_t>(seed_count));

    parallel_blocks(static_cast<std::size_t>(seed_count), [&](std::size_t s) {
        std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (s + 1)));
        std::uniform_real_distribution<double> uni(-0.3, 0.3);
        Eigen::VectorXd c(dim);
        for (int a = 0; a < dim; ++a) c[a] = uni(rng);
        c = project(c);
        double r = ratio_of(c);
        double t = 0.1;
        const double fd = 1e-4;
        for (int step = 0; step < steps; ++step) {
            Eigen::VectorXd gr(dim);
            for (int a = 0; a < dim; ++a) {
                Eigen::VectorXd cp = c, cm = c;
                cp[a] += fd;
                cm[a] -= fd;
                gr[a] = (ratio_of(cp) - ratio_of(cm)) / (2 * fd);
            }
            const double gn = gr.norm();
            if (!(gn > 1e-10) || !std::isfinite(gn)) break;
            const Eigen::VectorXd d = -gr / gn;
            t = std::min(4.0 * t, 0.5);
            bool accepted = false;
            for (int trial = 0; trial < 30; ++trial) {
                const Eigen::VectorXd cn = project(c + t * d);
                const double rn = ratio_of(cn);
                if (std::isfinite(rn) && rn < r - 1e-13) {
                    c = cn;
                    r = rn;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) break;
        }
        outs[s].ratio = r;
        outs[s].coeffs = c;
    });

    ProbeResult res;
    res.min_ratio = std::numeric_limits<double>::infinity();
    res.seed_ratios.resize(static_cast<std::size_t>(seed_count));
    for (int s = 0; s < seed_count; ++s) {
        res.seed_ratios[static_cast<std::size_t>(s)] = outs[static_cast<std::size_t>(s)].ratio;
        if (outs[static_cast<std::size_t>(s)].ratio < res.min_ratio) {
            res.min_ratio = outs[static_cast<std::size_t>(s)].ratio;
            res.argmin_seed = s;
        }
    }
    const auto& best = outs[static_cast<std::size_t>(res.argmin_seed)].coeffs;
    res.coeffs.assign(best.data(), best.data() + best.size());
    return res;
}

} // namespace landau
