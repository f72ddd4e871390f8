#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "landau/pair.hpp"

namespace landau {

// Everything here follows the integrand definitions term by term: explicit
// b-frame double loops, 6-vector directional derivatives, one ordered pair at
// a time. No shared state with the fast path beyond the scalar kernel
// functions and the log-derivative fields, which are the objects under test.
DissipationReport fisher_dissipation_terms_bruteforce(const Density& f,
                                                      const KernelSpec& spec) {
    const auto& g = f.grid;
    if (g.n > 16)
        throw std::invalid_argument("fisher_dissipation_terms_bruteforce: n > 16");
    const LogDerivatives logd = log_derivatives(f);
    const std::size_t N = g.cells();
    const double h3 = g.h * g.h * g.h;

    double ed = 0.0;
    double dpar = 0.0, drad = 0.0, dsph = 0.0, rsph = 0.0;
    double dparc = 0.0, dradc = 0.0, dsphc = 0.0, rsphc = 0.0;
    double j1 = 0.0, j2 = 0.0;

    using Vec6 = Eigen::Matrix<double, 6, 1>;

    for (std::size_t cv = 0; cv < N; ++cv) {
        const double fv = f.values[cv];
        if (fv == 0.0) continue;
        const Eigen::Vector3d v = g.point(cv);
        const Eigen::Vector3d gv(logd.grad.comp[0][cv], logd.grad.comp[1][cv],
                                 logd.grad.comp[2][cv]);
        const Eigen::Matrix3d Hv = logd.hess.at(cv);
        for (std::size_t cw = 0; cw < N; ++cw) {
            if (cw == cv) continue;
            const double fw = f.values[cw];
            if (fw == 0.0) continue;
            const Eigen::Vector3d w = g.point(cw);
            const Eigen::Vector3d gw(logd.grad.comp[0][cw], logd.grad.comp[1][cw],
                                     logd.grad.comp[2][cw]);
            const Eigen::Matrix3d Hw = logd.hess.at(cw);

            const Eigen::Vector3d z = v - w;
            const double r = z.norm();
            const double F = fv * fw;

            const double al = alpha(spec, r);
            const double alc = alpha_tilde(spec, r);
            const double dsa = alpha_d(spec, r) / (2.0 * std::sqrt(al));
            const double dsac = alpha_tilde_d(spec, r) / (2.0 * std::sqrt(alc));

            const Eigen::Matrix3d a = r * r * Eigen::Matrix3d::Identity() - z * z.transpose();
            Eigen::Vector3d b[3];
            for (int k = 0; k < 3; ++k) b[k] = Eigen::Vector3d::Unit(k).cross(z);
            const Eigen::Vector3d xi = gv - gw;

            ed += 0.5 * al * F * xi.dot(a * xi);

            const Eigen::Matrix3d D = Hv - Hw;
            double mpar = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double t = b[j].dot(D * Eigen::Vector3d::Unit(i));
                    mpar += t * t;
                }
            dpar += 0.5 * al * F * mpar;
            dparc += 0.5 * alc * F * mpar;

            // unit 6-direction along the pair separation
            Vec6 n6;
            n6 << z / (std::sqrt(2.0) * r), -z / (std::sqrt(2.0) * r);

            // s_i = b~_i . grad log F and its 6-gradient
            double s[3];
            Vec6 grad_s[3];
            for (int i = 0; i < 3; ++i) {
                s[i] = b[i].dot(xi);
                const Eigen::Vector3d xe = xi.cross(Eigen::Vector3d::Unit(i));
                grad_s[i] << xe + Hv * b[i], -xe - Hw * b[i];
            }

            double rad = 0.0, radc = 0.0;
            for (int i = 0; i < 3; ++i) {
                // n . grad sqrt(alpha): grad_v sqrt(alpha) = (d sqrt/dr) z/r
                const Eigen::Vector3d gsa_v = dsa * z / r;
                Vec6 gsa6;
                gsa6 << gsa_v, -gsa_v;
                const double term = n6.dot(gsa6) * s[i] + std::sqrt(al) * n6.dot(grad_s[i]);
                rad += term * term;
                const Eigen::Vector3d gsac_v = dsac * z / r;
                Vec6 gsac6;
                gsac6 << gsac_v, -gsac_v;
                const double termc = n6.dot(gsac6) * s[i] + std::sqrt(alc) * n6.dot(grad_s[i]);
                radc += termc * termc;
            }
            drad += F * rad;
            dradc += F * radc;

            double sph = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    Vec6 bt;
                    bt << b[i], -b[i];
                    const double t = bt.dot(grad_s[j]);
                    sph += t * t;
                }
            dsph += al / (2.0 * r * r) * F * sph;
            dsphc += alc / (2.0 * r * r) * F * sph;

            double ss = 0.0;
            for (int k = 0; k < 3; ++k) ss += s[k] * s[k];
            rsph += al / (r * r) * F * ss;
            rsphc += alc / (r * r) * F * ss;

            double tr_frame = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double t = b[i].dot(Hv * b[j]);
                    tr_frame += t * t;
                }
            j1 += alc / (r * r) * F * tr_frame;

            double cross = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double t = Eigen::Vector3d::Unit(j).cross(b[i]).dot(xi);
                    cross += t * t;
                }
            j2 += 2.0 * alc / (r * r) * F * cross;
        }
    }

    const double scale = h3 * h3;
    DissipationReport rep;
    rep.entropy_dissipation = scale * ed;
    rep.d_par = scale * dpar;
    rep.d_rad = scale * drad;
    rep.d_sph = scale * dsph;
    rep.r_sph = scale * rsph;
    rep.d_par_cut = scale * dparc;
    rep.d_rad_cut = scale * dradc;
    rep.d_sph_cut = scale * dsphc;
    rep.r_sph_cut = scale * rsphc;
    rep.j1 = scale * j1;
    rep.j2 = scale * j2;
    rep.fisher_dissipation_total =
        rep.d_par + rep.d_rad + rep.d_sph - 0.5 * spec.gamma * spec.gamma * rep.r_sph;
    rep.margins["dsph_vs_rsph_raw"] = rep.d_sph - 11.0 * rep.r_sph;
    rep.margins["dsph_vs_rsph_cut"] = rep.d_sph_cut - 11.0 * rep.r_sph_cut;
    rep.margins["jchain"] = rep.d_par_cut + rep.d_sph_cut - (rep.j1 - rep.j2);
    return rep;
}

} // namespace landau
