#include "landau/coefficients.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <fftw3.h>

#include "landau/reduce.hpp"

namespace landau {

namespace {

// Kernel ids: 0..5 the components of |w|^gamma a(w) in (xx,yy,zz,xy,xz,yz)
// order, 6..8 the components of -2 |w|^gamma w, 9 the scalar |w|^(gamma+2).
constexpr int kNumKernels = 10;

double kernel_value(int id, double gamma, double h, int di, int dj, int dk) {
    const double wx = di * h, wy = dj * h, wz = dk * h;
    const double r2 = wx * wx + wy * wy + wz * wz;
    if (di == 0 && dj == 0 && dk == 0) {
        // Cell average over the singular cell. Off-diagonal A entries and the
        // b kernel average to zero by parity; diagonals share the scalar value.
        const double avg = std::pow(h, gamma + 2.0) * cube_kernel_average(gamma + 2.0);
        if (id <= 2) return (2.0 / 3.0) * avg;
        if (id == 9) return avg;
        return 0.0;
    }
    const double rg = std::pow(r2, 0.5 * gamma);
    switch (id) {
        case 0: return rg * (r2 - wx * wx);
        case 1: return rg * (r2 - wy * wy);
        case 2: return rg * (r2 - wz * wz);
        case 3: return rg * (-wx * wy);
        case 4: return rg * (-wx * wz);
        case 5: return rg * (-wy * wz);
        case 6: return -2.0 * rg * wx;
        case 7: return -2.0 * rg * wy;
        case 8: return -2.0 * rg * wz;
        case 9: return rg * r2;
        default: throw std::logic_error("kernel_value: bad id");
    }
}

double scalar_kernel_value(double mu, double h, int di, int dj, int dk) {
    if (di == 0 && dj == 0 && dk == 0) {
        return std::pow(h, mu) * cube_kernel_average(mu);
    }
    const double wx = di * h, wy = dj * h, wz = dk * h;
    return std::pow(wx * wx + wy * wy + wz * wz, 0.5 * mu);
}

// ---- direct path ----

void direct_convolution(const VelocityGrid& g, std::span<const double> f,
                        const std::vector<double>& kernel_table, std::vector<double>& out) {
    const int n = g.n;
    const int kedge = 2 * n - 1;
    out.assign(g.cells(), 0.0);
    parallel_blocks(static_cast<std::size_t>(n), [&](std::size_t bi) {
        const int i = static_cast<int>(bi);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int ii = 0; ii < n; ++ii) {
                    const int di = i - ii + n - 1;
                    for (int jj = 0; jj < n; ++jj) {
                        const int dj = j - jj + n - 1;
                        const double* krow =
                            kernel_table.data() +
                            (static_cast<std::size_t>(di) * kedge + dj) * kedge + (k + n - 1);
                        const double* frow = f.data() + g.flat(ii, jj, 0);
                        for (int kk = 0; kk < n; ++kk) s += frow[kk] * krow[-kk];
                    }
                }
                out[g.flat(i, j, k)] = s * g.h * g.h * g.h;
            }
    });
}

std::vector<double> build_kernel_table(const VelocityGrid& g, int id, double gamma) {
    const int n = g.n;
    const int kedge = 2 * n - 1;
    std::vector<double> table(static_cast<std::size_t>(kedge) * kedge * kedge);
    for (int di = -(n - 1); di <= n - 1; ++di)
        for (int dj = -(n - 1); dj <= n - 1; ++dj)
            for (int dk = -(n - 1); dk <= n - 1; ++dk) {
                table[(static_cast<std::size_t>(di + n - 1) * kedge + (dj + n - 1)) * kedge +
                      (dk + n - 1)] = kernel_value(id, gamma, g.h, di, dj, dk);
            }
    return table;
}

std::vector<double> build_scalar_table(const VelocityGrid& g, double mu) {
    const int n = g.n;
    const int kedge = 2 * n - 1;
    std::vector<double> table(static_cast<std::size_t>(kedge) * kedge * kedge);
    for (int di = -(n - 1); di <= n - 1; ++di)
        for (int dj = -(n - 1); dj <= n - 1; ++dj)
            for (int dk = -(n - 1); dk <= n - 1; ++dk) {
                table[(static_cast<std::size_t>(di + n - 1) * kedge + (dj + n - 1)) * kedge +
                      (dk + n - 1)] = scalar_kernel_value(mu, g.h, di, dj, dk);
            }
    return table;
}

// ---- fft path ----

// Workspace with plans for one padded edge length m. Plans are created once
// with FFTW_ESTIMATE (deterministic planning) and reused via new-array execute
// on buffers allocated here.
struct FftWorkspace {
    int m = 0;
    std::size_t nreal = 0, ncplx = 0;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    explicit FftWorkspace(int edge) : m(edge) {
        nreal = static_cast<std::size_t>(m) * m * m;
        ncplx = static_cast<std::size_t>(m) * m * (m / 2 + 1);
        real = fftw_alloc_real(nreal);
        cplx = fftw_alloc_complex(ncplx);
        fwd = fftw_plan_dft_r2c_3d(m, m, m, real, cplx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_3d(m, m, m, cplx, real, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("fft workspace: plan creation failed");
    }
    ~FftWorkspace() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (real) fftw_free(real);
        if (cplx) fftw_free(cplx);
    }
    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;
};

std::mutex g_fft_mutex;

FftWorkspace& fft_workspace(int m) {
    static std::map<int, std::unique_ptr<FftWorkspace>> cache;
    auto it = cache.find(m);
    if (it == cache.end()) {
        it = cache.emplace(m, std::make_unique<FftWorkspace>(m)).first;
    }
    return *it->second;
}

using KernelFft = std::vector<std::complex<double>>;

// Pads kernel offsets cyclically ((off + m) % m per axis) and transforms.
KernelFft kernel_fft(FftWorkspace& ws, const VelocityGrid& g,
                     const std::function<double(int, int, int)>& kval) {
    const int n = g.n, m = ws.m;
    std::memset(ws.real, 0, ws.nreal * sizeof(double));
    for (int di = -(n - 1); di <= n - 1; ++di) {
        const int pi = (di + m) % m;
        for (int dj = -(n - 1); dj <= n - 1; ++dj) {
            const int pj = (dj + m) % m;
            for (int dk = -(n - 1); dk <= n - 1; ++dk) {
                const int pk = (dk + m) % m;
                ws.real[(static_cast<std::size_t>(pi) * m + pj) * (m) + pk] = kval(di, dj, dk);
            }
        }
    }
    fftw_execute_dft_r2c(ws.fwd, ws.real, ws.cplx);
    KernelFft out(ws.ncplx);
    std::memcpy(out.data(), ws.cplx, ws.ncplx * sizeof(fftw_complex));
    return out;
}

// Cache of kernel transforms keyed by (n, h, gamma-or-mu, kernel id).
using KernelKey = std::tuple<int, double, double, int>;
std::map<KernelKey, KernelFft> g_kernel_cache;

const KernelFft& cached_kernel_fft(const VelocityGrid& g, double param, int id) {
    const int m = 2 * g.n;
    KernelKey key{g.n, g.h, param, id};
    auto it = g_kernel_cache.find(key);
    if (it != g_kernel_cache.end()) return it->second;
    FftWorkspace& ws = fft_workspace(m);
    KernelFft kf;
    if (id < kNumKernels) {
        kf = kernel_fft(ws, g, [&](int di, int dj, int dk) {
            return kernel_value(id, param, g.h, di, dj, dk);
        });
    } else {
        // id == kNumKernels marks the scalar |.|^mu kernel, param = mu.
        kf = kernel_fft(ws, g, [&](int di, int dj, int dk) {
            return scalar_kernel_value(param, g.h, di, dj, dk);
        });
    }
    return g_kernel_cache.emplace(key, std::move(kf)).first->second;
}

// Forward transform of the zero-padded density.
std::vector<std::complex<double>> density_fft(FftWorkspace& ws, const VelocityGrid& g,
                                              std::span<const double> f) {
    const int n = g.n, m = ws.m;
    std::memset(ws.real, 0, ws.nreal * sizeof(double));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::memcpy(ws.real + (static_cast<std::size_t>(i) * m + j) * m,
                        f.data() + g.flat(i, j, 0), static_cast<std::size_t>(n) * sizeof(double));
        }
    fftw_execute_dft_r2c(ws.fwd, ws.real, ws.cplx);
    std::vector<std::complex<double>> out(ws.ncplx);
    std::memcpy(out.data(), ws.cplx, ws.ncplx * sizeof(fftw_complex));
    return out;
}

void fft_convolve_into(FftWorkspace& ws, const VelocityGrid& g,
                       const std::vector<std::complex<double>>& ff, const KernelFft& kf,
                       std::vector<double>& out) {
    const int n = g.n, m = ws.m;
    const double scale = g.h * g.h * g.h / static_cast<double>(ws.nreal);
    auto* c = reinterpret_cast<std::complex<double>*>(ws.cplx);
    for (std::size_t i = 0; i < ws.ncplx; ++i) c[i] = ff[i] * kf[i];
    fftw_execute_dft_c2r(ws.bwd, ws.cplx, ws.real);
    out.resize(g.cells());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out[g.flat(i, j, k)] =
                    ws.real[(static_cast<std::size_t>(i) * m + j) * m + k] * scale;
            }
}

double compute_lambda_max(const SymMat3Field& A, std::size_t cells) {
    double lmax = 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
    for (std::size_t c = 0; c < cells; ++c) {
        es.compute(A.at(c), Eigen::EigenvaluesOnly);
        lmax = std::max(lmax, es.eigenvalues().maxCoeff());
    }
    return lmax;
}

} // namespace

CoefficientFields coefficient_fields(const Density& f, const KernelSpec& spec, ConvMode mode) {
    const VelocityGrid& g = f.grid;
    CoefficientFields out;
    if (mode == ConvMode::direct) {
        for (int id = 0; id < 6; ++id) {
            direct_convolution(g, f.values, build_kernel_table(g, id, spec.gamma),
                               out.A.comp[id]);
        }
        for (int id = 6; id < 9; ++id) {
            direct_convolution(g, f.values, build_kernel_table(g, id, spec.gamma),
                               out.b.comp[id - 6]);
        }
        direct_convolution(g, f.values, build_kernel_table(g, 9, spec.gamma),
                           out.conv_gamma2);
    } else {
        std::scoped_lock lock(g_fft_mutex);
        FftWorkspace& ws = fft_workspace(2 * g.n);
        const auto ff = density_fft(ws, g, f.values);
        for (int id = 0; id < 6; ++id) {
            fft_convolve_into(ws, g, ff, cached_kernel_fft(g, spec.gamma, id), out.A.comp[id]);
        }
        for (int id = 6; id < 9; ++id) {
            fft_convolve_into(ws, g, ff, cached_kernel_fft(g, spec.gamma, id),
                              out.b.comp[id - 6]);
        }
        fft_convolve_into(ws, g, ff, cached_kernel_fft(g, spec.gamma, 9), out.conv_gamma2);
    }
    out.lambda_max = compute_lambda_max(out.A, g.cells());
    return out;
}

std::vector<double> scalar_convolution(const Density& f, double mu, ConvMode mode) {
    const VelocityGrid& g = f.grid;
    std::vector<double> out;
    if (mode == ConvMode::direct) {
        direct_convolution(g, f.values, build_scalar_table(g, mu), out);
    } else {
        std::scoped_lock lock(g_fft_mutex);
        FftWorkspace& ws = fft_workspace(2 * g.n);
        const auto ff = density_fft(ws, g, f.values);
        fft_convolve_into(ws, g, ff, cached_kernel_fft(g, mu, kNumKernels), out);
    }
    return out;
}

std::vector<double> collision_q(const Density& f, const KernelSpec& spec,
                                const CoefficientFields& coeff, FluxPart part) {
    const VelocityGrid& g = f.grid;
    const int n = g.n;
    const double h = g.h;
    const bool with_diff = part != FluxPart::drift;
    const bool with_drift = part != FluxPart::diffusion;
    const Vec3Field gf = with_diff ? gradient(g, f.values) : Vec3Field{};
    std::vector<double> q(g.cells(), 0.0);

    // A components in symmetric storage: index (a,b) -> component id.
    auto aidx = [](int a, int b) {
        if (a == b) return a;
        const int lo = std::min(a, b), hi = std::max(a, b);
        if (lo == 0 && hi == 1) return 3;
        if (lo == 0 && hi == 2) return 4;
        return 5;
    };

    const std::ptrdiff_t strides[3] = {static_cast<std::ptrdiff_t>(n) * n, n, 1};
    for (int axis = 0; axis < 3; ++axis) {
        const std::ptrdiff_t s = strides[axis];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    // Face between c and c + e_axis; skip the last cell per line.
                    int idx[3] = {i, j, k};
                    if (idx[axis] == n - 1) continue;
                    const std::size_t c = g.flat(i, j, k);
                    const std::size_t cp = c + s;
                    double flux = 0.0;
                    if (with_diff)
                        for (int bax = 0; bax < 3; ++bax) {
                            const double Aab =
                                0.5 * (coeff.A.comp[aidx(axis, bax)][c] +
                                       coeff.A.comp[aidx(axis, bax)][cp]);
                            double df;
                            if (bax == axis) {
                                df = (f.values[cp] - f.values[c]) / h;
                            } else {
                                df = 0.5 * (gf.comp[bax][c] + gf.comp[bax][cp]);
                            }
                            flux += Aab * df;
                        }
                    if (with_drift) {
                        const double bface =
                            0.5 * (coeff.b.comp[axis][c] + coeff.b.comp[axis][cp]);
                        flux -= bface * 0.5 * (f.values[c] + f.values[cp]);
                    }
                    q[c] += flux / h;
                    q[cp] -= flux / h;
                }
    }
    (void)spec;
    return q;
}

std::vector<double> collision_q(const Density& f, const KernelSpec& spec, ConvMode mode) {
    return collision_q(f, spec, coefficient_fields(f, spec, mode));
}

ConvolutionBoundProbe convolution_bound_probe(const Density& f, double mu, double p,
                                              double k) {
    if (!(mu > -3.0) || !(mu < 0.0)) {
        throw std::invalid_argument("convolution_bound_probe: mu must lie in (-3, 0)");
    }
    const VelocityGrid& g = f.grid;
    const std::vector<double> conv = scalar_convolution(f, mu, ConvMode::fft);
    ConvolutionBoundProbe out;
    for (std::size_t c = 0; c < g.cells(); ++c) {
        const Eigen::Vector3d v = g.point(c);
        const double w = std::pow(1.0 + v.squaredNorm(), -0.5 * mu);
        out.sup_ratio = std::max(out.sup_ratio, w * conv[c]);
    }
    out.lpk_norm = weighted_lp_norm(f, p, k);
    out.ratio_lpk = out.lpk_norm > 0.0 ? out.sup_ratio / out.lpk_norm : 0.0;
    const double l1 = weighted_lp_norm(f, 1.0, 0.0);
    const double linf = weighted_lp_norm(f, std::numeric_limits<double>::infinity(), 0.0);
    out.interp_norm = std::pow(l1, 1.0 + mu / 3.0) * std::pow(linf, -mu / 3.0);
    out.ratio_interp = out.interp_norm > 0.0 ? out.sup_ratio / out.interp_norm : 0.0;
    return out;
}

} // namespace landau
