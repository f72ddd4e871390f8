#pragma once

#include "landau/grid.hpp"
#include "landau/kernels.hpp"

namespace landau {

// A[f](v) = int f(v-w) |w|^gamma a(w) dw,  b[f](v) = -2 int f(v-w) |w|^gamma w dw.
// conv_gamma2 = f * |.|^(gamma+2); the trace relation tr A = 2 conv_gamma2 holds
// exactly at the discrete level because the origin cell uses the same cell
// average for both.
struct CoefficientFields {
    SymMat3Field A;
    Vec3Field b;
    std::vector<double> conv_gamma2;
    double lambda_max = 0.0;  // max over cells of the largest eigenvalue of A
};

enum class ConvMode { direct, fft };

CoefficientFields coefficient_fields(const Density& f, const KernelSpec& spec,
                                     ConvMode mode = ConvMode::fft);

// f * |.|^mu with the origin cell replaced by the exact cell average
// h^mu * cube_kernel_average(mu). mu in (-3, 1].
std::vector<double> scalar_convolution(const Density& f, double mu,
                                       ConvMode mode = ConvMode::fft);

// Divergence of the face flux A grad f - b f; boundary faces carry zero flux,
// so the discrete integral of q vanishes to rounding. FluxPart selects the
// diffusion (A grad f) or drift (-b f) contribution alone; both by default.
enum class FluxPart { both, diffusion, drift };

std::vector<double> collision_q(const Density& f, const KernelSpec& spec,
                                const CoefficientFields& coeff,
                                FluxPart part = FluxPart::both);
std::vector<double> collision_q(const Density& f, const KernelSpec& spec,
                                ConvMode mode = ConvMode::fft);

struct ConvolutionBoundProbe {
    double sup_ratio = 0.0;    // sup_v <v>^(-mu) (f * |.|^mu)(v)
    double lpk_norm = 0.0;     // ||f||_{L^p_k}
    double ratio_lpk = 0.0;    // sup_ratio / lpk_norm
    double interp_norm = 0.0;  // ||f||_1^(1+mu/3) ||f||_inf^(-mu/3)
    double ratio_interp = 0.0;
};

ConvolutionBoundProbe convolution_bound_probe(const Density& f, double mu, double p,
                                              double k);

} // namespace landau
