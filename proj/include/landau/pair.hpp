#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "landau/grid.hpp"
#include "landau/kernels.hpp"

namespace landau {

// Cached per-cell derivatives of log f plus per-offset kernel tables for the
// O(N^2) pair sums. The hash ties the caches to the density they were built
// from; every pair functional re-checks it.
struct PairContext {
    Density f;
    KernelSpec spec;
    LogDerivatives logd;
    std::vector<double> frob2;  // ||hess log f||_F^2 per cell
    std::vector<std::int16_t> ci, cj, ck;
    // Offset tables, edge 2n-1, indexed by (di,dj,dk)+(n-1). Entry 0 of the
    // diagonal offset is never read (diagonal pairs are skipped).
    std::vector<double> t_araw, t_ar2raw, t_saraw, t_dsaraw;
    std::vector<double> t_acut, t_ar2cut, t_sacut, t_dsacut;
    std::vector<double> t_invr;
    std::uint64_t f_hash = 0;

    bool hash_matches() const;
};

// allow_large lifts the default n <= 24 cap on the O(N^2) pair sums.
PairContext make_pair_context(const Density& f, const KernelSpec& spec,
                              bool allow_large = false);

struct DissipationReport {
    // Regularized-kernel mode: alpha = (r^2 + eps^2)^(gamma/2).
    double entropy_dissipation = 0.0;
    double d_par = 0.0, d_rad = 0.0, d_sph = 0.0, r_sph = 0.0;
    double fisher_dissipation_total = 0.0;  // d_par + d_rad + d_sph - (gamma^2/2) r_sph
    // Cutoff-kernel mode: alpha~ = eta(r) r^gamma.
    double d_par_cut = 0.0, d_rad_cut = 0.0, d_sph_cut = 0.0, r_sph_cut = 0.0;
    double j1 = 0.0, j2 = 0.0;  // cutoff by definition
    std::map<std::string, double> margins;
};

enum class PairLoop {
    half,  // unordered pairs with symmetrized integrands (default)
    full   // all ordered pairs; for the exchange-symmetry self-test
};

DissipationReport fisher_dissipation_terms(const PairContext& ctx,
                                           PairLoop loop = PairLoop::half);

// Naive reference evaluation: ordered-pair sextuple loop, literal i/j frame
// sums and 6-vector directional derivatives, sequential accumulation, no
// shared pair kernels. Slow by design; capped at n <= 16.
DissipationReport fisher_dissipation_terms_bruteforce(const Density& f,
                                                      const KernelSpec& spec);

// Just the entropy production 1/2 sum alpha F xi.a.xi; cheaper than the full
// report when only this is recorded along a flow.
double entropy_dissipation(const PairContext& ctx);

struct JTerms {
    double j1 = 0.0;
    double j2 = 0.0;
    double bound_rhs = 0.0;  // 2^(3-gamma) M (i_grad + c_delta M)
    double margin = 0.0;     // bound_rhs - |j2|
};

JTerms j_terms(const PairContext& ctx);

// Lemma residual: for any 6-vector (gv,gw) at positions (v,w),
// |g|^2 = 1/2 sum_i (gv_i+gw_i)^2 + (n.g)^2 + 1/(2 r^2) sum_k (b~_k.g)^2.
// Returns the absolute residual.
double decomposition_identity_residual(const Eigen::Vector3d& gv, const Eigen::Vector3d& gw,
                                       const Eigen::Vector3d& v, const Eigen::Vector3d& w);

struct CoercivityProbe {
    double c_min = 0.0;        // min over all sampled (v, H)
    double c_min_basis = 0.0;  // canonical unit-norm test Hessians
    double c_min_field = 0.0;  // the field's own normalized log-Hessians
    std::size_t argmin_cell = 0;
};

// ratio(v,H) = [h^3 sum_w alpha~(r)/r^2 f(w) tr(a H a H)] / <v>^(gamma-2), for
// ||H||_F = 1, minimized over cells with f(v) > 0. With the field Hessians
// included, j1 >= c_min_field * weighted_hessian_functional holds exactly at
// the quadrature level.
CoercivityProbe coercivity_probe(const PairContext& ctx);

struct InequalityCheck {
    double factor = 0.0;  // 1 - gamma^2 / (4 * 5.5)
    double c1 = 0.0, C1 = 0.0, C2 = 0.0;
    double margin1 = 0.0;        // factor (d_par_cut+d_sph_cut) - [c1 whf - C1 M i - C2 M^2]
    double margin1_scale = 0.0;  // dominant magnitude among the four terms
    double lambda3_margin_raw = 0.0;   // d_sph - 11 r_sph
    double lambda3_margin_cut = 0.0;
    double jchain_margin = 0.0;  // d_par_cut + d_sph_cut - (j1 - j2)
    double j2_margin = 0.0;      // j_terms bound_rhs - |j2|
    bool pass = false;
};

InequalityCheck dissipation_inequality_check(const DissipationReport& rep,
                                             const CoercivityProbe& coer, double mass,
                                             double fisher_grad, double whf,
                                             const KernelSpec& spec);

} // namespace landau
