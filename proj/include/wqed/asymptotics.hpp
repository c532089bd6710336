#pragma once
// Closed-form asymptotes of the discrete branches: the K -> 0 diverging pair
// and the continuum-edge expansions, plus the lattice-sum machinery that
// validates the latter.

#include "wqed/model.hpp"

namespace wqed {

// K -> 0 branch pair: (gamma_l - gamma_r +- 2i sqrt(gamma_r gamma_l)) / (2K)
//                      + (gamma_1d / 2) cot(phi).
// For K near 2 pi the caller maps K -> K - 2 pi.  Throws on K = 0.
cxd omega_k0(const ModelParams& p, double K, int sign);

// The pair of branch constants Omega+- = (gamma_r - gamma_l)/2 +- i sqrt(gamma_r gamma_l);
// |Omega|^2 = gamma_1d^2 exactly since the rates sum to 2 gamma_1d.
std::pair<cxd, cxd> discriminant_omega(const ModelParams& p);

enum class EdgeDirection { fwd, bwd };

// Continuum-edge asymptote: fwd gives gamma_r cot(phi_r) + Sigma_r where
// Sigma_r is the first-order left-mover self-energy of the one-root state
// chi_n = cos(phi_r)^n; bwd swaps the roles of the two movers throughout.
cxd omega_edge(const ModelParams& p, const PairMomentum& k, EdgeDirection dir);

// Sigma by direct double lattice summation over (beta^|n-n'| + beta^{n+n'}) mu^{n+n'}
// (n, n' = 1..n_terms, powers rescaled so the mu -> 0 limit stays finite),
// normalized by sum mu^{2n}.  Independent of the closed form below.
// Throws when |mu| >= 1 (non-convergent).
cxd sigma_numeric(const ModelParams& p, const PairMomentum& k, int n_terms = 3000,
                  EdgeDirection dir = EdgeDirection::fwd);

// Same Sigma through the closed geometric sums -- the third route.
cxd sigma_closed(const ModelParams& p, const PairMomentum& k,
                 EdgeDirection dir = EdgeDirection::fwd);

struct AsymptoteEval {
    double K = 0;
    cxd omega_plus, omega_minus;  // K -> 0 pair (conjugates for real input)
    cxd omega_fwd, omega_bwd;     // edge pair
};
AsymptoteEval asymptote_eval(const ModelParams& p, double K);

}  // namespace wqed
