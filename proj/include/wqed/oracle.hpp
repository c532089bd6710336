#pragma once
// Brute-force validation: dense non-Hermitian diagonalization of the truncated
// pair Hamiltonian, the banded generalized formulation, and independent checks
// of the single-excitation dispersion.

#include <Eigen/Dense>

#include "wqed/model.hpp"
#include "wqed/solver.hpp"

namespace wqed {

enum class Provenance { HK_direct, generalized_banded, F_dense };

struct DenseOperator {
    Eigen::MatrixXcd entries;
    int N = 0;
    Provenance provenance = Provenance::F_dense;
};

// dense one-way kernel F on relative coordinates r = 1..N:
// F_{rr'} = -i (e^{i phase |r-r'|} + e^{i phase (r+r')})
DenseOperator f_dense(double phase, int N);

// dense pair Hamiltonian gamma_r F(phi_r) + gamma_l F(phi_l); eigenvalues are 2 omega
DenseOperator build_hk(const ModelParams& p, const PairMomentum& k, int N);

struct EigResult {
    Eigen::VectorXcd values;   // per-photon omega for pair operators, raw otherwise
    Eigen::MatrixXcd vectors;  // columns; empty unless requested
};

// All eigenvalues of a general dense complex matrix (balanced Hessenberg + QR
// via Eigen, backward stable).  Pair operators carry eigenvalue 2 omega, so for
// HK_direct / generalized_banded provenance the values are halved to per-photon
// omega; F_dense fixtures come back unscaled.
EigResult eig_all(const DenseOperator& op, bool with_vectors = false);

// The similarity-transformed pencil A chi~ = 2 omega B chi~ with
// A = gamma_r F_l^{-1} + gamma_l F_r^{-1} (tridiagonal) and
// B = F_l^{-1} F_r^{-1} (pentadiagonal), built from the closed-form banded
// inverses with the complex (N,N) corner retained.  The physical amplitude is
// chi = F_r^{-1} chi~.
struct GeneralizedPair {
    Eigen::MatrixXcd A;  // tridiagonal
    Eigen::MatrixXcd B;  // pentadiagonal
    int N = 0;
};
GeneralizedPair build_generalized(const ModelParams& p, const PairMomentum& k, int N);
// per-photon omega spectrum of the pencil
Eigen::VectorXcd generalized_omegas(const GeneralizedPair& gp);

// |Delta_closed(q) - Delta_summed(q)| where the second value comes from the
// damped lattice sum extrapolated to zero damping.  Must be < 1e-10 gamma_1d
// away from the poles.
double single_excitation_check(const ModelParams& p, double q);

// the damped-lattice-sum route on its own (exposed for the pole-fit tests)
cxd dispersion_lattice_sum(const ModelParams& p, double q);

struct MatchResult {
    double distance = 0;  // min over eigenvalues of |omega_eig - omega_target|
    double overlap = 0;   // normalized |<v, chi_phys>| on the first n_compare sites
};
// Needs eigenvectors in `eigs`.  The target amplitudes live in the transformed
// frame; the comparison applies the banded inverse to get chi_phys = F_r^{-1} chi~.
MatchResult match_state(const EigResult& eigs, const ModelParams& p,
                        const PairMomentum& k, const PairEigenstate& target,
                        int n_compare = 0 /* 0 = all */);

}  // namespace wqed
