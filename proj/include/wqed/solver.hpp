#pragma once
// Frequency elimination down to a degree <= 8 polynomial in the Bloch variable
// z, root finding, and reconstruction/filtering of the discrete pair states.

#include <vector>

#include "wqed/kernel.hpp"
#include "wqed/poly.hpp"

namespace wqed {

enum class StateClass { Bound, Antibound, Resonance, Unclassified };
const char* to_string(StateClass c);

// classification thresholds (units of gamma_1d for eps_im)
inline constexpr double eps_im = 1e-8;
inline constexpr double eps_z = 1e-6;
// amplitudes below this carry no observable weight of their root
inline constexpr double eps_amp = 1e-4;

struct PairEigenstate {
    cxd omega;        // per-photon detuning, Im <= 0 retained
    cxd z_a, z_b;     // Bloch roots, canonically |z_a| <= |z_b|
    cxd A, B;         // amplitudes, |A|^2 + |B|^2 = 1, largest one real positive
    StateClass cls = StateClass::Unclassified;
    double residual = 0.0;
    bool ep_flag = false;  // |z_a - z_b| < 1e-6: coalescent double root, kept
};

struct EliminationPoly {
    poly::Poly coeffs;  // ascending in z, degree <= 8
};

// Coefficient polynomials (in z) of the omega-eliminated system.  tau* are the
// bulk couplings with the denominator den = q1 q2 cleared; num/den is omega(z).
struct ElimData {
    poly::Poly tau2, tau1, tau0, dtau0, dtau1, dtaum1;
    poly::Poly num, den, q1, q2, quad;
    poly::Poly ux[4], vx[2], vtx[3];  // numerator blocks of the edge rows
    poly::Poly z_t2, wt;              // z*tau2 and z*tau1 + (z^2+1)*tau2
    poly::Poly xi_red;                // 2 (z^2+1) quad + tau1, the residual edge factor
};
ElimData elim_build(const ModelParams& p, const PairMomentum& k);

// The eliminated numerator evaluated at one point without expanding it.
cxd nt_eval(const ElimData& d, cxd z);
// Expanded coefficient form (degree ~30); used only by the construction
// cross-check, where it is evaluated in extended precision.
poly::Poly nt_coeffs(const ElimData& d);

struct ElimDiagnostics {
    int a = 0, b = 0, c = 0;  // deflated multiplicities of z, quad, xi_red
    double rho = 1.0;         // sampling radius
    poly::Poly g_raw;         // before the shared-root post-deflation
    // filled when route_check is requested:
    poly::Poly route_a;        // coefficients from the expanded-form route
    double cancellation = 0;   // worst term-size/value ratio over the samples
};

// Numerator sampled on a circle, systematic factors divided out pointwise, and
// the degree <= 8 coefficient vector recovered by an inverse DFT with a tail
// assertion.  Throws std::runtime_error when no factor combination deflates.
EliminationPoly eliminate(const ModelParams& p, const PairMomentum& k,
                          ElimDiagnostics* diag = nullptr,
                          bool route_check = false);

// companion-matrix roots of the elimination polynomial, Newton-polished
std::vector<cxd> roots(const EliminationPoly& g);

// Full pipeline: roots of the elimination, omega/partner reconstruction with a
// boundary-determinant gate and secant polish, amplitude solve, physical
// filters, canonical ordering, dedup, classification, residual gate.
std::vector<PairEigenstate> solve_states(const ModelParams& p, const PairMomentum& k);

// Fully chiral (gamma_l = 0) closed form: omega = -gamma_r cot(K/2 - phi),
// z_a = cos(phi - K/2), B = 0.  Throws near K = 2 phi where omega diverges.
PairEigenstate chiral_solve(const ModelParams& p, const PairMomentum& k);

// residual of a reconstructed state against the tight-binding rows
double residuals(const ModelParams& p, const PairMomentum& k,
                 const PairEigenstate& state, int n_rows = 8);

}  // namespace wqed
