#pragma once
// Physical parameters of the atom array, the single-polariton dispersion, and
// the two-polariton scattering continua used to label solutions.

#include <complex>
#include <string>
#include <vector>

namespace wqed {

using cxd = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// Emission rates and the inter-atom propagation phase.  gamma_r + gamma_l is
// pinned to 2*gamma_1d, so gamma_1d is the energy unit throughout.
struct ModelParams {
    double phi;       // propagation phase in (0, pi)
    double gamma_1d;  // mean emission rate (energy unit)
    double xi;        // chirality ratio gamma_l / gamma_r
    double gamma_r;   // right-mover rate, 2 gamma_1d / (1 + xi)
    double gamma_l;   // left-mover rate,  2 gamma_1d xi / (1 + xi)

    static ModelParams from_xi(double phi, double xi, double gamma_1d = 1.0);
    // accepts gamma_l > gamma_r (ratio > 1); the swap-symmetry tests need it.
    // The CLI enforces 0 <= xi <= 1 at its boundary instead.
    static ModelParams from_rates(double phi, double gamma_r, double gamma_l);
};

// Center-of-mass momentum and the two Doppler-shifted phases it induces on the
// right/left kernels.
struct PairMomentum {
    double K;      // in (0, 2 pi)
    double phi_r;  // phi - K/2
    double phi_l;  // phi + K/2

    PairMomentum(const ModelParams& p, double K);
};

// K values where a tight-binding denominator sin(phi_r), sin(phi_l),
// sin(2 phi_r) or sin(2 phi_l) vanishes.  Sweeps skip a window around each.
std::vector<double> singular_set(double phi);
// distance from K to the nearest singular point, on the 2pi-periodic circle
double singular_distance(double phi, double K);

inline constexpr double default_singular_window = 1e-3 * two_pi;

enum class BandLabel { UU, UL, LL };
const char* to_string(BandLabel label);

struct ContinuumBands {
    struct Band {
        double lo, hi;
        BandLabel label;
    };
    double K = 0.0;
    std::vector<Band> bands;  // disjoint within one label, lo <= hi
};

// Bloch polariton detuning Delta(q); real away from the poles q = phi, 2pi-phi.
// Throws std::domain_error within pole_tol of a pole.
double polariton_dispersion(const ModelParams& p, double q, double pole_tol = 1e-12);

// Sampled two-polariton continua at fixed K: omega(q) = (Delta(q) + Delta(K-q))/2
// per photon.  The q circle is cut at the dispersion poles of either constituent,
// each stretch carries one UU/UL/LL label, and per-label overlaps are merged.
ContinuumBands continuum_bands(const ModelParams& p, const PairMomentum& K,
                               int q_samples = 4001);

// Where Re(omega) sits relative to the continua: empty label set <=> in the gap.
struct EnergyRegion {
    std::vector<BandLabel> labels;
    bool in_gap() const { return labels.empty(); }
};
EnergyRegion classify_energy(const ContinuumBands& bands, cxd omega);
std::string to_string(const EnergyRegion& region);

}  // namespace wqed
