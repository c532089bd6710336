#pragma once
// K-grid sweeps with deterministic branch linking, exceptional-point location
// by connectivity bisection, and the continuum-edge coalescence scan.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wqed/solver.hpp"

namespace wqed {

struct KGrid {
    double k_min = 0.005 * pi;
    double k_max = 1.995 * pi;
    int n = 400;
};

struct BranchPoint {
    double K;
    PairEigenstate state;
};

struct Branch {
    int id = 0;  // 1-based creation order; roman numeral in output
    std::vector<BranchPoint> points;  // K strictly increasing
    // set when the branch was cut by the |omega| cap near a divergence; the
    // far side reappears as a new branch (same dispersion sheet, reconnected
    // through omega -> infinity)
    bool capped = false;
};

// resolve a jobs request: >0 as-is, otherwise WQED_JOBS env, otherwise
// hardware concurrency
int effective_jobs(int jobs);

// solve_states at every grid K outside the singular windows (parallel across K),
// then a single-threaded nearest-neighbour linking pass in (Re, Im) omega with
// velocity extrapolation and a mild preference for class-compatible matches.
// Results are identical for any worker count.
std::vector<Branch> sweep_K(const ModelParams& p, const KGrid& grid,
                            double window = default_singular_window,
                            int jobs = 0, double omega_cap = 1e3);

struct EpResult {
    double phi = 0;
    double ratio_ep = 0;  // gamma_l / gamma_r at the branch coalescence
    double k_ep = 0;
    double min_dist = 0;  // inter-branch |omega| gap at (ratio_ep, k_ep)
};

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- internals of find_ep, exposed for tests ---

// resonance branches on [K0, K1] linked by velocity extrapolation
std::vector<std::vector<std::pair<double, cxd>>> resonance_tracks(
    double phi, double ratio, double K0, double K1, int n, int jobs = 0);

// Endpoint-pairing signature of the two long resonance tracks: true when the
// lower-Re starting branch ends at the deeper-Im endpoint.  nullopt when the
// tracks are not resolvable at this ratio.
std::optional<bool> linked(double phi, double ratio, double K0, double K1,
                           int n = 36, int jobs = 0);

// singularity-free K windows where both resonance branches run unbroken
std::vector<std::pair<double, double>> segments(double phi);

// Bisect the chirality ratio until the connectivity signature flips, then
// refine K_ep as the argmin of the inter-branch distance, followed by a
// shrinking-stencil descent on (ratio, K) into the square-root cone.
// Throws BracketError when the signature never differs across the bracket.
EpResult find_ep(double phi, std::pair<double, double> ratio_bracket = {0.01, 0.75},
                 int n_grid = 36, double rtol = 0.004, int jobs = 0);

// find_ep per phi; failures are recorded and the scan continues
std::vector<std::pair<double, std::optional<EpResult>>> ep_curve(
    const std::vector<double>& phi_grid, int jobs = 0);

enum class EdgeSide { lower, upper };  // K = 2 phi vs K = 2 pi - 2 phi

// |omega_bound - omega_antibound| at K = edge +- offset; offsets where either
// state is missing are omitted
std::vector<std::pair<double, double>> edge_coalescence(
    const ModelParams& p, EdgeSide side, const std::vector<double>& offsets);

}  // namespace wqed
