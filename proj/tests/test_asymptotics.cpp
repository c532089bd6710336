// closed-form limits: the K -> 0 resonance pair and the band-edge expansion
// with its lattice-sum counterpart
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "wqed/asymptotics.hpp"
#include "wqed/model.hpp"

using namespace wqed;

namespace {
const double phi3 = 0.3 * pi;
double cdiff(cxd a, cxd b) { return std::abs(a - b); }
}  // namespace

TEST_CASE("small-K resonance pair at a pinned point") {
    ModelParams p = ModelParams::from_xi(phi3, 0.25);
    cxd wm = omega_k0(p, 0.1, -1);
    CHECK(cdiff(wm, {-5.636728735997321, -8.0}) < 1e-12);
    // the two signs are complex conjugates
    cxd wp = omega_k0(p, 0.1, +1);
    CHECK(cdiff(wp, std::conj(wm)) < 1e-14);
    CHECK_THROWS_AS(omega_k0(p, 0.0, -1), std::invalid_argument);
}

TEST_CASE("small-K pair scales as 1/K around a constant offset") {
    ModelParams p = ModelParams::from_xi(phi3, 0.6);
    cxd c = 0.5 * p.gamma_1d / std::tan(phi3);
    for (double K : {0.03, 0.1, 0.22}) {
        cxd w = omega_k0(p, K, -1);
        cxd w2 = omega_k0(p, 2.0 * K, -1);
        CHECK(cdiff((w - c) * K, (w2 - c) * (2.0 * K)) < 1e-12);
    }
    // negative K (the K > pi branch mapped through K - 2 pi) mirrors the pole
    cxd wneg = omega_k0(p, -0.1, -1);
    cxd wpos = omega_k0(p, 0.1, -1);
    CHECK(cdiff((wneg - c) + (wpos - c), 0.0) < 1e-12);
}

TEST_CASE("residue magnitude is the mean rate for every chirality") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        double xi = u(rng);
        double g = 0.5 + 2.0 * u(rng);
        ModelParams p = ModelParams::from_xi(phi3, xi, g);
        auto [op, om] = discriminant_omega(p);
        CHECK(std::abs(std::abs(op) - g) < 1e-12 * g);
        CHECK(std::abs(std::abs(om) - g) < 1e-12 * g);
        CHECK(cdiff(op, std::conj(om)) < 1e-12 * g);
        // real and imaginary parts are the rate asymmetry and the geometric mean
        CHECK(op.real() == doctest::Approx(0.5 * (p.gamma_r - p.gamma_l)).epsilon(1e-12));
        CHECK(op.imag() ==
              doctest::Approx(std::sqrt(p.gamma_r * p.gamma_l)).epsilon(1e-12));
    }
}

TEST_CASE("band-edge expansion at a pinned point") {
    ModelParams p = ModelParams::from_xi(phi3, 0.2);
    PairMomentum k(p, 2.0 * phi3 + 0.3);

    cxd sc = sigma_closed(p, k);
    CHECK(cdiff(sc, {0.10177569104570013, -0.0018739083297884692}) < 1e-12);

    cxd sn = sigma_numeric(p, k);
    CHECK(cdiff(sn, sc) < 1e-10);

    cxd we = omega_edge(p, k, EdgeDirection::fwd);
    CHECK(cdiff(we, {-10.925876818270892, -0.0018739083297884818}) < 1e-10);

    // omega_edge = g_own cot(ph_own) + sigma in the forward frame
    cxd cot_part = p.gamma_r / std::tan(k.phi_r);
    CHECK(cdiff(we, cot_part + sc) < 1e-12);
}

TEST_CASE("backward frame swaps the mover roles") {
    ModelParams p = ModelParams::from_xi(phi3, 0.45);
    PairMomentum k(p, 2.0 * phi3 + 0.42);
    cxd sc = sigma_closed(p, k, EdgeDirection::bwd);
    cxd sn = sigma_numeric(p, k, 3000, EdgeDirection::bwd);
    CHECK(cdiff(sn, sc) < 1e-10);
    cxd we = omega_edge(p, k, EdgeDirection::bwd);
    CHECK(cdiff(we, p.gamma_l / std::tan(k.phi_l) + sc) < 1e-12);
}

TEST_CASE("edge sum stays finite as the decay root degenerates") {
    // K = 2 phi + pi puts cos(phi_r) ~ 0: the closed form has a removable
    // limit and the series collapses to its first term
    ModelParams p = ModelParams::from_xi(phi3, 0.2);
    PairMomentum k(p, 2.0 * phi3 + pi);
    cxd sn = sigma_numeric(p, k);
    cxd sc = sigma_closed(p, k);
    CHECK(cdiff(sn, sc) < 1e-12);
    cxd beta = std::exp(cxd(0.0, 1.0) * cxd(k.phi_l, 0.0));
    cxd limit = cxd(0.0, -0.5) * p.gamma_l * (1.0 + beta * beta);
    CHECK(cdiff(sc, limit) < 1e-12);
}

TEST_CASE("edge series rejects non-decaying geometry and bad lengths") {
    ModelParams p = ModelParams::from_xi(phi3, 0.2);
    // K = 2 phi makes cos(phi_r) = 1: no decaying edge state to sum over
    PairMomentum k(p, 2.0 * phi3);
    CHECK_THROWS_AS(sigma_numeric(p, k), std::domain_error);
    PairMomentum kg(p, 2.0 * phi3 + 0.3);
    CHECK_THROWS_AS(sigma_numeric(p, kg, 1), std::invalid_argument);
}

TEST_CASE("combined evaluation matches the individual pieces") {
    ModelParams p = ModelParams::from_xi(phi3, 0.3);
    double K = 1.9 * pi;
    AsymptoteEval ev = asymptote_eval(p, K);
    CHECK(ev.K == K);
    // beyond pi the 1/K pole is approached from K - 2 pi
    CHECK(cdiff(ev.omega_minus, omega_k0(p, K - two_pi, -1)) < 1e-14);
    CHECK(cdiff(ev.omega_plus, omega_k0(p, K - two_pi, +1)) < 1e-14);
    CHECK(cdiff(ev.omega_fwd, omega_edge(p, PairMomentum(p, K), EdgeDirection::fwd)) <
          1e-14);
    CHECK(cdiff(ev.omega_bwd, omega_edge(p, PairMomentum(p, K), EdgeDirection::bwd)) <
          1e-14);

    AsymptoteEval lo = asymptote_eval(p, 0.2);
    CHECK(cdiff(lo.omega_minus, omega_k0(p, 0.2, -1)) < 1e-14);
}
