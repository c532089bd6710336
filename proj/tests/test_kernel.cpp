// tight-binding kernel: hopping coefficients, dispersion, boundary rows,
// and the closed-form banded inverse of the mover matrices
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "wqed/kernel.hpp"
#include "wqed/model.hpp"
#include "wqed/oracle.hpp"
#include "wqed/solver.hpp"

using namespace wqed;

namespace {
const double phi3 = 0.3 * pi;

double cdiff(cxd a, cxd b) { return std::abs(a - b); }
}  // namespace

TEST_CASE("hopping coefficients at a pinned complex energy") {
    // xi = 0.4, K = 0.9 pi, omega = 0.37 - 0.21i; values pinned from an
    // independent implementation of the same closed forms
    ModelParams p = ModelParams::from_xi(phi3, 0.4);
    PairMomentum k(p, 0.9 * pi);
    HoppingCoeffs c = coeffs(p, k, cxd(0.37, -0.21));

    CHECK(cdiff(c.t2, {-0.576288510858969, 0.3270826683253608}) < 1e-14);
    CHECK(cdiff(c.t1, {-0.1688541365869733, -0.12030083729076704}) < 1e-14);
    CHECK(cdiff(c.t0, {-2.25030839364707, -0.1701310756614416}) < 2e-14);
    CHECK(cdiff(c.dt0, {1.2588527239278946, 0.49721374398680246}) < 2e-14);
    CHECK(cdiff(c.dt1, {0.8149950278965488, -0.462564745562906}) < 1e-14);
    CHECK(cdiff(c.dtm1, {-0.6467837161842551, 0.36709346053700964}) < 1e-14);
}

TEST_CASE("hopping coefficients collapse at K -> 0, omega = 0") {
    // with both co-moving phases equal to phi the closed forms reduce to
    // t1 = -gamma_1d / sin(phi) and t0 = 2 gamma_1d cot(phi), independent of xi
    for (double xi : {0.0, 0.4, 1.0}) {
        ModelParams p = ModelParams::from_xi(phi3, xi);
        PairMomentum k(p, 1e-8);
        HoppingCoeffs c = coeffs(p, k, 0.0);
        CHECK(c.t1.real() == doctest::Approx(1.0 - std::sqrt(5.0)).epsilon(1e-7));
        CHECK(c.t0.real() == doctest::Approx(1.4530850560107220).epsilon(1e-7));
        CHECK(c.t2 == cxd(0.0, 0.0));  // proportional to omega
    }
}

TEST_CASE("coefficients are affine in omega") {
    ModelParams p = ModelParams::from_xi(phi3, 0.7);
    PairMomentum k(p, 1.3 * pi);
    cxd w1(0.2, -0.1), w2(-0.5, 0.3);
    HoppingCoeffs a = coeffs(p, k, w1);
    HoppingCoeffs b = coeffs(p, k, w2);
    HoppingCoeffs m = coeffs(p, k, 0.5 * (w1 + w2));
    CHECK(cdiff(0.5 * (a.t2 + b.t2), m.t2) < 1e-14);
    CHECK(cdiff(0.5 * (a.t1 + b.t1), m.t1) < 1e-14);
    CHECK(cdiff(0.5 * (a.t0 + b.t0), m.t0) < 1e-14);
    CHECK(cdiff(0.5 * (a.dt0 + b.dt0), m.dt0) < 1e-14);
    CHECK(cdiff(0.5 * (a.dt1 + b.dt1), m.dt1) < 1e-14);
    CHECK(cdiff(0.5 * (a.dtm1 + b.dtm1), m.dtm1) < 1e-14);
}

TEST_CASE("coefficients reject the singular K set") {
    ModelParams p = ModelParams::from_xi(phi3, 0.4);
    // K = 2 phi makes phi_r = 0
    PairMomentum k1(p, 2.0 * phi3);
    CHECK_THROWS_AS(coeffs(p, k1, 0.1), std::domain_error);
    // K = 2 phi + pi makes 2 phi_r = -pi
    PairMomentum k2(p, 2.0 * phi3 + pi);
    CHECK_THROWS_AS(coeffs(p, k2, 0.1), std::domain_error);
}

TEST_CASE("dispersion is symmetric under z -> 1/z") {
    ModelParams p = ModelParams::from_xi(phi3, 0.6);
    PairMomentum k(p, 1.1 * pi);
    HoppingCoeffs c = coeffs(p, k, cxd(0.15, -0.02));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        cxd z(0.2 + 0.7 * std::abs(u(rng)), u(rng));
        CHECK(cdiff(dispersion_value(c, z), dispersion_value(c, 1.0 / z)) <
              1e-12 * (1.0 + std::abs(dispersion_value(c, z))));
    }
}

TEST_CASE("omega_of_z closes the dispersion relation") {
    // for omega = omega_of_z(z), z must be a bulk dispersion root
    ModelParams p = ModelParams::from_xi(phi3, 0.4);
    PairMomentum k(p, 1.2 * pi);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int i = 0; i < 20; ++i) {
        cxd z(0.3 + 0.5 * std::abs(u(rng)), 0.4 * u(rng));
        cxd w = omega_of_z(p, k, z);
        HoppingCoeffs c = coeffs(p, k, w);
        double scale = std::abs(c.t2) + std::abs(c.t1) + std::abs(c.t0);
        CHECK(std::abs(dispersion_value(c, z)) < 1e-12 * scale);
    }
    // z on the free-photon circle annihilates the denominator q1 q2
    CHECK_THROWS_AS(omega_of_z(p, k, std::polar(1.0, k.phi_r)), std::domain_error);
    // z = 0 is the regular omega = 0 limit
    CHECK(std::abs(omega_of_z(p, k, cxd(0.0, 0.0))) == 0.0);
}

TEST_CASE("partner root via Vieta") {
    ModelParams p = ModelParams::from_xi(phi3, 0.5);
    PairMomentum k(p, 0.85 * pi);
    HoppingCoeffs c = coeffs(p, k, cxd(0.3, -0.1));
    cxd wa(1.7, 0.4);
    cxd wb = partner_w(c, wa);
    // w_a + w_b = -t1/t2 is the sum rule of the quadratic in w = z + 1/z
    CHECK(cdiff(wa + wb, -c.t1 / c.t2) < 1e-14);

    // t2 ~ 0 (omega = 0) has no second root to hand out
    HoppingCoeffs c0 = coeffs(p, k, 0.0);
    CHECK_THROWS_AS(partner_w(c0, wa), std::domain_error);
}

TEST_CASE("boundary determinant at a pinned off-solution point") {
    ModelParams p = ModelParams::from_xi(phi3, 0.4);
    PairMomentum k(p, 0.9 * pi);
    HoppingCoeffs c = coeffs(p, k, cxd(0.37, -0.21));
    cxd za(0.5, 0.1);
    cxd wb = partner_w(c, za + 1.0 / za);
    cxd sq = std::sqrt(wb * wb - 4.0);
    cxd zb = (wb + sq) / 2.0;
    CHECK(cdiff(zb, {-0.48248802101101285, -0.00028674919229725775}) < 1e-13);

    auto [det, rel] = boundary_det_scaled(c, za, zb);
    CHECK(cdiff(det, {0.8411095963037065, -0.0967460517517114}) < 1e-12);
    CHECK(rel == doctest::Approx(0.9213867382271921).epsilon(1e-10));
    // the unscaled determinant is the same bilinear form
    CHECK(cdiff(boundary_det(c, za, zb) * za * zb, det * 1.0) <
          1e-10);  // det = za zb (f1a f2b zb - f1b f2a za) / (za zb) relation
}

TEST_CASE("boundary determinant vanishes on a true eigenstate") {
    ModelParams p = ModelParams::from_xi(phi3, 0.4);
    PairMomentum k(p, pi);
    auto states = solve_states(p, k);
    REQUIRE(!states.empty());
    for (const auto& s : states) {
        HoppingCoeffs c = coeffs(p, k, s.omega);
        auto [det, rel] = boundary_det_scaled(c, s.z_a, s.z_b);
        (void)det;
        CHECK(rel < 1e-8);
    }
}

TEST_CASE("banded inverse entries at phase pi/3") {
    InverseF inv = inverse_F(pi / 3.0, 3);
    CHECK(inv.off == doctest::Approx(0.5773502691896258).epsilon(1e-15));
    CHECK(inv.diag == doctest::Approx(-0.5773502691896258).epsilon(1e-15));
    CHECK(inv.corner11 == doctest::Approx(0.5773502691896258).epsilon(1e-15));
    CHECK(cdiff(inv.corner_nn, {-0.2886751345948129, 0.5}) < 1e-15);
    CHECK_THROWS_AS(inverse_F(pi / 3.0, 1), std::domain_error);
    CHECK_THROWS_AS(inverse_F(pi / 2.0, 8), std::domain_error);  // sin(2 phase) = 0
}

TEST_CASE("banded inverse actually inverts the dense mover matrix") {
    // F(phase) F^-1(phase) = 1 entrywise; the corners absorb the open ends
    for (double phase : {0.17 * pi, 0.3 * pi, 0.41 * pi, 0.73 * pi}) {
        int N = 60;
        DenseOperator F = f_dense(phase, N);
        InverseF inv = inverse_F(phase, N);
        double worst = 0.0;
        for (int col = 0; col < N; ++col) {
            std::vector<cxd> e(N, 0.0);
            for (int r = 0; r < N; ++r) e[r] = F.entries(r, col);
            std::vector<cxd> y = wqed::apply(inv, e);
            for (int r = 0; r < N; ++r) {
                cxd want = (r == col) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(y[r] - want));
            }
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("apply matches an explicit tridiagonal product") {
    InverseF inv = inverse_F(0.37 * pi, 12);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cxd> x(12);
    for (auto& v : x) v = cxd(u(rng), u(rng));
    auto y = wqed::apply(inv, x);
    for (int r = 0; r < 12; ++r) {
        cxd want = 0.0;
        if (r > 0) want += inv.off * x[r - 1];
        if (r < 11) want += inv.off * x[r + 1];
        if (r == 0)
            want += inv.corner11 * x[0];
        else if (r == 11)
            want += inv.corner_nn * x[11];
        else
            want += inv.diag * x[r];
        CHECK(std::abs(y[r] - want) < 1e-15);
    }
    std::vector<cxd> bad(5);
    CHECK_THROWS_AS(wqed::apply(inv, bad), std::invalid_argument);
}

TEST_CASE("two-root ansatz assembly") {
    cxd za(0.5, 0.0), zb(-0.25, 0.0);
    auto chi = assemble_chi(za, zb, 2.0, 1.0, 4);
    CHECK(cdiff(chi[0], 2.0 * za + zb) < 1e-15);
    CHECK(cdiff(chi[1], 2.0 * za * za + zb * zb) < 1e-15);
    CHECK(cdiff(chi[3], 2.0 * std::pow(za, 4) + std::pow(zb, 4)) < 1e-15);
}

TEST_CASE("row residual separates solutions from impostors") {
    // fully chiral closed form is exact: residual at machine precision
    ModelParams p = ModelParams::from_xi(phi3, 0.0);
    PairMomentum k(p, pi);
    PairEigenstate st = chiral_solve(p, k);
    HoppingCoeffs c = coeffs(p, k, st.omega);
    CHECK(residual_rows(c, st.z_a, st.z_b, st.A, st.B) < 1e-12);

    // nudging one root breaks the bulk rows at a visible scale
    CHECK(residual_rows(c, st.z_a * 1.001, st.z_b, st.A, st.B) > 1e-6);

    // ... and so does corrupting the edge correction dt1
    HoppingCoeffs bad = c;
    bad.dt1 += 1e-3 * (1.0 + std::abs(bad.dt1));
    CHECK(residual_rows(bad, st.z_a, st.z_b, st.A, st.B) > 1e-7);
}
