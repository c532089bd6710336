#include "wqed/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace wqed {

namespace {
// exact-zero guard for the trigonometric denominators; window exclusion around
// the singular K set is the caller's (sweep's) job
constexpr double denom_tol = 1e-12;
}  // namespace

HoppingCoeffs coeffs(const ModelParams& p, const PairMomentum& k, cxd omega) {
    double s1 = std::sin(k.phi_r), c1 = std::cos(k.phi_r);
    double s2 = std::sin(k.phi_l), c2 = std::cos(k.phi_l);
    double s21 = std::sin(2.0 * k.phi_r), s22 = std::sin(2.0 * k.phi_l);
    if (std::abs(s1) < denom_tol)
        throw std::domain_error("coeffs: sin(phi_r) vanishes at this K");
    if (std::abs(s2) < denom_tol)
        throw std::domain_error("coeffs: sin(phi_l) vanishes at this K");
    if (std::abs(s21) < denom_tol)
        throw std::domain_error("coeffs: sin(2 phi_r) vanishes at this K");
    if (std::abs(s22) < denom_tol)
        throw std::domain_error("coeffs: sin(2 phi_l) vanishes at this K");

    double gr = p.gamma_r, gl = p.gamma_l;
    HoppingCoeffs c;
    // Each rate couples to the opposite mover's phase: the right-mover part of
    // the kernel carries 1/sin(phi_l) and vice versa.  t+-1 is combined over the
    // common denominator s1 s2 (fewer cancellation sites near singular K).
    c.t2 = omega / (2.0 * s1 * s2);
    c.t1 = -gr / (2.0 * s2) - gl / (2.0 * s1) - omega * (c1 + c2) / (s1 * s2);
    c.t0 = gr * c2 / s2 + gl * c1 / s1 + 2.0 * omega * (c1 / s1) * (c2 / s2) +
           omega / (s1 * s2);
    double ct21 = std::cos(2.0 * k.phi_r) / s21, ct22 = std::cos(2.0 * k.phi_l) / s22;
    c.dt0 = -gr / s22 - gl / s21 +
            2.0 * omega * (ct21 * ct22 - (c1 / s1) * (c2 / s2) - 1.0 / (4.0 * s1 * s2));
    c.dt1 = omega / (s1 * s22);
    c.dtm1 = omega / (s21 * s2);
    return c;
}

cxd dispersion_value(const HoppingCoeffs& c, cxd z) {
    if (std::abs(z) == 0.0) throw std::domain_error("dispersion_value: z = 0");
    cxd zi = 1.0 / z;
    return c.t2 * (z * z + zi * zi) + c.t1 * (z + zi) + c.t0;
}

cxd omega_of_z(const ModelParams& p, const PairMomentum& k, cxd z) {
    double s1 = std::sin(k.phi_r), c1 = std::cos(k.phi_r);
    double s2 = std::sin(k.phi_l), c2 = std::cos(k.phi_l);
    // clearing denominators in D(z) = A(z) + omega B(z) gives
    //   omega = z (gr s1 q2 + gl s2 q1) / (q1 q2),   q_i = z^2 + 1 - 2 c_i z
    cxd q1 = z * z + 1.0 - 2.0 * c1 * z;
    cxd q2 = z * z + 1.0 - 2.0 * c2 * z;
    cxd den = q1 * q2;
    double r = std::abs(z);
    double den_scale = (r * r + 1.0 + 2.0 * std::abs(c1) * r) *
                       (r * r + 1.0 + 2.0 * std::abs(c2) * r);
    if (std::abs(den) < 1e-12 * den_scale)
        throw std::domain_error("omega_of_z: z on a continuum edge (B(z) ~ 0)");
    return z * (p.gamma_r * s1 * q2 + p.gamma_l * s2 * q1) / den;
}

cxd partner_w(const HoppingCoeffs& c, cxd w_a) {
    double scale = std::abs(c.t1) + std::abs(c.t0) + std::abs(c.t2);
    if (std::abs(c.t2) < 1e-14 * (scale > 0.0 ? scale : 1.0))
        throw std::domain_error("partner_w: t2 ~ 0 (omega = 0 degeneracy)");
    return -c.t1 / c.t2 - w_a;
}

std::pair<cxd, cxd> edge_rows(const HoppingCoeffs& c, cxd z) {
    if (std::abs(z) == 0.0) throw std::domain_error("edge_rows: z = 0");
    cxd f1 = (c.t0 + c.dt0) + (c.t1 + c.dt1) * z + c.t2 * z * z;
    cxd f2 = (c.t1 + c.dtm1) / z + c.t0 + c.t1 * z + c.t2 * z * z;
    return {f1, f2};
}

cxd boundary_det(const HoppingCoeffs& c, cxd z_a, cxd z_b) {
    auto [f1a, f2a] = edge_rows(c, z_a);
    auto [f1b, f2b] = edge_rows(c, z_b);
    return z_b * f1a * f2b - z_a * f1b * f2a;
}

std::pair<cxd, double> boundary_det_scaled(const HoppingCoeffs& c, cxd z_a, cxd z_b) {
    // 2x2 system [[za f1(za), zb f1(zb)], [za^2 f2(za), zb^2 f2(zb)]] on (A, B);
    // row-norm scaling keeps both vanishing modes visible (the za column is
    // identically zero at full chirality, where a term-cancellation scale
    // would collapse to 0/0).
    auto [f1a, f2a] = edge_rows(c, z_a);
    auto [f1b, f2b] = edge_rows(c, z_b);
    cxd m11 = z_a * f1a, m12 = z_b * f1b;
    cxd m21 = z_a * z_a * f2a, m22 = z_b * z_b * f2b;
    cxd det = m11 * m22 - m12 * m21;
    double r1 = std::hypot(std::abs(m11), std::abs(m12));
    double r2 = std::hypot(std::abs(m21), std::abs(m22));
    return {det, std::abs(det) / (r1 * r2 + 1e-300)};
}

InverseF inverse_F(double phase, int N) {
    if (N < 2) throw std::domain_error("inverse_F: N must be >= 2");
    double s = std::sin(phase), s2 = std::sin(2.0 * phase);
    if (std::abs(s) < denom_tol || std::abs(s2) < denom_tol)
        throw std::domain_error("inverse_F: sin(phase) or sin(2 phase) vanishes");
    InverseF inv;
    inv.n = N;
    inv.off = 1.0 / (2.0 * s);
    inv.diag = -std::cos(phase) / s;
    inv.corner11 = -std::cos(2.0 * phase) / s2;
    inv.corner_nn = cxd(-0.5 * std::cos(phase) / s, 0.5);
    return inv;
}

std::vector<cxd> apply(const InverseF& inv, const std::vector<cxd>& x) {
    if (static_cast<int>(x.size()) != inv.n)
        throw std::invalid_argument("inverse_F apply: size mismatch");
    int n = inv.n;
    std::vector<cxd> y(n);
    y[0] = inv.corner11 * x[0] + inv.off * x[1];
    for (int r = 1; r < n - 1; ++r)
        y[r] = inv.off * (x[r - 1] + x[r + 1]) + inv.diag * x[r];
    y[n - 1] = inv.off * x[n - 2] + inv.corner_nn * x[n - 1];
    return y;
}

std::vector<cxd> assemble_chi(cxd z_a, cxd z_b, cxd A, cxd B, int n_max) {
    std::vector<cxd> chi(n_max);
    cxd pa = 1.0, pb = 1.0;
    for (int n = 0; n < n_max; ++n) {
        pa *= z_a;
        pb *= z_b;
        chi[n] = A * pa + B * pb;
    }
    return chi;
}

double residual_rows(const HoppingCoeffs& c, cxd z_a, cxd z_b, cxd A, cxd B,
                     int n_rows) {
    auto chi = assemble_chi(z_a, z_b, A, B, n_rows + 2);
    double worst = 0.0;
    for (int r = 1; r <= n_rows; ++r) {
        cxd terms[5];
        int nt = 0;
        if (r == 1) {
            terms[nt++] = (c.t0 + c.dt0) * chi[0];
            terms[nt++] = (c.t1 + c.dt1) * chi[1];
            terms[nt++] = c.t2 * chi[2];
        } else if (r == 2) {
            terms[nt++] = (c.t1 + c.dtm1) * chi[0];
            terms[nt++] = c.t0 * chi[1];
            terms[nt++] = c.t1 * chi[2];
            terms[nt++] = c.t2 * chi[3];
        } else {
            terms[nt++] = c.t2 * chi[r - 3];
            terms[nt++] = c.t1 * chi[r - 2];
            terms[nt++] = c.t0 * chi[r - 1];
            terms[nt++] = c.t1 * chi[r];
            terms[nt++] = c.t2 * chi[r + 1];
        }
        cxd sum = 0.0;
        double norm = 0.0;
        for (int i = 0; i < nt; ++i) {
            sum += terms[i];
            norm += std::abs(terms[i]);
        }
        if (norm > 0.0) worst = std::max(worst, std::abs(sum) / norm);
    }
    return worst;
}

}  // namespace wqed
