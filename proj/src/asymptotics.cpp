#include "wqed/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wqed {

cxd omega_k0(const ModelParams& p, double K, int sign) {
    if (K == 0.0) throw std::invalid_argument("omega_k0: K must be nonzero");
    double s = sign >= 0 ? 1.0 : -1.0;
    cxd top(p.gamma_l - p.gamma_r, s * 2.0 * std::sqrt(p.gamma_r * p.gamma_l));
    return top / (2.0 * K) + (p.gamma_1d / 2.0) / std::tan(p.phi);
}

std::pair<cxd, cxd> discriminant_omega(const ModelParams& p) {
    double re = (p.gamma_r - p.gamma_l) / 2.0;
    double im = std::sqrt(p.gamma_r * p.gamma_l);
    return {cxd(re, im), cxd(re, -im)};
}

namespace {

struct EdgeFrame {
    double mu;       // cos of the bound-root phase
    double g_own;    // rate of the cot term
    double g_other;  // rate of the self-energy
    double ph_own, ph_other;
};

EdgeFrame frame(const ModelParams& p, const PairMomentum& k, EdgeDirection dir) {
    if (dir == EdgeDirection::fwd)
        return {std::cos(k.phi_r), p.gamma_r, p.gamma_l, k.phi_r, k.phi_l};
    return {std::cos(k.phi_l), p.gamma_l, p.gamma_r, k.phi_l, k.phi_r};
}

}  // namespace

cxd omega_edge(const ModelParams& p, const PairMomentum& k, EdgeDirection dir) {
    EdgeFrame f = frame(p, k, dir);
    cxd beta = std::polar(1.0, f.ph_other);
    cxd sig = cxd(0.0, -f.g_other) * (1.0 - std::polar(1.0, 2.0 * f.ph_other) *
                                                std::cos(2.0 * f.ph_own)) /
              (2.0 * std::pow(1.0 - f.mu * beta, 2));
    return f.g_own * std::cos(f.ph_own) / std::sin(f.ph_own) + sig;
}

cxd sigma_numeric(const ModelParams& p, const PairMomentum& k, int n_terms,
                  EdgeDirection dir) {
    EdgeFrame f = frame(p, k, dir);
    if (std::abs(f.mu) >= 1.0)
        throw std::domain_error("sigma_numeric: |cos phase| >= 1, sum does not converge");
    if (n_terms < 2) throw std::invalid_argument("sigma_numeric: n_terms too small");
    cxd beta = std::polar(1.0, f.ph_other);
    // chi_n = mu^{n-1}: same state as mu^n up to normalization but with a finite
    // mu -> 0 limit, where only the n = n' = 1 term survives
    std::vector<cxd> bpow(2 * n_terms + 1);
    bpow[0] = 1.0;
    for (int s = 1; s <= 2 * n_terms; ++s) bpow[s] = bpow[s - 1] * beta;
    std::vector<double> mpow(n_terms);
    mpow[0] = 1.0;
    for (int n = 1; n < n_terms; ++n) mpow[n] = mpow[n - 1] * f.mu;
    cxd val = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        for (int m = 0; m < n_terms; ++m) {
            double w = mpow[n] * mpow[m];
            val += (bpow[std::abs(n - m)] + bpow[n + m + 2]) * w;
        }
    }
    double norm = 0.0;
    for (int n = 0; n < n_terms; ++n) norm += mpow[n] * mpow[n];
    return cxd(0.0, -1.0) * f.g_other * val / (2.0 * norm);
}

cxd sigma_closed(const ModelParams& p, const PairMomentum& k, EdgeDirection dir) {
    EdgeFrame f = frame(p, k, dir);
    cxd beta = std::polar(1.0, f.ph_other);
    double mu = f.mu;
    // geometric sums with the overall mu^2 cancelled against the normalization,
    // keeping the mu -> 0 limit -i g (1 + beta^2) / 2 finite
    cxd s1 = (1.0 + mu * beta) / (1.0 - mu * beta);
    cxd s2 = beta * beta * (1.0 - mu * mu) / std::pow(1.0 - beta * mu, 2);
    return cxd(0.0, -f.g_other) * (s1 + s2) / 2.0;
}

AsymptoteEval asymptote_eval(const ModelParams& p, double K) {
    PairMomentum k(p, K);
    AsymptoteEval ev;
    ev.K = K;
    double k0 = K <= pi ? K : K - two_pi;  // the diverging pair lives at both ends
    ev.omega_plus = omega_k0(p, k0, +1);
    ev.omega_minus = omega_k0(p, k0, -1);
    ev.omega_fwd = omega_edge(p, k, EdgeDirection::fwd);
    ev.omega_bwd = omega_edge(p, k, EdgeDirection::bwd);
    return ev;
}

}  // namespace wqed
