#include "wqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace wqed {

ModelParams ModelParams::from_xi(double phi, double xi, double gamma_1d) {
    if (!(phi > 0.0 && phi < pi))
        throw std::invalid_argument("ModelParams: phi must lie in (0, pi)");
    if (!(gamma_1d > 0.0))
        throw std::invalid_argument("ModelParams: gamma_1d must be positive");
    if (!(xi >= 0.0))
        throw std::invalid_argument("ModelParams: xi must be >= 0");
    ModelParams p;
    p.phi = phi;
    p.gamma_1d = gamma_1d;
    p.xi = xi;
    p.gamma_r = 2.0 * gamma_1d / (1.0 + xi);
    p.gamma_l = 2.0 * gamma_1d * xi / (1.0 + xi);
    return p;
}

ModelParams ModelParams::from_rates(double phi, double gamma_r, double gamma_l) {
    if (!(phi > 0.0 && phi < pi))
        throw std::invalid_argument("ModelParams: phi must lie in (0, pi)");
    if (!(gamma_r > 0.0) || gamma_l < 0.0)
        throw std::invalid_argument("ModelParams: need gamma_r > 0 and gamma_l >= 0");
    ModelParams p;
    p.phi = phi;
    p.gamma_1d = 0.5 * (gamma_r + gamma_l);
    p.xi = gamma_l / gamma_r;
    p.gamma_r = gamma_r;
    p.gamma_l = gamma_l;
    return p;
}

PairMomentum::PairMomentum(const ModelParams& p, double K_) {
    if (!(K_ > 0.0 && K_ < two_pi))
        throw std::invalid_argument("PairMomentum: K must lie in (0, 2 pi)");
    K = K_;
    phi_r = p.phi - K / 2.0;
    phi_l = p.phi + K / 2.0;
}

std::vector<double> singular_set(double phi) {
    auto wrap = [](double x) {
        double y = std::fmod(x, two_pi);
        if (y < 0.0) y += two_pi;
        return y;
    };
    std::set<double> s;
    for (double v : {2.0 * phi, two_pi - 2.0 * phi, wrap(2.0 * phi + pi),
                     wrap(two_pi - 2.0 * phi + pi)})
        if (v > 0.0 && v < two_pi) s.insert(v);
    return {s.begin(), s.end()};
}

double singular_distance(double phi, double K) {
    double best = two_pi;
    for (double s : singular_set(phi)) {
        double d = std::abs(K - s);
        best = std::min(best, std::min(d, two_pi - d));
    }
    return best;
}

const char* to_string(BandLabel label) {
    switch (label) {
        case BandLabel::UU: return "UU";
        case BandLabel::UL: return "UL";
        case BandLabel::LL: return "LL";
    }
    return "??";
}

double polariton_dispersion(const ModelParams& p, double q, double pole_tol) {
    double q1 = (p.phi - q) / 2.0, q2 = (p.phi + q) / 2.0;
    if (std::abs(std::sin(q1)) < pole_tol || std::abs(std::sin(q2)) < pole_tol)
        throw std::domain_error("polariton_dispersion: q at a cotangent pole");
    return 0.5 * p.gamma_r * std::cos(q1) / std::sin(q1) +
           0.5 * p.gamma_l * std::cos(q2) / std::sin(q2);
}

ContinuumBands continuum_bands(const ModelParams& p, const PairMomentum& k,
                               int q_samples) {
    if (q_samples < 1000)
        throw std::invalid_argument("continuum_bands: need >= 1000 q samples");
    auto wrap = [](double x) {
        double y = std::fmod(x, two_pi);
        if (y < 0.0) y += two_pi;
        return y;
    };
    // omega(q) diverges where q or K - q hits a dispersion pole; those four
    // points also delimit the constant-label stretches, so cut the q circle
    // there and take [min, max] per stretch.
    std::set<double> cut_set{wrap(p.phi), wrap(two_pi - p.phi),
                             wrap(k.K - p.phi), wrap(k.K + p.phi)};
    std::vector<double> cuts(cut_set.begin(), cut_set.end());

    std::map<BandLabel, std::vector<std::pair<double, double>>> runs;
    for (size_t i = 0; i < cuts.size(); ++i) {
        double lo_q = cuts[i];
        double hi_q = cuts[(i + 1) % cuts.size()];
        double span = wrap(hi_q - lo_q);
        if (span == 0.0) span = two_pi;
        double eps = 1e-9 * span;

        // band of each constituent decided by which side of the poles it falls on
        double qm = wrap(lo_q + span / 2.0);
        double q2m = wrap(k.K - qm);
        bool b1_upper = !(qm > p.phi && qm < two_pi - p.phi);
        bool b2_upper = !(q2m > p.phi && q2m < two_pi - p.phi);
        BandLabel lab = (b1_upper && b2_upper) ? BandLabel::UU
                        : (!b1_upper && !b2_upper) ? BandLabel::LL
                        : BandLabel::UL;

        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (int j = 0; j < q_samples; ++j) {
            double q = lo_q + eps + (span - 2.0 * eps) * j / (q_samples - 1);
            double om = 0.5 * (polariton_dispersion(p, wrap(q)) +
                               polariton_dispersion(p, wrap(k.K - q)));
            if (first) { lo = hi = om; first = false; }
            lo = std::min(lo, om);
            hi = std::max(hi, om);
        }
        runs[lab].emplace_back(lo, hi);
    }

    ContinuumBands out;
    out.K = k.K;
    for (auto& [lab, v] : runs) {
        std::sort(v.begin(), v.end());
        std::vector<std::pair<double, double>> merged{v.front()};
        for (size_t i = 1; i < v.size(); ++i) {
            if (v[i].first <= merged.back().second)
                merged.back().second = std::max(merged.back().second, v[i].second);
            else
                merged.push_back(v[i]);
        }
        for (auto& [lo, hi] : merged) out.bands.push_back({lo, hi, lab});
    }
    return out;
}

EnergyRegion classify_energy(const ContinuumBands& bands, cxd omega) {
    EnergyRegion region;
    double x = omega.real();
    for (const auto& b : bands.bands) {
        if (x >= b.lo - 1e-9 && x <= b.hi + 1e-9) {
            if (std::find(region.labels.begin(), region.labels.end(), b.label) ==
                region.labels.end())
                region.labels.push_back(b.label);
        }
    }
    std::sort(region.labels.begin(), region.labels.end());
    return region;
}

std::string to_string(const EnergyRegion& region) {
    if (region.in_gap()) return "gap";
    std::string s;
    for (const auto& lab : region.labels) {
        if (!s.empty()) s += '+';
        s += to_string(lab);
    }
    return s;
}

}  // namespace wqed
