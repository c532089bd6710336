#include "wqed/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wqed::poly {

cxd eval(const Poly& p, cxd z) {
    cxd acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double eval_abs(const Poly& p, double r) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

Poly add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Poly sub(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly scale(const Poly& a, cxd s) {
    Poly out = a;
    for (auto& c : out) c *= s;
    return out;
}

Poly deriv(const Poly& p) {
    if (p.size() <= 1) return {cxd(0.0)};
    Poly out(p.size() - 1);
    for (size_t k = 1; k < p.size(); ++k) out[k - 1] = double(k) * p[k];
    return out;
}

Poly trim(const Poly& p, double rel) {
    double m = 0.0;
    for (const auto& c : p) m = std::max(m, std::abs(c));
    if (m == 0.0) return {cxd(0.0)};
    size_t last = 0;
    bool any = false;
    for (size_t i = 0; i < p.size(); ++i)
        if (std::abs(p[i]) > rel * m) { last = i; any = true; }
    if (!any) return {cxd(0.0)};
    return Poly(p.begin(), p.begin() + last + 1);
}

Poly deflate(const Poly& p, cxd root) {
    if (p.size() < 2) throw std::invalid_argument("deflate: degree < 1");
    Poly q(p.size() - 1);
    cxd carry = p.back();
    for (int k = static_cast<int>(p.size()) - 2; k >= 0; --k) {
        q[k] = carry;
        carry = p[k] + root * carry;
    }
    return q;
}

std::vector<cxd> roots(const Poly& p_in, double rel_tol) {
    Poly p = trim(p_in, 1e-14);
    int deg = degree(p);
    if (deg < 1) throw std::invalid_argument("roots: degree < 1");

    std::vector<cxd> out;
    if (deg == 1) {
        out = {-p[0] / p[1]};
    } else {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[i] / p[deg];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*vectors=*/false);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("roots: companion eigenvalue iteration failed");
        out.assign(es.eigenvalues().data(), es.eigenvalues().data() + deg);
    }

    Poly pd = deriv(p);
    for (auto& z : out) {
        for (int it = 0; it < 8; ++it) {
            if (std::abs(eval(p, z)) < rel_tol * eval_abs(p, std::abs(z))) break;
            cxd g = eval(pd, z);
            if (std::abs(g) == 0.0) break;
            cxd step = eval(p, z) / g;
            z -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
        }
    }
    return out;
}

}  // namespace wqed::poly
