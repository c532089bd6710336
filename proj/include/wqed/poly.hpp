#pragma once
// Small dense polynomials over complex<double>, ascending coefficient order
// (p[k] multiplies z^k).  Degrees here never exceed ~30, so everything is
// plain O(n^2) vector arithmetic; roots go through an Eigen companion matrix.

#include <complex>
#include <vector>

namespace wqed::poly {

using cxd = std::complex<double>;
using Poly = std::vector<cxd>;

cxd eval(const Poly& p, cxd z);
// sum_k |p_k| r^k -- the natural magnitude scale for relative comparisons at |z| = r
double eval_abs(const Poly& p, double r);

Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, cxd s);
Poly deriv(const Poly& p);

// drop trailing coefficients below rel * max|p_k|
Poly trim(const Poly& p, double rel = 1e-12);
inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

// synthetic division by (z - root); remainder is discarded
Poly deflate(const Poly& p, cxd root);

// all roots via companion-matrix eigenvalues plus a short Newton polish;
// the polish targets |p(z)| < rel_tol * sum_k |p_k| |z|^k
std::vector<cxd> roots(const Poly& p, double rel_tol = 1e-10);

}  // namespace wqed::poly
