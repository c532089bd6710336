#pragma once
// Exact tight-binding reduction of the two-excitation problem: hopping
// coefficients at fixed omega, the bulk dispersion function, the two edge rows,
// and the closed-form banded inverse of the chiral kernel.

#include <utility>
#include <vector>

#include "wqed/model.hpp"

namespace wqed {

// Bulk couplings t_r (t_{-r} = t_r) of the relative-coordinate problem plus the
// corrections the r = 1, 2 rows acquire from the hard-core boundary.  All six
// are affine in omega and real for real omega.
struct HoppingCoeffs {
    cxd t2, t1, t0;
    cxd dt0, dt1, dtm1;
};

// Throws std::domain_error (naming the vanishing denominator) at singular K.
HoppingCoeffs coeffs(const ModelParams& p, const PairMomentum& k, cxd omega);

// D(z) = t2 (z^2 + z^-2) + t1 (z + 1/z) + t0
cxd dispersion_value(const HoppingCoeffs& c, cxd z);

// D is affine in omega, D = A(z) + omega B(z); this returns the unique omega
// for which z solves the bulk dispersion.  Throws on |B(z)| ~ 0.
cxd omega_of_z(const ModelParams& p, const PairMomentum& k, cxd z);

// Vieta partner in w = z + 1/z: the quadratic t2 (w^2 - 2) + t1 w + t0 has root
// sum -t1/t2, so the second reciprocal pair satisfies w_b = -t1/t2 - w_a.
// Throws on t2 ~ 0 (the omega = 0 degeneracy, handled by callers).
cxd partner_w(const HoppingCoeffs& c, cxd w_a);

// The r = 1, 2 edge rows evaluated on a pure z^n profile, scaled by z and z^2:
//   f1(z) = (t0 + dt0) + (t1 + dt1) z + t2 z^2
//   f2(z) = (t1 + dtm1)/z + t0 + t1 z + t2 z^2
std::pair<cxd, cxd> edge_rows(const HoppingCoeffs& c, cxd z);

// Determinant of the 2x2 edge system on the two-root ansatz, up to a z_a z_b
// factor:  z_b f1(z_a) f2(z_b) - z_a f1(z_b) f2(z_a).
cxd boundary_det(const HoppingCoeffs& c, cxd z_a, cxd z_b);

// Same determinant scaled by the product of the row norms of the 2x2 system.
// Both vanishing modes register as small: column-wise vanishing at full
// chirality and generic cross-cancellation.
std::pair<cxd, double> boundary_det_scaled(const HoppingCoeffs& c, cxd z_a, cxd z_b);

// Closed-form tridiagonal inverse of the dense one-way kernel; only the two
// corner entries differ from the bulk pattern, and only (N,N) is complex.
struct InverseF {
    int n = 0;
    double off = 0;       // 1/(2 sin phase)
    double diag = 0;      // -cot(phase)
    double corner11 = 0;  // -cot(2 phase)
    cxd corner_nn;        // i/2 - cot(phase)/2
};
// Throws std::domain_error when sin(phase) or sin(2 phase) vanishes or N < 2.
InverseF inverse_F(double phase, int N);
// y = F^{-1} x as an O(N) banded apply
std::vector<cxd> apply(const InverseF& inv, const std::vector<cxd>& x);

// chi_n = A z_a^n + B z_b^n for n = 1 .. n_max
std::vector<cxd> assemble_chi(cxd z_a, cxd z_b, cxd A, cxd B, int n_max);

// max over rows r = 1..n_rows of |row residual| / (sum of |row terms|), with the
// boundary-corrected coefficients on r = 1, 2 and bulk coefficients beyond.
double residual_rows(const HoppingCoeffs& c, cxd z_a, cxd z_b, cxd A, cxd B,
                     int n_rows = 8);

}  // namespace wqed
