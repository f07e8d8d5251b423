#pragma once

#include <complex>
#include <vector>

namespace wander::poly {

using cplx = std::complex<double>;

// Coefficients in ascending order: c[0] + c[1] z + ... + c[n] z^n.
using Coeffs = std::vector<cplx>;

Coeffs multiply(const Coeffs& a, const Coeffs& b);
Coeffs subtract(const Coeffs& a, const Coeffs& b);
Coeffs scale(const Coeffs& a, cplx s);
Coeffs derivative(const Coeffs& a);
cplx evaluate(const Coeffs& a, cplx z);

// Drops high-order coefficients below rel_tol * max|c|.
Coeffs trimmed(const Coeffs& a, double rel_tol = 1e-14);

// All roots (with multiplicity) as eigenvalues of the companion matrix.
// Throws RootFindingError if the eigensolver fails.
std::vector<cplx> roots(const Coeffs& a);

}  // namespace wander::poly
