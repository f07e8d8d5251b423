#include "wander/poly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "wander/errors.hpp"

namespace wander::poly {

Coeffs multiply(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Coeffs subtract(const Coeffs& a, const Coeffs& b) {
  Coeffs out(std::max(a.size(), b.size()), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

Coeffs scale(const Coeffs& a, cplx s) {
  Coeffs out(a);
  for (auto& c : out) c *= s;
  return out;
}

Coeffs derivative(const Coeffs& a) {
  if (a.size() <= 1) return {cplx{0.0, 0.0}};
  Coeffs out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<double>(i);
  return out;
}

cplx evaluate(const Coeffs& a, cplx z) {
  cplx acc{0.0, 0.0};
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Coeffs trimmed(const Coeffs& a, double rel_tol) {
  double biggest = 0.0;
  for (const auto& c : a) biggest = std::max(biggest, std::abs(c));
  Coeffs out(a);
  while (!out.empty() && std::abs(out.back()) <= rel_tol * biggest) out.pop_back();
  return out;
}

std::vector<cplx> roots(const Coeffs& a) {
  Coeffs p = trimmed(a);
  if (p.size() <= 1) return {};
  const std::size_t n = p.size() - 1;
  if (n == 1) return {-p[0] / p[1]};

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < n; ++i) companion(i, n - 1) = -p[i] / p[n];

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw RootFindingError("companion eigensolver failed for degree " + std::to_string(n));
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
  return out;
}

}  // namespace wander::poly
