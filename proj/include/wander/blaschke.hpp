#pragma once

#include <complex>
#include <vector>

namespace wander {

using cplx = std::complex<double>;

// Zeros must satisfy |a| < 1 - kZeroMargin.
inline constexpr double kZeroMargin = 1e-12;

// A finite Blaschke product
//
//     g(z) = s * u * prod_k (z - a_k) / (1 - conj(a_k) z)
//
// with zeros a_k in the open disc, a unimodular rotation u and a scale
// s in (0, 1]. With s = 1 this is an inner function; s < 1 is only used for
// the linear Schwarz maps z -> c z, which the linearisation tests need as
// exactly solvable sequences.
class BlaschkeMap {
 public:
  BlaschkeMap() : zeros_{cplx{0.0, 0.0}} {}  // identity
  // Needs at least one zero; zero-free products are unimodular constants.
  explicit BlaschkeMap(std::vector<cplx> zeros, cplx rotation = 1.0, double scale = 1.0);

  static BlaschkeMap identity() { return {}; }
  static BlaschkeMap rotation_by(double angle);
  // z -> c z with 0 < |c| <= 1.
  static BlaschkeMap linear(cplx factor);

  const std::vector<cplx>& zeros() const { return zeros_; }
  cplx rotation() const { return rotation_; }
  double scale() const { return scale_; }
  std::size_t degree() const { return zeros_.size(); }
  bool is_inner() const { return scale_ == 1.0; }
  bool fixes_origin() const;

  // Throws DomainError unless |z| < 1.
  cplx eval(cplx z) const;
  cplx derivative(cplx z) const;
  // Boundary value at exp(i theta); modulus 1 for inner maps.
  cplx eval_boundary(double theta) const;
  // g(z) / z for maps fixing the origin, computed by dropping one zero at 0;
  // equals g'(0) at z = 0.
  cplx quotient(cplx z) const;

  // |g'(0)| for origin-fixing maps: s * prod |a| over the nonzero zeros
  // (0 if the origin is a multiple zero).
  double lambda() const;

  // Critical points inside the open disc, with multiplicity.
  std::vector<cplx> critical_points() const;

  // Numerator/denominator coefficients (ascending): g = N / D.
  std::vector<cplx> numerator() const;
  std::vector<cplx> denominator() const;

  friend bool operator==(const BlaschkeMap&, const BlaschkeMap&) = default;

 private:
  cplx eval_unchecked(cplx z) const;

  std::vector<cplx> zeros_;
  cplx rotation_{1.0, 0.0};
  double scale_ = 1.0;
};

// Post-composes an origin-fixing map with the rotation making g'(0) > 0.
// Throws DegenerateError if g'(0) = 0 and std::invalid_argument if g(0) != 0.
BlaschkeMap normalize_rotation(const BlaschkeMap& map);

}  // namespace wander
