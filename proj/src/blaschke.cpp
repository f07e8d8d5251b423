#include "wander/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wander/errors.hpp"
#include "wander/poly.hpp"

namespace wander {

namespace {

void require_in_disc(cplx z, const char* what) {
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream msg;
    msg << what << ": point " << z << " is not in the open unit disc";
    throw DomainError(msg.str());
  }
}

cplx factor(cplx z, cplx a) { return (z - a) / (1.0 - std::conj(a) * z); }

}  // namespace

BlaschkeMap::BlaschkeMap(std::vector<cplx> zeros, cplx rotation, double scale)
    : zeros_(std::move(zeros)), rotation_(rotation), scale_(scale) {
  if (zeros_.empty()) throw std::invalid_argument("a Blaschke product needs at least one zero");
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    if (!(std::abs(zeros_[i]) < 1.0 - kZeroMargin)) {
      std::ostringstream msg;
      msg << "zero " << i << " = " << zeros_[i] << " has modulus " << std::abs(zeros_[i])
          << ", must be < 1";
      throw std::invalid_argument(msg.str());
    }
  }
  if (!(std::abs(std::abs(rotation_) - 1.0) < 1e-12))
    throw std::invalid_argument("rotation must have modulus 1");
  rotation_ /= std::abs(rotation_);
  if (!(scale_ > 0.0 && scale_ <= 1.0)) throw std::invalid_argument("scale must lie in (0, 1]");
}

BlaschkeMap BlaschkeMap::rotation_by(double angle) { return BlaschkeMap({cplx{0.0, 0.0}}, std::polar(1.0, angle)); }

BlaschkeMap BlaschkeMap::linear(cplx factor) {
  double modulus = std::abs(factor);
  if (!(modulus > 0.0 && modulus <= 1.0)) throw std::invalid_argument("linear factor must satisfy 0 < |c| <= 1");
  return BlaschkeMap({cplx{0.0, 0.0}}, factor / modulus, modulus);
}

bool BlaschkeMap::fixes_origin() const {
  return std::any_of(zeros_.begin(), zeros_.end(), [](cplx a) { return a == cplx{0.0, 0.0}; });
}

cplx BlaschkeMap::eval_unchecked(cplx z) const {
  cplx acc = scale_ * rotation_;
  for (const auto& a : zeros_) acc *= factor(z, a);
  return acc;
}

cplx BlaschkeMap::eval(cplx z) const {
  require_in_disc(z, "BlaschkeMap::eval");
  return eval_unchecked(z);
}

cplx BlaschkeMap::eval_boundary(double theta) const { return eval_unchecked(std::polar(1.0, theta)); }

cplx BlaschkeMap::derivative(cplx z) const {
  require_in_disc(z, "BlaschkeMap::derivative");
  const std::size_t d = zeros_.size();

  // Product rule with prefix/suffix products, so zeros of g need no special case.
  std::vector<cplx> values(d), slopes(d);
  for (std::size_t k = 0; k < d; ++k) {
    const cplx a = zeros_[k];
    const cplx den = 1.0 - std::conj(a) * z;
    values[k] = (z - a) / den;
    slopes[k] = (1.0 - std::norm(a)) / (den * den);
  }
  std::vector<cplx> suffix(d + 1, cplx{1.0, 0.0});
  for (std::size_t k = d; k-- > 0;) suffix[k] = suffix[k + 1] * values[k];
  cplx prefix{1.0, 0.0};
  cplx sum{0.0, 0.0};
  for (std::size_t k = 0; k < d; ++k) {
    sum += prefix * slopes[k] * suffix[k + 1];
    prefix *= values[k];
  }
  return scale_ * rotation_ * sum;
}

cplx BlaschkeMap::quotient(cplx z) const {
  auto origin = std::find(zeros_.begin(), zeros_.end(), cplx{0.0, 0.0});
  if (origin == zeros_.end()) throw std::invalid_argument("quotient: map does not fix the origin");
  cplx acc = scale_ * rotation_;
  for (auto it = zeros_.begin(); it != zeros_.end(); ++it)
    if (it != origin) acc *= factor(z, *it);
  return acc;
}

double BlaschkeMap::lambda() const {
  std::size_t at_origin = 0;
  double product = scale_;
  for (const auto& a : zeros_) {
    if (a == cplx{0.0, 0.0})
      ++at_origin;
    else
      product *= std::abs(a);
  }
  if (at_origin == 0) throw std::invalid_argument("lambda: map does not fix the origin");
  return at_origin == 1 ? product : 0.0;
}

std::vector<cplx> BlaschkeMap::numerator() const {
  poly::Coeffs n{scale_ * rotation_};
  for (const auto& a : zeros_) n = poly::multiply(n, {-a, cplx{1.0, 0.0}});
  return n;
}

std::vector<cplx> BlaschkeMap::denominator() const {
  poly::Coeffs d{cplx{1.0, 0.0}};
  for (const auto& a : zeros_) d = poly::multiply(d, {cplx{1.0, 0.0}, -std::conj(a)});
  return d;
}

std::vector<cplx> BlaschkeMap::critical_points() const {
  if (zeros_.size() <= 1) return {};
  const poly::Coeffs n = numerator();
  const poly::Coeffs d = denominator();
  const poly::Coeffs w = poly::subtract(poly::multiply(poly::derivative(n), d), poly::multiply(n, poly::derivative(d)));
  const poly::Coeffs dw = poly::derivative(w);

  std::vector<cplx> out;
  for (cplx c : poly::roots(w)) {
    const cplx slope = poly::evaluate(dw, c);
    if (std::abs(slope) > 0.0) {
      const cplx polished = c - poly::evaluate(w, c) / slope;
      if (std::isfinite(polished.real()) && std::isfinite(polished.imag()) && std::abs(polished - c) < 1e-6) c = polished;
    }
    if (std::abs(c) < 1.0) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return out;
}

BlaschkeMap normalize_rotation(const BlaschkeMap& map) {
  if (!map.fixes_origin()) throw std::invalid_argument("normalize_rotation: map does not fix the origin");
  const cplx slope = map.quotient(cplx{0.0, 0.0});
  if (std::abs(slope) == 0.0 || map.lambda() == 0.0) throw DegenerateError("normalize_rotation: the origin is critical");
  const cplx target = map.rotation() * std::conj(slope) / std::abs(slope);
  return BlaschkeMap(map.zeros(), target, map.scale());
}

}  // namespace wander
