#include "wander/hypgeo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wander/errors.hpp"

namespace wander::hypgeo {

using std::numbers::pi;

namespace {

void require_in_disc(cplx z) {
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream msg;
    msg << "point " << z << " is not in the open unit disc";
    throw DomainError(msg.str());
  }
}

// log|z| measured from the inner boundary, in (0, h) with h = 2 pi mu.
double strip_coordinate(const StdAnnulus& a, double log_s) {
  const double h = a.log_inner_inverse();
  const double x = log_s + h;
  if (!(x > 0.0 && log_s < 0.0)) {
    std::ostringstream msg;
    msg << "log radius " << log_s << " outside the annulus of modulus " << a.modulus();
    throw DomainError(msg.str());
  }
  return x;
}

}  // namespace

StdAnnulus::StdAnnulus(double modulus) : modulus_(modulus) {
  if (!(modulus > 0.0 && std::isfinite(modulus))) throw DomainError("annulus modulus must be positive and finite");
}

double StdAnnulus::log_inner_inverse() const { return 2.0 * pi * modulus_; }
double StdAnnulus::inner_radius() const { return std::exp(-2.0 * pi * modulus_); }
double StdAnnulus::core_radius() const { return std::exp(-pi * modulus_); }

double StdPuncturedDisc::horocycle_coordinate(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("radius outside the punctured disc");
  return std::log(2.0 * pi / -std::log(s));
}

double StdPuncturedDisc::radius_at(double p) { return std::exp(-2.0 * pi * std::exp(-p)); }

double StdPuncturedDisc::collar_radius() { return radius_at(std::log(2.0)); }

CollarSpec CollarSpec::geodesic(double core_length) {
  return {CollarKind::Geodesic, core_length, collar_width(core_length)};
}

CollarSpec CollarSpec::cusp() { return {CollarKind::Cusp, 0.0, std::numeric_limits<double>::infinity()}; }

double hyp_dist(cplx z, cplx w) {
  require_in_disc(z);
  require_in_disc(w);
  const double ratio = std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
  return 2.0 * std::atanh(ratio);
}

double hyp_distortion(const BlaschkeMap& map, cplx z) {
  require_in_disc(z);
  const cplx value = map.eval(z);
  return std::abs(map.derivative(z)) * (1.0 - std::norm(z)) / (1.0 - std::norm(value));
}

double collar_width(double core_length) {
  if (!(core_length > 0.0)) throw DomainError("collar_width: core length must be positive");
  return std::log(1.0 / std::tanh(core_length / 4.0));
}

double annulus_core_length(const StdAnnulus& a) { return pi / a.modulus(); }

double annulus_density(const StdAnnulus& a, double s) {
  if (!(s > 0.0)) throw DomainError("annulus_density: radius must be positive");
  const double h = a.log_inner_inverse();
  const double x = strip_coordinate(a, std::log(s));
  return pi / (h * s * std::sin(pi * x / h));
}

double annulus_core_distance_log(const StdAnnulus& a, double log_s) {
  const double h = a.log_inner_inverse();
  const double x = strip_coordinate(a, log_s);
  return std::abs(std::log(std::tan(pi * x / (2.0 * h))));
}

double annulus_core_distance(const StdAnnulus& a, double s) {
  if (!(s > 0.0)) throw DomainError("annulus_core_distance: radius must be positive");
  return annulus_core_distance_log(a, std::log(s));
}

double annulus_radius_at_core_distance(const StdAnnulus& a, double d, bool outer) {
  if (!(d >= 0.0)) throw DomainError("distance must be nonnegative");
  const double h = a.log_inner_inverse();
  const double x = 2.0 * h / pi * std::atan(std::exp(outer ? d : -d));
  return std::exp(x - h);
}

double collar_inj_lower_bound(double d) { return 0.5 * std::exp(-d); }

double annulus_injectivity_log(const StdAnnulus& a, double log_s) {
  const double half_core = 0.5 * annulus_core_length(a);
  const double d = annulus_core_distance_log(a, log_s);
  if (half_core > 350.0 || d > 350.0) {
    // asinh(x) = log(2x) + O(x^-2) once sinh(l/2) cosh(d) is astronomically large.
    const double log_sinh = half_core + std::log1p(-std::exp(-2.0 * half_core)) - std::log(2.0);
    const double log_cosh = d + std::log1p(std::exp(-2.0 * d)) - std::log(2.0);
    const double log_x = log_sinh + log_cosh;
    if (log_x > 20.0) return std::log(2.0) + log_x;
  }
  return std::asinh(std::sinh(half_core) * std::cosh(d));
}

double annulus_injectivity(const StdAnnulus& a, double s) {
  if (!(s > 0.0)) throw DomainError("annulus_injectivity: radius must be positive");
  return annulus_injectivity_log(a, std::log(s));
}

double annulus_collar_boundary_distance(const StdAnnulus& a, double s) {
  return collar_width(annulus_core_length(a)) - annulus_core_distance(a, s);
}

double cusp_injectivity(double p_coord) {
  if (p_coord > std::log(2.0)) {
    std::ostringstream msg;
    msg << "cusp coordinate " << p_coord << " lies outside the standard collar (p <= log 2)";
    throw OutsideCollarError(msg.str());
  }
  return 0.5 * std::exp(p_coord);
}

}  // namespace wander::hypgeo
