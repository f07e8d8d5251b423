#pragma once

#include <complex>

#include "wander/blaschke.hpp"

// Hyperbolic geometry of the disc and of the round annulus / punctured disc,
// normalised to curvature -1 (disc density 2 / (1 - |z|^2)).
namespace wander::hypgeo {

// Round annulus {exp(-2 pi mu) < |z| < 1} of conformal modulus mu.
class StdAnnulus {
 public:
  explicit StdAnnulus(double modulus);

  double modulus() const { return modulus_; }
  // 2 pi mu, the width of the logarithmic strip model; exact for huge mu.
  double log_inner_inverse() const;
  double inner_radius() const;
  double core_radius() const;

 private:
  double modulus_;
};

// {0 < |z| < 1} with its cusp metric |dz| / (|z| log(1/|z|)).
struct StdPuncturedDisc {
  // Horocyclic coordinate p of the circle |z| = s: the horocycle has
  // length e^p = 2 pi / log(1/s).
  static double horocycle_coordinate(double s);
  // Radius of the horocycle of length e^p.
  static double radius_at(double p);
  // Radius of the boundary of the standard cusp collar (horocycle length 2).
  static double collar_radius();
};

enum class CollarKind { Geodesic, Cusp };

struct CollarSpec {
  CollarKind kind;
  double core_length;  // geodesic case only
  double width;        // hyperbolic width around the core (infinite for cusps)

  static CollarSpec geodesic(double core_length);
  static CollarSpec cusp();
};

double hyp_dist(cplx z, cplx w);
double hyp_distortion(const BlaschkeMap& map, cplx z);

// eta(l) = 1/2 log((cosh(l/2) + 1) / (cosh(l/2) - 1)) = log coth(l/4).
double collar_width(double core_length);

// pi / mu.
double annulus_core_length(const StdAnnulus& a);

// Hyperbolic density of the round annulus at radius s.
double annulus_density(const StdAnnulus& a, double s);

// Distance from the circle |z| = s to the core geodesic.
double annulus_core_distance(const StdAnnulus& a, double s);
double annulus_core_distance_log(const StdAnnulus& a, double log_s);

// Radius of the circle at distance d from the core; outer = true picks the
// side towards |z| = 1.
double annulus_radius_at_core_distance(const StdAnnulus& a, double d, bool outer);

// 1/2 e^{-d}.
double collar_inj_lower_bound(double d);

// Injectivity radius at |z| = s. The shortest essential loop through the
// point is the projection of the segment to its deck-translate, so
// sinh(inj) = sinh(l/2) cosh(d_core).
double annulus_injectivity(const StdAnnulus& a, double s);
// Same, with the point given by log|z| (for annuli whose inner radius
// underflows).
double annulus_injectivity_log(const StdAnnulus& a, double log_s);

// Distance from |z| = s to the boundary of the standard collar around the
// core, eta(l) - d_core (negative outside the collar).
double annulus_collar_boundary_distance(const StdAnnulus& a, double s);

// 1/2 e^p for p <= log 2; throws OutsideCollarError otherwise.
double cusp_injectivity(double p_coord);

}  // namespace wander::hypgeo
