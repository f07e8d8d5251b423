#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wander/blaschke.hpp"
#include "wander/innerseq.hpp"
#include "wander/powertower.hpp"

namespace wander {

inline constexpr std::size_t kMaxRootDegree = 64;

// All z in the disc with g(z) = w, with multiplicity, sorted by (re, im).
// Companion-matrix roots of N(z) - w D(z) followed by one Newton step.
std::vector<cplx> preimages(const BlaschkeMap& map, cplx w);

struct OrbitOptions {
  std::size_t point_cap = 1'000'000;
  double dedup_tolerance = 1e-10;
  double reference_radius = 0.9;
};

struct GrandOrbitSample {
  cplx base;
  std::size_t depth = 0;
  std::vector<cplx> points;  // sorted by (re, im)
  // Minimal pairwise hyperbolic distance among points with |z| < reference
  // radius; +infinity with fewer than two such points.
  double min_gap = std::numeric_limits<double>::infinity();
  bool truncated = false;
};

// All w with G_0^j(w) = G_0^j(base) for some j <= depth.
GrandOrbitSample grand_orbit_sample(std::span<const BlaschkeMap> maps, cplx base, std::size_t depth,
                                    const OrbitOptions& opts = {});
GrandOrbitSample grand_orbit_sample(const MapSequence& seq, cplx base, std::size_t depth,
                                    const OrbitOptions& opts = {});

double min_hyperbolic_gap(std::span<const cplx> points, double reference_radius);

enum class Relation { Discrete, Indiscrete, Undetermined };

const char* to_string(Relation r);

struct RelationVerdict {
  Relation verdict = Relation::Undetermined;
  bool structural = false;
  std::string rule;
  std::vector<std::pair<std::size_t, double>> trajectory;  // (depth, min_gap)
  double floor = 0.0;
};

struct DetectorOptions {
  std::vector<std::size_t> depth_schedule{4, 6, 8, 10};
  double floor = 1e-6;
  OrbitOptions orbit;
};

// Heuristic rule on a gap trajectory g_0, g_1, ...: Indiscrete if
// g_i <= g_0 2^{-i} for every i >= 1 or the last gap is below the floor;
// Discrete if every gap is >= floor and g_last >= g_0 / 2; else Undetermined.
Relation classify_gap_trajectory(std::span<const std::pair<std::size_t, double>> trajectory, double floor);

// Sequences with tail information are decided structurally: lambda_n bounded
// below (in particular an isometric tail) gives linearising coordinates and
// a discrete relation. Otherwise the gap heuristic runs on the grand-orbit
// samples.
RelationVerdict discreteness_detect(const MapSequence& seq, cplx base, const DetectorOptions& opts = {});
RelationVerdict discreteness_detect(std::span<const BlaschkeMap> maps, cplx base, const DetectorOptions& opts = {});
// Towers: Indiscrete iff d_n >= 2 infinitely often; explicit degree lists fall
// back to the witness-gap heuristic.
RelationVerdict discreteness_detect(const CoveringTower& tower, const TowerPoint& p, const DetectorOptions& opts = {});

}  // namespace wander
