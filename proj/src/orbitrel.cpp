#include "wander/orbitrel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wander/errors.hpp"
#include "wander/hypgeo.hpp"
#include "wander/poly.hpp"

namespace wander {

namespace {

bool by_real_then_imag(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

// Sorted, with points closer than tol (Euclidean) merged into the first.
std::vector<cplx> deduplicate(std::vector<cplx> points, double tol) {
  std::sort(points.begin(), points.end(), by_real_then_imag);
  std::vector<cplx> kept;
  kept.reserve(points.size());
  for (const auto& p : points) {
    bool duplicate = false;
    for (auto it = kept.rbegin(); it != kept.rend() && p.real() - it->real() <= tol; ++it) {
      if (std::abs(p - *it) <= tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(p);
  }
  return kept;
}

}  // namespace

std::vector<cplx> preimages(const BlaschkeMap& map, cplx w) {
  if (!(std::abs(w) < 1.0)) throw DomainError("preimages: target outside the unit disc");
  if (map.degree() > kMaxRootDegree) throw std::invalid_argument("preimages: degree above the root-finding cap");

  const poly::Coeffs target = poly::subtract(map.numerator(), poly::scale(map.denominator(), w));
  std::vector<cplx> out;
  double worst = 0.0;
  for (cplx z : poly::roots(target)) {
    if (std::abs(z) < 1.0) {
      const cplx slope = map.derivative(z);
      const cplx residual = map.eval(z) - w;
      if (std::abs(slope) > 1e-8) {
        const cplx polished = z - residual / slope;
        if (std::abs(polished) < 1.0 && std::abs(map.eval(polished) - w) <= std::abs(residual)) z = polished;
      }
    } else if (map.is_inner()) {
      // Inner maps are proper: every preimage of a disc point is in the disc.
      if (std::abs(z) < 1.0 + 1e-9) {
        z /= std::abs(z) * (1.0 + 1e-15);
      } else {
        std::ostringstream msg;
        msg << "preimages: root " << z << " of a degree-" << map.degree() << " inner map left the disc";
        throw RootFindingError(msg.str());
      }
    } else {
      continue;
    }
    worst = std::max(worst, std::abs(map.eval(z) - w));
    out.push_back(z);
  }
  if (worst >= 1e-9) {
    std::ostringstream msg;
    msg << "preimages: residual " << worst << " after polishing (degree " << map.degree() << ", target " << w
        << "); the fiber is ill-conditioned";
    throw RootFindingError(msg.str());
  }
  std::sort(out.begin(), out.end(), by_real_then_imag);
  return out;
}

double min_hyperbolic_gap(std::span<const cplx> points, double reference_radius) {
  std::vector<cplx> inside;
  for (const auto& p : points)
    if (std::abs(p) < reference_radius) inside.push_back(p);
  std::sort(inside.begin(), inside.end(), by_real_then_imag);

  // d_hyp(z, w) >= |z - w| >= |Re z - Re w| prunes the sweep.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inside.size(); ++i) {
    for (std::size_t j = i + 1; j < inside.size() && inside[j].real() - inside[i].real() < best; ++j)
      best = std::min(best, hypgeo::hyp_dist(inside[i], inside[j]));
  }
  return best;
}

GrandOrbitSample grand_orbit_sample(std::span<const BlaschkeMap> maps, cplx base, std::size_t depth,
                                    const OrbitOptions& opts) {
  if (!(std::abs(base) < 1.0)) throw DomainError("grand_orbit_sample: base outside the unit disc");
  if (depth > maps.size()) throw std::out_of_range("grand_orbit_sample: depth exceeds the available maps");

  GrandOrbitSample sample;
  sample.base = base;
  sample.depth = depth;

  std::vector<cplx> collected{base};
  cplx forward = base;
  for (std::size_t j = 1; j <= depth && !sample.truncated; ++j) {
    forward = maps[j - 1].eval(forward);
    std::vector<cplx> layer{forward};
    for (std::size_t i = j; i-- > 0;) {
      std::vector<cplx> pulled;
      for (const auto& x : layer) {
        auto pre = preimages(maps[i], x);
        pulled.insert(pulled.end(), pre.begin(), pre.end());
        if (pulled.size() > opts.point_cap) break;
      }
      if (pulled.size() > opts.point_cap) {
        sample.truncated = true;
        break;
      }
      layer = deduplicate(std::move(pulled), opts.dedup_tolerance);
    }
    if (!sample.truncated) collected.insert(collected.end(), layer.begin(), layer.end());
  }

  sample.points = deduplicate(std::move(collected), opts.dedup_tolerance);
  sample.min_gap = min_hyperbolic_gap(sample.points, opts.reference_radius);
  return sample;
}

GrandOrbitSample grand_orbit_sample(const MapSequence& seq, cplx base, std::size_t depth, const OrbitOptions& opts) {
  std::vector<BlaschkeMap> maps;
  maps.reserve(depth);
  for (std::size_t k = 0; k < depth; ++k) maps.push_back(seq.term(k));
  return grand_orbit_sample(maps, base, depth, opts);
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::Discrete: return "Discrete";
    case Relation::Indiscrete: return "Indiscrete";
    case Relation::Undetermined: return "Undetermined";
  }
  return "?";
}

Relation classify_gap_trajectory(std::span<const std::pair<std::size_t, double>> trajectory, double floor) {
  if (trajectory.size() < 2) return Relation::Undetermined;
  const double first = trajectory.front().second;
  const double last = trajectory.back().second;

  if (last < floor) return Relation::Indiscrete;
  if (std::isfinite(first)) {
    bool halving = true;
    for (std::size_t i = 1; i < trajectory.size(); ++i)
      halving = halving && trajectory[i].second <= first * std::ldexp(1.0, -static_cast<int>(i)) * (1.0 + 1e-9);
    if (halving) return Relation::Indiscrete;
  }
  const bool above = std::all_of(trajectory.begin(), trajectory.end(), [&](const auto& e) { return e.second >= floor; });
  if (above && last >= 0.5 * first) return Relation::Discrete;
  return Relation::Undetermined;
}

namespace {

RelationVerdict heuristic_verdict(std::span<const BlaschkeMap> maps, cplx base, const DetectorOptions& opts) {
  RelationVerdict out;
  out.floor = opts.floor;
  out.rule = "min_gap trajectory";
  for (std::size_t depth : opts.depth_schedule) {
    if (depth > maps.size()) break;
    const auto sample = grand_orbit_sample(maps, base, depth, opts.orbit);
    if (sample.truncated) break;
    out.trajectory.emplace_back(depth, sample.min_gap);
  }
  if (out.trajectory.size() < opts.depth_schedule.size()) {
    out.rule = "min_gap trajectory (schedule exceeds the available terms)";
    return out;
  }
  out.verdict = classify_gap_trajectory(out.trajectory, opts.floor);
  return out;
}

}  // namespace

RelationVerdict discreteness_detect(const MapSequence& seq, cplx base, const DetectorOptions& opts) {
  if (const auto& meta = seq.tail_meta()) {
    RelationVerdict out;
    out.structural = true;
    out.floor = opts.floor;
    out.verdict = Relation::Discrete;
    out.rule = meta->eventually_isometric
                   ? "isometric tail: the maps are injective on all forward images"
                   : "lambda_n bounded below: linearising coordinates separate grand orbits";
    return out;
  }
  std::vector<BlaschkeMap> maps;
  const std::size_t deepest = opts.depth_schedule.empty() ? 0 : opts.depth_schedule.back();
  for (std::size_t k = 0; k < deepest && seq.has_term(k); ++k) maps.push_back(seq.term(k));
  return heuristic_verdict(maps, base, opts);
}

RelationVerdict discreteness_detect(std::span<const BlaschkeMap> maps, cplx base, const DetectorOptions& opts) {
  return heuristic_verdict(maps, base, opts);
}

RelationVerdict discreteness_detect(const CoveringTower& tower, const TowerPoint& p, const DetectorOptions& opts) {
  RelationVerdict out;
  out.floor = opts.floor;
  if (auto expands = tower.degrees().expands_infinitely_often()) {
    out.structural = true;
    out.verdict = *expands ? Relation::Indiscrete : Relation::Discrete;
    out.rule = *expands ? "d_n >= 2 infinitely often: D_n -> infinity" : "eventually degree one: injective tail";
    return out;
  }
  out.rule = "witness gap trajectory";
  const auto length = tower.degrees().length().value_or(0);
  for (std::size_t depth : opts.depth_schedule) {
    if (depth > length) break;
    out.trajectory.emplace_back(depth, indiscreteness_witness(tower, p, depth));
  }
  if (out.trajectory.size() == opts.depth_schedule.size()) out.verdict = classify_gap_trajectory(out.trajectory, opts.floor);
  return out;
}

}  // namespace wander
