#include "wander/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wander/errors.hpp"
#include "wander/parallel.hpp"

namespace wander {

double univalence_radius(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("univalence_radius: c must lie in (0, 1]");
  if (c == 1.0) return 1.0;
  const double critical_free = std::tanh(std::atanh(c) / 2.0);
  return schwarz_lower_bound(c, critical_free);
}

namespace {

// One step of E_n^{k+1} = E_n^k * q_k(G) / lambda_k, G <- G q_k(G), where
// q_k(w) = g_k(w) / w. Underflow of G is harmless: q_k(0) = lambda_k.
struct KoenigsState {
  cplx E;
  cplx G;

  void advance(const BlaschkeMap& g) {
    const cplx q = g.quotient(G);
    E *= q / g.lambda();
    G *= q;
  }
};

}  // namespace

cplx koenigs_E(const MapSequence& seq, std::size_t n, std::size_t m, cplx z) {
  if (m < n) throw std::invalid_argument("koenigs_E: m < n");
  if (!(std::abs(z) < 1.0)) throw DomainError("koenigs_E: point outside the unit disc");
  KoenigsState state{z, z};
  for (std::size_t k = n; k < m; ++k) {
    const BlaschkeMap& g = seq.term(k);
    if (g.lambda() == 0.0) throw DegenerateError("koenigs_E: lambda_" + std::to_string(k) + " = 0");
    state.advance(g);
  }
  return state.E;
}

PhiSamples phi_samples(const MapSequence& seq, std::size_t n, std::span<const cplx> points,
                       const LinearizeOptions& opts) {
  for (const auto& z : points)
    if (!(std::abs(z) < 1.0)) throw DomainError("phi_samples: point outside the unit disc");

  std::vector<KoenigsState> states(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) states[i] = {points[i], points[i]};

  PhiSamples out;
  out.cauchy_gap = std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  std::vector<cplx> previous(points.size());
  while (true) {
    const std::size_t next = steps == 0 ? 1 : 2 * steps;
    if (next > opts.max_m || !seq.has_term(n + next - 1)) break;

    for (std::size_t i = 0; i < states.size(); ++i) previous[i] = states[i].E;
    parallel_for(states.size(), [&](std::size_t i) {
      for (std::size_t k = n + steps; k < n + next; ++k) states[i].advance(seq.term(k));
    });
    steps = next;

    double gap = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) gap = std::max(gap, std::abs(states[i].E - previous[i]));
    out.cauchy_gap = gap;
    if (gap < opts.tolerance) {
      out.converged = true;
      break;
    }
  }

  out.m_used = n + steps;
  out.values.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out.values[i] = states[i].E;
  return out;
}

double certified_radius(const MapSequence& seq) {
  const auto report = classify(seq, 1);
  if (report.verdict == InternalVerdict::Undetermined || !seq.tail_meta())
    throw HypothesisError("linearisation needs a classified sequence (no tail information)");
  const double c = seq.tail_meta()->lambda_infimum;
  if (!(c > 0.0)) throw HypothesisError("linearisation needs inf lambda_n > 0");
  if (report.verdict == InternalVerdict::Contracting) return univalence_radius(c);
  return product_limit(seq, 1).value;
}

LinearizationResult koenigs_limit(const MapSequence& seq, std::size_t n, std::span<const cplx> grid,
                                  const LinearizeOptions& opts) {
  LinearizationResult result;
  result.n = n;
  result.grid.assign(grid.begin(), grid.end());
  result.regime = classify(seq, 1).verdict;
  result.univalence_radius = certified_radius(seq);

  const auto outside = std::count_if(grid.begin(), grid.end(),
                                     [&](cplx z) { return !(std::abs(z) < result.univalence_radius); });
  if (outside > 0) {
    std::ostringstream msg;
    msg << outside << " grid point(s) lie outside the certified disc of radius " << result.univalence_radius;
    result.warnings.push_back(msg.str());
  }

  const PhiSamples phi = phi_samples(seq, n, grid, opts);
  result.phi_values = phi.values;
  result.m_used = phi.m_used;
  result.cauchy_gap = phi.cauchy_gap;

  const BlaschkeMap& g = seq.term(n);
  std::vector<cplx> images(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) images[i] = g.eval(grid[i]);
  const PhiSamples next = phi_samples(seq, n + 1, images, opts);

  const double lambda = g.lambda();
  result.residuals.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.residuals[i] = std::abs(next.values[i] - lambda * phi.values[i]);
    result.residual_sup = std::max(result.residual_sup, result.residuals[i]);
  }
  result.status =
      phi.converged && next.converged ? LinearizationStatus::Converged : LinearizationStatus::NonConvergent;
  if (result.status == LinearizationStatus::NonConvergent) {
    std::ostringstream msg;
    msg << "Cauchy gap " << std::max(phi.cauchy_gap, next.cauchy_gap) << " above tolerance " << opts.tolerance
        << " at m - n = " << opts.max_m;
    result.warnings.push_back(msg.str());
  }
  return result;
}

ExtendedValue extend_by_dynamics(const MapSequence& seq, std::size_t n, cplx z, const LinearizeOptions& opts,
                                 std::size_t extra_steps, std::size_t horizon) {
  if (classify(seq, 1).verdict != InternalVerdict::Contracting)
    throw HypothesisError("extend_by_dynamics: the sequence is not contracting");
  if (!(std::abs(z) < 1.0)) throw DomainError("extend_by_dynamics: point outside the unit disc");
  const double radius = certified_radius(seq);

  cplx w = z;
  double log_lambda = 0.0;
  std::size_t m = 0;
  auto step = [&] {
    if (m >= horizon) throw NonConvergentError("extend_by_dynamics: orbit did not enter the univalence disc");
    const BlaschkeMap& g = seq.term(n + m);
    w = g.eval(w);
    log_lambda += std::log(g.lambda());
    ++m;
  };
  while (!(std::abs(w) < radius)) step();
  for (std::size_t i = 0; i < extra_steps; ++i) step();

  const cplx point[] = {w};
  const PhiSamples phi = phi_samples(seq, n + m, point, opts);
  if (!phi.converged) throw NonConvergentError("extend_by_dynamics: phi did not converge at the landing point");
  return {phi.values[0] * std::exp(-log_lambda), m};
}

double commutation_residual(const MapSequence& seq, std::size_t n, std::span<const cplx> grid,
                            const LinearizeOptions& opts) {
  const PhiSamples phi = phi_samples(seq, n, grid, opts);
  const BlaschkeMap& g = seq.term(n);
  std::vector<cplx> images(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) images[i] = g.eval(grid[i]);
  const PhiSamples next = phi_samples(seq, n + 1, images, opts);

  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    sup = std::max(sup, std::abs(next.values[i] - g.lambda() * phi.values[i]));
  return sup;
}

const char* to_string(SurfaceKind k) {
  return k == SurfaceKind::PlaneMinusSet ? "PlaneMinusSet" : "DiscMinusSet";
}

QuotientSurfaceModel quotient_surface_model(const MapSequence& seq, const QuotientOptions& opts) {
  const auto verdict = classify(seq, 1).verdict;
  if (verdict == InternalVerdict::Undetermined)
    throw HypothesisError("quotient_surface_model: classification is Undetermined");
  certified_radius(seq);  // checks inf lambda_n > 0

  QuotientSurfaceModel model;
  model.kind = verdict == InternalVerdict::Contracting ? SurfaceKind::PlaneMinusSet : SurfaceKind::DiscMinusSet;
  model.countable_flag = verdict == InternalVerdict::Contracting;
  model.levels_scanned = opts.levels;

  std::vector<cplx> candidates;
  double log_lambda = 0.0;
  for (std::size_t k = 0; k < opts.levels; ++k) {
    const BlaschkeMap& g = seq.term(k);
    const auto critical = g.critical_points();
    if (!critical.empty()) {
      const double rescale = std::exp(-log_lambda);
      if (verdict == InternalVerdict::Contracting) {
        for (const auto& c : critical) candidates.push_back(extend_by_dynamics(seq, k, c, opts.linearize).value * rescale);
      } else {
        const PhiSamples phi = phi_samples(seq, k, critical, opts.linearize);
        model.max_cauchy_gap = std::max(model.max_cauchy_gap, phi.cauchy_gap);
        for (const auto& v : phi.values) candidates.push_back(v * rescale);
      }
    }
    log_lambda += std::log(g.lambda());
  }

  for (const auto& p : candidates) {
    const bool seen = std::any_of(model.marked_points.begin(), model.marked_points.end(),
                                  [&](cplx q) { return std::abs(p - q) < opts.merge_tolerance; });
    if (!seen) model.marked_points.push_back(p);
  }
  std::sort(model.marked_points.begin(), model.marked_points.end(),
            [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return model;
}

}  // namespace wander
