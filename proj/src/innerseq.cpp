#include "wander/innerseq.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>

#include "wander/errors.hpp"

namespace wander {

struct MapSequence::State {
  SequenceRule rule = SequenceRule::Explicit;
  std::vector<BlaschkeMap> head;
  std::vector<BlaschkeMap> period;
  double c = 0.0;
  double alpha = 0.0;
  FamilyShape shape = FamilyShape::Blaschke;
  std::optional<TailMeta> tail;
  std::vector<std::string> notes;

  // Materialised deficit-family terms; appended under the unique lock only.
  mutable std::shared_mutex mutex;
  mutable std::deque<BlaschkeMap> cache;
};

namespace {

std::vector<BlaschkeMap> ingest_maps(std::vector<BlaschkeMap> maps, const char* label, std::size_t& renormalised) {
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const BlaschkeMap& g = maps[k];
    if (!g.fixes_origin()) {
      std::ostringstream msg;
      msg << label << " term " << k << " does not fix the origin";
      throw std::invalid_argument(msg.str());
    }
    if (g.lambda() == 0.0) {
      std::ostringstream msg;
      msg << label << " term " << k << ": the origin is critical (lambda = 0)";
      throw DegenerateError(msg.str());
    }
    BlaschkeMap normalised = normalize_rotation(g);
    if (std::abs(normalised.rotation() - g.rotation()) > 1e-15) ++renormalised;
    maps[k] = std::move(normalised);
  }
  return maps;
}

void note_normalisation(std::vector<std::string>& notes, std::size_t renormalised) {
  if (renormalised > 0) {
    std::ostringstream msg;
    msg << "rotation-normalised " << renormalised << " term(s) so that g_n'(0) = lambda_n > 0";
    notes.push_back(msg.str());
  }
}

double family_lambda(double c, double alpha, std::size_t n) {
  return 1.0 - c / std::pow(static_cast<double>(n) + 2.0, alpha);
}

}  // namespace

MapSequence MapSequence::explicit_list(std::vector<BlaschkeMap> maps) {
  auto state = std::make_shared<State>();
  std::size_t renormalised = 0;
  state->rule = SequenceRule::Explicit;
  state->head = ingest_maps(std::move(maps), "explicit", renormalised);
  note_normalisation(state->notes, renormalised);
  return MapSequence(std::move(state));
}

MapSequence MapSequence::periodic(std::vector<BlaschkeMap> head, std::vector<BlaschkeMap> period) {
  if (period.empty()) throw std::invalid_argument("periodic sequence needs a nonempty period");
  auto state = std::make_shared<State>();
  std::size_t renormalised = 0;
  state->rule = SequenceRule::Periodic;
  state->head = ingest_maps(std::move(head), "head", renormalised);
  state->period = ingest_maps(std::move(period), "period", renormalised);
  note_normalisation(state->notes, renormalised);

  TailMeta meta;
  meta.eventually_isometric = std::all_of(state->period.begin(), state->period.end(),
                                          [](const BlaschkeMap& g) { return g.lambda() == 1.0; });
  meta.deficit_diverges = !meta.eventually_isometric;
  meta.lambda_infimum = 1.0;
  for (const auto& g : state->head) meta.lambda_infimum = std::min(meta.lambda_infimum, g.lambda());
  for (const auto& g : state->period) meta.lambda_infimum = std::min(meta.lambda_infimum, g.lambda());
  state->tail = meta;
  return MapSequence(std::move(state));
}

MapSequence MapSequence::constant(const BlaschkeMap& map) { return periodic({}, {map}); }

MapSequence MapSequence::rotation_tail(std::vector<BlaschkeMap> head, double angle) {
  return periodic(std::move(head), {BlaschkeMap::rotation_by(angle)});
}

MapSequence MapSequence::deficit_family(double c, double alpha, FamilyShape shape) {
  if (!(c > 0.0) || !(alpha >= 0.0) || !(c / std::pow(2.0, alpha) < 1.0))
    throw std::invalid_argument("deficit family needs c > 0, alpha >= 0 and c / 2^alpha < 1");
  auto state = std::make_shared<State>();
  state->rule = SequenceRule::DeficitFamily;
  state->c = c;
  state->alpha = alpha;
  state->shape = shape;
  TailMeta meta;
  meta.deficit_diverges = alpha <= 1.0;
  meta.eventually_isometric = false;
  meta.lambda_infimum = family_lambda(c, alpha, 0);
  state->tail = meta;
  return MapSequence(std::move(state));
}

SequenceRule MapSequence::rule() const { return state_->rule; }

std::optional<std::size_t> MapSequence::length() const {
  if (state_->rule == SequenceRule::Explicit) return state_->head.size();
  return std::nullopt;
}

bool MapSequence::has_term(std::size_t n) const {
  auto len = length();
  return !len || n < *len;
}

const BlaschkeMap& MapSequence::term(std::size_t n) const {
  const State& s = *state_;
  switch (s.rule) {
    case SequenceRule::Explicit:
      if (n >= s.head.size()) {
        std::ostringstream msg;
        msg << "term " << n << " requested from an explicit list of " << s.head.size() << " maps";
        throw std::out_of_range(msg.str());
      }
      return s.head[n];
    case SequenceRule::Periodic:
      if (n < s.head.size()) return s.head[n];
      return s.period[(n - s.head.size()) % s.period.size()];
    case SequenceRule::DeficitFamily:
      break;
  }

  {
    std::shared_lock lock(s.mutex);
    if (n < s.cache.size()) return s.cache[n];
  }
  std::unique_lock lock(s.mutex);
  while (s.cache.size() <= n) {
    const double lambda = family_lambda(s.c, s.alpha, s.cache.size());
    if (s.shape == FamilyShape::Linear) {
      s.cache.push_back(BlaschkeMap::linear(lambda));
    } else if (lambda < 1.0 - kZeroMargin) {
      s.cache.push_back(BlaschkeMap({cplx{0.0, 0.0}, cplx{-lambda, 0.0}}));
    } else {
      // The zero -lambda_n is within the margin of the circle; the term
      // differs from the identity by less than the margin on compact sets.
      s.cache.push_back(BlaschkeMap());
    }
  }
  return s.cache[n];
}

const std::optional<TailMeta>& MapSequence::tail_meta() const { return state_->tail; }

std::optional<double> MapSequence::closed_form_lambda(std::size_t n) const {
  if (state_->rule != SequenceRule::DeficitFamily) return std::nullopt;
  return family_lambda(state_->c, state_->alpha, n);
}

const std::vector<std::string>& MapSequence::notes() const { return state_->notes; }
const std::vector<BlaschkeMap>& MapSequence::head() const { return state_->head; }
const std::vector<BlaschkeMap>& MapSequence::period() const { return state_->period; }
double MapSequence::family_c() const { return state_->c; }
double MapSequence::family_alpha() const { return state_->alpha; }
FamilyShape MapSequence::family_shape() const { return state_->shape; }

CompositionBlock::CompositionBlock(MapSequence seq, std::size_t n, std::size_t m, double log_lambda)
    : seq_(std::move(seq)), n_(n), m_(m), log_lambda_(log_lambda) {}

cplx CompositionBlock::operator()(cplx z) const {
  for (std::size_t k = n_; k < m_; ++k) z = seq_.term(k).eval(z);
  return z;
}

double log_lambda_sum(const MapSequence& seq, std::size_t n, std::size_t m) {
  if (m < n) throw std::invalid_argument("log_lambda_sum: m < n");
  double acc = 0.0;
  for (std::size_t k = n; k < m; ++k) {
    const double lambda = seq.term(k).lambda();
    if (lambda == 0.0) throw DegenerateError("lambda_" + std::to_string(k) + " = 0: the origin is critical");
    acc += std::log(lambda);
  }
  return acc;
}

CompositionBlock compose_block(const MapSequence& seq, std::size_t n, std::size_t m) {
  if (m < n) throw std::invalid_argument("compose_block: m < n");
  if (m > n && !seq.has_term(m - 1)) throw std::out_of_range("compose_block: m beyond the sequence");
  return CompositionBlock(seq, n, m, log_lambda_sum(seq, n, m));
}

double lambda_at(const MapSequence& seq, std::size_t n) {
  const double lambda = seq.term(n).lambda();
  if (lambda == 0.0) throw DegenerateError("lambda_at: the origin is critical");
  return lambda;
}

const char* to_string(InternalVerdict v) {
  switch (v) {
    case InternalVerdict::Contracting: return "Contracting";
    case InternalVerdict::SemiContracting: return "SemiContracting";
    case InternalVerdict::EventuallyIsometric: return "EventuallyIsometric";
    case InternalVerdict::Undetermined: return "Undetermined";
  }
  return "?";
}

ClassificationReport classify(const MapSequence& seq, std::size_t horizon) {
  ClassificationReport report;
  report.tail_meta = seq.tail_meta();
  std::size_t limit = horizon;
  if (auto len = seq.length()) limit = std::min(limit, *len);
  report.horizon = limit;

  double sum = 0.0;
  std::size_t checkpoint = 10;
  for (std::size_t k = 0; k < limit; ++k) {
    sum += 1.0 - seq.term(k).lambda();
    if (k + 1 == checkpoint) {
      report.partial_sums.emplace_back(k + 1, sum);
      checkpoint *= 10;
    }
  }
  if (report.partial_sums.empty() || report.partial_sums.back().first != limit) report.partial_sums.emplace_back(limit, sum);

  if (const auto& meta = report.tail_meta) {
    if (meta->eventually_isometric)
      report.verdict = InternalVerdict::EventuallyIsometric;
    else if (meta->deficit_diverges)
      report.verdict = InternalVerdict::Contracting;
    else
      report.verdict = InternalVerdict::SemiContracting;
  }
  return report;
}

ProductLimit product_limit(const MapSequence& seq, std::size_t n, std::size_t horizon) {
  ProductLimit out;
  const auto& meta = seq.tail_meta();
  if (!meta) {
    std::size_t end = *seq.length();
    end = std::max(n, std::min(end, std::max(horizon, n)));
    out.value = std::exp(log_lambda_sum(seq, n, end));
    out.error_bound = std::numeric_limits<double>::infinity();
    return out;
  }

  out.certified = true;
  if (meta->deficit_diverges) return out;

  if (seq.rule() == SequenceRule::Periodic) {
    // The period is isometric, so only the head contributes.
    const std::size_t end = std::max(n, seq.head().size());
    const double log_value = log_lambda_sum(seq, n, end);
    out.value = std::exp(log_value);
    out.error_bound = 4.0 * std::numeric_limits<double>::epsilon() * out.value * static_cast<double>(end - n + 1);
    return out;
  }

  // Deficit family with alpha > 1: explicit sum up to N, then bracket the tail
  //   -sum x_k / (1 - x_k) <= sum log(1 - x_k) <= -sum x_k,   x_k = c / (k + 2)^alpha,
  // with sum_{k >= N} x_k between the integrals of c t^-alpha from N + 2 and N + 1.
  const double c = seq.family_c();
  const double alpha = seq.family_alpha();
  const std::size_t N = std::max(horizon, n + 1);
  double head = 0.0;
  for (std::size_t k = n; k < N; ++k) head += std::log1p(-c / std::pow(static_cast<double>(k) + 2.0, alpha));

  auto tail_integral = [&](double from) { return c / ((alpha - 1.0) * std::pow(from, alpha - 1.0)); };
  const double x_first = c / std::pow(static_cast<double>(N) + 2.0, alpha);
  const double upper = -tail_integral(static_cast<double>(N) + 2.0);
  const double lower = -tail_integral(static_cast<double>(N) + 1.0) / (1.0 - x_first);
  const double estimate = -tail_integral(static_cast<double>(N) + 1.5);

  out.value = std::exp(head + estimate);
  const double spread = std::max(upper - estimate, estimate - lower);
  const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(N - n);
  out.error_bound = out.value * std::expm1(spread + rounding);
  return out;
}

double schwarz_lower_bound(double lambda, double r) { return r * (lambda - r) / (1.0 - lambda * r); }

bool schwarz_lower_bound_check(const BlaschkeMap& map, cplx z) {
  const double r = std::abs(z);
  return std::abs(map.eval(z)) >= schwarz_lower_bound(map.lambda(), r) - 1e-12;
}

}  // namespace wander
