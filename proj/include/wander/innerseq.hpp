#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wander/blaschke.hpp"

namespace wander {

// What is known about the tail of (lambda_n), which no finite prefix decides.
struct TailMeta {
  bool deficit_diverges = false;       // sum (1 - lambda_n) = infinity
  bool eventually_isometric = false;   // lambda_n = 1 for all large n
  double lambda_infimum = 0.0;         // inf_n lambda_n

  friend bool operator==(const TailMeta&, const TailMeta&) = default;
};

enum class SequenceRule { Explicit, Periodic, DeficitFamily };

// Shape of the terms of a deficit family.
enum class FamilyShape {
  Blaschke,  // g_n(z) = z (z + lambda_n) / (1 + lambda_n z)
  Linear,    // g_n(z) = lambda_n z
};

// A rule-generated sequence (g_n) of origin-fixing disc self-maps. Terms are
// rotation-normalised (g_n'(0) = lambda_n > 0) on ingestion. Copies share the
// term cache.
class MapSequence {
 public:
  // Finite list; no tail information.
  static MapSequence explicit_list(std::vector<BlaschkeMap> maps);
  // head followed by the period repeated forever.
  static MapSequence periodic(std::vector<BlaschkeMap> head, std::vector<BlaschkeMap> period);
  static MapSequence constant(const BlaschkeMap& map);
  // head followed by rotations by `angle` (the identity once normalised).
  static MapSequence rotation_tail(std::vector<BlaschkeMap> head, double angle);
  // lambda_n = 1 - c / (n + 2)^alpha with c / 2^alpha < 1, alpha >= 0.
  static MapSequence deficit_family(double c, double alpha, FamilyShape shape = FamilyShape::Blaschke);

  SequenceRule rule() const;
  // Number of terms for explicit lists.
  std::optional<std::size_t> length() const;
  bool has_term(std::size_t n) const;

  // Throws std::out_of_range past the end of a finite list.
  const BlaschkeMap& term(std::size_t n) const;
  double lambda(std::size_t n) const { return term(n).lambda(); }

  const std::optional<TailMeta>& tail_meta() const;
  // Closed-form lambda_n for deficit families.
  std::optional<double> closed_form_lambda(std::size_t n) const;
  // Notes recorded while ingesting (e.g. rotation normalisation).
  const std::vector<std::string>& notes() const;

  // Parameters of the rule, for serialisation.
  const std::vector<BlaschkeMap>& head() const;
  const std::vector<BlaschkeMap>& period() const;
  double family_c() const;
  double family_alpha() const;
  FamilyShape family_shape() const;

 private:
  struct State;
  explicit MapSequence(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;
};

// G_n^m = g_{m-1} o ... o g_n together with log Lambda_n^m.
class CompositionBlock {
 public:
  CompositionBlock(MapSequence seq, std::size_t n, std::size_t m, double log_lambda);

  std::size_t start() const { return n_; }
  std::size_t end() const { return m_; }
  double log_lambda() const { return log_lambda_; }
  cplx operator()(cplx z) const;

 private:
  MapSequence seq_;
  std::size_t n_;
  std::size_t m_;
  double log_lambda_;
};

// Throws DegenerateError if some lambda_k = 0, std::out_of_range if m runs
// past a finite list, std::invalid_argument if m < n.
CompositionBlock compose_block(const MapSequence& seq, std::size_t n, std::size_t m);

// Sum_{k=n}^{m-1} log lambda_k.
double log_lambda_sum(const MapSequence& seq, std::size_t n, std::size_t m);

double lambda_at(const MapSequence& seq, std::size_t n);

enum class InternalVerdict { Contracting, SemiContracting, EventuallyIsometric, Undetermined };

const char* to_string(InternalVerdict v);

struct ClassificationReport {
  InternalVerdict verdict = InternalVerdict::Undetermined;
  std::optional<TailMeta> tail_meta;
  std::size_t horizon = 0;
  // Partial sums of (1 - lambda_k) at k = 10, 100, ... and at the horizon.
  std::vector<std::pair<std::size_t, double>> partial_sums;
};

inline constexpr std::size_t kDefaultHorizon = 10000;

ClassificationReport classify(const MapSequence& seq, std::size_t horizon = kDefaultHorizon);

struct ProductLimit {
  double value = 0.0;
  // |true - value| <= error_bound when certified.
  double error_bound = 0.0;
  bool certified = false;
};

// Lambda_n = prod_{k >= n} lambda_k.
ProductLimit product_limit(const MapSequence& seq, std::size_t n, std::size_t horizon = kDefaultHorizon);

// h_lambda(r) = r (lambda - r) / (1 - lambda r): the lower bound for |g(z)|
// at |z| = r over self-maps of the disc with g(0) = 0, |g'(0)| = lambda.
double schwarz_lower_bound(double lambda, double r);

bool schwarz_lower_bound_check(const BlaschkeMap& map, cplx z);

}  // namespace wander
