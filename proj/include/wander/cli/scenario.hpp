#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wander/innerseq.hpp"
#include "wander/powertower.hpp"
#include "wander/teichreport.hpp"

namespace wander::cli {

inline constexpr int kSchemaVersion = 1;

// Scenario parse or validation failure; the message names the offending
// field (and line/column for syntax errors).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MapSpec {
  std::vector<cplx> zeros{cplx{0.0, 0.0}};
  cplx rotation{1.0, 0.0};
  double scale = 1.0;

  BlaschkeMap build() const { return BlaschkeMap(zeros, rotation, scale); }
  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

// "constant" scenario files ingest as a one-map periodic rule.
enum class SequenceRuleSpec { Explicit, Periodic, RotationTail, DeficitFamily };

struct SequenceSpec {
  SequenceRuleSpec rule = SequenceRuleSpec::Explicit;
  std::vector<MapSpec> maps;    // explicit list, or the head of a periodic / rotation-tail rule
  std::vector<MapSpec> period;  // periodic only
  double angle = 0.0;           // rotation tail
  double c = 0.0;               // deficit family
  double alpha = 0.0;
  FamilyShape shape = FamilyShape::Blaschke;

  MapSequence build() const;
  friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;
};

struct TowerSpec {
  TowerKind kind = TowerKind::Annulus;
  double mu0 = 0.0;
  DegreeRule degrees;
  // Rotation angles alpha_n of the perturbed maps e^{i alpha_n} z^{d_n}.
  std::vector<double> perturbation;
  std::optional<cplx> point;  // level-0 base point; default on the core circle

  CoveringTower build() const;
  cplx base_point() const;
  friend bool operator==(const TowerSpec&, const TowerSpec&) = default;
};

struct GridSpec {
  double radius = 0.1;
  std::size_t count = 64;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Options {
  std::size_t horizon = kDefaultHorizon;
  double tolerance = 1e-10;
  std::size_t max_m = std::size_t{1} << 16;
  GridSpec grid;
  std::uint64_t seed = 1;
  std::size_t index = 0;  // n for linearisation
  cplx base{0.2, 0.0};    // grand-orbit base point
  std::size_t depth = 6;
  std::vector<std::size_t> depth_schedule{4, 6, 8, 10};
  double floor = 1e-6;
  std::size_t levels = 16;  // tower levels / quotient levels
  bool infinitely_many_components = false;

  friend bool operator==(const Options&, const Options&) = default;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::optional<SequenceSpec> inner_sequence;
  std::optional<TowerSpec> covering_tower;
  std::optional<std::vector<ComponentReport>> component_list;
  Options options;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(const std::string& text);
Scenario ingest(const std::filesystem::path& path);
nlohmann::json serialize(const Scenario& scenario);

// Applies a configuration document (tolerance, max_m, horizon, grid.radius,
// grid.count, seed; nested "grid" objects and dotted keys both accepted).
void apply_config(Options& options, const nlohmann::json& config);
nlohmann::json options_to_json(const Options& options);

// Deterministic sample grid of `count` points in the disc of radius `radius`
// (Vogel spiral).
std::vector<cplx> spiral_grid(double radius, std::size_t count);

// FNV-1a 64-bit hash of the canonical serialisation, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

}  // namespace wander::cli
