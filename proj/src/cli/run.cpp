#include "wander/cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <random>

#include "wander/errors.hpp"
#include "wander/hypgeo.hpp"
#include "wander/linearize.hpp"
#include "wander/orbitrel.hpp"
#include "wander/parallel.hpp"
#include "wander/powertower.hpp"
#include "wander/teichreport.hpp"

namespace wander::cli {

using nlohmann::json;

namespace {

struct Outcome {
  json results;
  int exit_code = kExitOk;
  std::vector<PlotTable> tables;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// JSON has no infinity; unbounded quantities are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const MapSequence& need_sequence(const Scenario& s, const std::string& command,
                                 std::optional<MapSequence>& storage) {
  if (!s.inner_sequence) throw std::invalid_argument("command " + command + " needs an inner_sequence payload");
  if (!storage) storage = s.inner_sequence->build();
  return *storage;
}

const TowerSpec& need_tower(const Scenario& s, const std::string& command) {
  if (!s.covering_tower) throw std::invalid_argument("command " + command + " needs a covering_tower payload");
  return *s.covering_tower;
}

LinearizeOptions linearize_options(const Options& o) { return {o.tolerance, o.max_m}; }

DetectorOptions detector_options(const Options& o) {
  DetectorOptions d;
  d.depth_schedule = o.depth_schedule;
  d.floor = o.floor;
  return d;
}

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

cplx random_in_disc(std::mt19937_64& rng, double radius) {
  const double r = radius * std::sqrt(uniform01(rng));
  return std::polar(r, 2.0 * std::numbers::pi * uniform01(rng));
}

json relation_json(const RelationVerdict& v) {
  json trajectory = json::array();
  for (const auto& [depth, gap] : v.trajectory) trajectory.push_back(json::array({depth, finite_or_null(gap)}));
  return json{{"verdict", to_string(v.verdict)},
              {"structural", v.structural},
              {"rule", v.rule},
              {"floor", v.floor},
              {"trajectory", trajectory}};
}

Outcome cmd_classify(const MapSequence& seq, const Options& o) {
  const ClassificationReport report = classify(seq, o.horizon);
  json sums = json::array();
  for (const auto& [k, v] : report.partial_sums) sums.push_back(json::array({k, v}));
  json meta = nullptr;
  if (report.tail_meta) {
    meta = json{{"deficit_diverges", report.tail_meta->deficit_diverges},
                {"eventually_isometric", report.tail_meta->eventually_isometric},
                {"lambda_infimum", report.tail_meta->lambda_infimum}};
  }
  Outcome out;
  out.results = json{{"verdict", to_string(report.verdict)},
                     {"tail_meta", meta},
                     {"horizon", report.horizon},
                     {"partial_deficit_sums", sums},
                     {"notes", seq.notes()}};
  if (report.verdict == InternalVerdict::Undetermined) {
    out.exit_code = kExitUndetermined;
  } else {
    const ProductLimit lim = product_limit(seq, 0, o.horizon);
    out.results["lambda_product_0"] =
        json{{"value", lim.value}, {"error_bound", finite_or_null(lim.error_bound)}, {"certified", lim.certified}};
  }
  return out;
}

Outcome undetermined_regime(const ClassificationReport& report, const std::string& what) {
  Outcome out;
  out.results = json{{"verdict", to_string(report.verdict)},
                     {"reason", what + " needs tail information that a finite list does not provide"}};
  out.exit_code = kExitUndetermined;
  return out;
}

Outcome cmd_linearize(const MapSequence& seq, const Options& o) {
  const ClassificationReport report = classify(seq, o.horizon);
  if (report.verdict == InternalVerdict::Undetermined) return undetermined_regime(report, "linearization");

  const std::vector<cplx> grid = spiral_grid(o.grid.radius, o.grid.count);
  const LinearizeOptions lo = linearize_options(o);
  const LinearizationResult res = koenigs_limit(seq, o.index, grid, lo);
  const bool converged = res.status == LinearizationStatus::Converged;

  Outcome out;
  out.results = json{{"n", res.n},
                     {"regime", to_string(res.regime)},
                     {"status", converged ? "Converged" : "NonConvergent"},
                     {"m_used", res.m_used},
                     {"cauchy_gap", res.cauchy_gap},
                     {"tolerance", lo.tolerance},
                     {"certified_radius", res.univalence_radius},
                     {"residual_sup", res.residual_sup},
                     {"warnings", res.warnings}};

  if (converged) {
    // Normalisation phi(0) = 0, phi'(0) = 1 and the Koebe sandwich on
    // seeded samples in D_Q.
    // phi'(0) from four points on a small circle; the average cancels all
    // Taylor terms below h^4.
    const double h = std::min(1e-3, 0.01 * res.univalence_radius);
    const std::vector<cplx> probes{0.0, h, cplx{0.0, h}, -h, cplx{0.0, -h}};
    const PhiSamples norm = phi_samples(seq, o.index, probes, lo);
    cplx slope = 0.0;
    cplx turn = 1.0;
    for (std::size_t k = 1; k <= 4; ++k, turn *= cplx{0.0, -1.0}) slope += norm.values[k] * turn;
    slope /= 4.0 * h;

    std::mt19937_64 rng(o.seed);
    const double q = res.univalence_radius;
    std::vector<cplx> samples(16);
    for (auto& z : samples) z = random_in_disc(rng, 0.9 * std::min(q, o.grid.radius));
    const PhiSamples koebe = phi_samples(seq, o.index, samples, lo);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      // phi on D_Q rescaled to the unit disc: |u| / (1 + |u|)^2 <= |phi| / Q <= |u| / (1 - |u|)^2.
      const double u = std::abs(samples[i]) / q;
      const double v = std::abs(koebe.values[i]) / q;
      if (v < u / ((1 + u) * (1 + u)) - 1e-12 || v > u / ((1 - u) * (1 - u)) + 1e-12) ++violations;
    }
    out.results["normalization"] = json{{"phi_at_origin", std::abs(norm.values[0])},
                                        {"derivative_at_origin", complex_json(slope)}};
    out.results["koebe_check"] = json{{"samples", samples.size()}, {"violations", violations}};
  } else {
    out.exit_code = kExitUndetermined;
  }

  PlotTable table{"linearize.tsv", {"re", "im", "phi_re", "phi_im", "residual"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx phi = i < res.phi_values.size() ? res.phi_values[i] : cplx{NAN, NAN};
    const double r = i < res.residuals.size() ? res.residuals[i] : NAN;
    table.rows.push_back({fmt(grid[i].real()), fmt(grid[i].imag()), fmt(phi.real()), fmt(phi.imag()), fmt(r)});
  }
  out.tables.push_back(std::move(table));
  return out;
}

Outcome cmd_quotient(const MapSequence& seq, const Options& o) {
  const ClassificationReport report = classify(seq, o.horizon);
  if (report.verdict == InternalVerdict::Undetermined) return undetermined_regime(report, "the quotient model");

  QuotientOptions qo;
  qo.levels = o.levels;
  qo.linearize = linearize_options(o);
  const QuotientSurfaceModel model = quotient_surface_model(seq, qo);
  json points = json::array();
  PlotTable table{"quotient.tsv", {"index", "re", "im"}, {}};
  for (std::size_t i = 0; i < model.marked_points.size(); ++i) {
    points.push_back(complex_json(model.marked_points[i]));
    table.rows.push_back({std::to_string(i), fmt(model.marked_points[i].real()), fmt(model.marked_points[i].imag())});
  }
  Outcome out;
  out.results = json{{"regime", to_string(report.verdict)},
                     {"surface", to_string(model.kind)},
                     {"marked_points", points},
                     {"countable", model.countable_flag},
                     {"levels_scanned", model.levels_scanned},
                     {"max_cauchy_gap", model.max_cauchy_gap}};
  out.tables.push_back(std::move(table));
  return out;
}

std::size_t tower_levels(const CoveringTower& tower, std::size_t requested) {
  const auto len = tower.degrees().length();
  return len ? std::min(requested, *len) : requested;
}

Outcome cmd_tower_verify(const TowerSpec& spec, const Options& o) {
  const CoveringTower tower = spec.build();
  const std::size_t levels = tower_levels(tower, o.levels);
  const TowerPoint p0{0, spec.base_point()};

  PlotTable table{"tower.tsv", {"level", "degree", "degree_product", "modulus", "witness_gap"}, {}};
  json level_rows = json::array();
  for (std::size_t n = 0; n <= levels; ++n) {
    const std::string dn = n < levels ? std::to_string(tower.degree(n)) : "";
    const std::string product = tower.degree_product(n).str();
    json mu = nullptr;
    if (tower.kind() == TowerKind::Annulus) {
      try {
        mu = push_modulus(tower, n);
      } catch (const std::overflow_error&) {
      }
    }
    const double gap = indiscreteness_witness(tower, p0, n);
    level_rows.push_back(json{{"level", n}, {"degree_product", product}, {"modulus", mu}, {"witness_gap", gap}});
    table.rows.push_back({std::to_string(n), dn, product, mu.is_null() ? "" : fmt(mu.get<double>()), fmt(gap)});
  }

  // Follow the base point up the tower while z^{D_n} stays representable.
  bool orbit_in_model = true;
  std::size_t orbit_levels = 0;
  TowerPoint p = p0;
  while (orbit_levels < levels && orbit_in_model && std::pow(std::abs(p.z), tower.degree(p.level)) > 1e-280) {
    p = tower_map(tower, p);
    orbit_in_model = in_level_model(tower, p);
    ++orbit_levels;
  }

  // Conjugacy of the rotated powers e^{i alpha_n} z^{d_n} to the tower.
  const std::size_t k = spec.perturbation.empty() ? std::min<std::size_t>(levels, 6) : spec.perturbation.size();
  std::vector<RotatedPower> maps;
  for (std::size_t n = 0; n < k; ++n) {
    maps.push_back({n < spec.perturbation.size() ? spec.perturbation[n] : 0.0, tower.degree(n)});
  }
  const std::vector<double> beta = rotation_corrections(tower, maps);
  const std::vector<double> untwisted(beta.size(), 0.0);
  std::vector<cplx> circle;
  const double r0 = std::abs(p0.z);
  for (std::size_t i = 0; i < std::max<std::size_t>(o.grid.count, 1); ++i) {
    circle.push_back(std::polar(r0, 2.0 * std::numbers::pi * double(i) / double(std::max<std::size_t>(o.grid.count, 1))));
  }
  const double corrected = conjugacy_residual(tower, maps, beta, circle);
  const double mismatched = conjugacy_residual(tower, maps, untwisted, circle);

  const RelationVerdict verdict = discreteness_detect(tower, p0, detector_options(o));
  Outcome out;
  out.results = json{{"levels", level_rows},
                     {"base_point", complex_json(p0.z)},
                     {"orbit_in_model", orbit_in_model},
                     {"orbit_levels_checked", orbit_levels},
                     {"conjugacy",
                      {{"levels", k},
                       {"uniformizer_angles", beta},
                       {"residual_corrected", corrected},
                       {"residual_uncorrected", mismatched}}},
                     {"relation", relation_json(verdict)}};
  if (verdict.verdict == Relation::Undetermined) out.exit_code = kExitUndetermined;
  out.tables.push_back(std::move(table));
  return out;
}

Outcome cmd_orbit_sequence(const MapSequence& seq, const Options& o) {
  std::size_t depth = o.depth;
  if (const auto len = seq.length()) depth = std::min(depth, *len);
  const GrandOrbitSample sample = grand_orbit_sample(seq, o.base, depth);
  const RelationVerdict verdict = discreteness_detect(seq, o.base, detector_options(o));
  Outcome out;
  out.results = json{{"base", complex_json(o.base)},
                     {"depth", sample.depth},
                     {"orbit_points", sample.points.size()},
                     {"min_gap", finite_or_null(sample.min_gap)},
                     {"truncated", sample.truncated},
                     {"relation", relation_json(verdict)}};

  // Grand-orbit separation by phi_0 (contracting sequences, where phi_0 is
  // defined on the whole disc by spreading).
  const ClassificationReport report = classify(seq, o.horizon);
  if (report.verdict == InternalVerdict::Contracting) {
    const LinearizeOptions lo = linearize_options(o);
    const std::size_t count = std::min<std::size_t>(sample.points.size(), 256);
    std::vector<cplx> same(count);
    parallel_for(count, [&](std::size_t i) { same[i] = extend_by_dynamics(seq, 0, sample.points[i], lo).value; });
    const cplx phi_base = extend_by_dynamics(seq, 0, o.base, lo).value;
    double same_spread = 0.0;
    for (const auto& v : same) same_spread = std::max(same_spread, std::abs(v - phi_base));

    std::mt19937_64 rng(o.seed);
    std::vector<std::pair<cplx, cplx>> pairs(32);
    for (auto& [a, b] : pairs) {
      a = random_in_disc(rng, 0.9);
      b = random_in_disc(rng, 0.9);
    }
    std::vector<double> diffs(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
      diffs[i] = std::abs(extend_by_dynamics(seq, 0, pairs[i].first, lo).value -
                          extend_by_dynamics(seq, 0, pairs[i].second, lo).value);
    });
    out.results["phi_separation"] = json{{"same_orbit_points", count},
                                         {"same_orbit_max_difference", same_spread},
                                         {"distinct_pairs", pairs.size()},
                                         {"distinct_min_difference", *std::min_element(diffs.begin(), diffs.end())}};
  }

  PlotTable table{"orbit.tsv", {"depth", "min_gap"}, {}};
  for (const auto& [depth, gap] : verdict.trajectory) table.rows.push_back({std::to_string(depth), fmt(gap)});
  out.tables.push_back(std::move(table));
  if (verdict.verdict == Relation::Undetermined) out.exit_code = kExitUndetermined;
  return out;
}

Outcome cmd_orbit_tower(const TowerSpec& spec, const Options& o) {
  const CoveringTower tower = spec.build();
  const TowerPoint p0{0, spec.base_point()};
  const RelationVerdict verdict = discreteness_detect(tower, p0, detector_options(o));
  Outcome out;
  out.results = json{{"base", complex_json(p0.z)}, {"relation", relation_json(verdict)}};
  PlotTable table{"orbit.tsv", {"level", "witness_gap"}, {}};
  for (const auto& [k, gap] : verdict.trajectory) table.rows.push_back({std::to_string(k), fmt(gap)});
  out.tables.push_back(std::move(table));
  if (verdict.verdict == Relation::Undetermined) out.exit_code = kExitUndetermined;
  return out;
}

Outcome cmd_inj_decay(const TowerSpec& spec, const Options& o) {
  const CoveringTower tower = spec.build();
  const std::size_t levels = tower_levels(tower, o.levels);
  const InjDecay decay = inj_decay(tower, {0, spec.base_point()}, levels);
  bool monotone = true;
  for (std::size_t i = 1; i < decay.values.size(); ++i) monotone = monotone && decay.values[i] <= decay.values[i - 1];
  Outcome out;
  out.results = json{{"values", decay.values}, {"truncated", decay.truncated}, {"monotone", monotone}};
  PlotTable table{"inj_decay.tsv", {"level", "inj"}, {}};
  for (std::size_t i = 0; i < decay.values.size(); ++i) table.rows.push_back({std::to_string(i), fmt(decay.values[i])});
  out.tables.push_back(std::move(table));
  return out;
}

Outcome cmd_teich_dim(const Scenario& s, std::optional<MapSequence>& seq_storage) {
  const Options& o = s.options;
  std::vector<ComponentReport> components;
  if (s.component_list) {
    components = *s.component_list;
  } else if (s.covering_tower) {
    const CoveringTower tower = s.covering_tower->build();
    const RelationVerdict v = discreteness_detect(tower, {0, s.covering_tower->base_point()}, detector_options(o));
    ComponentReport c;
    c.kind = tower.kind() == TowerKind::Annulus ? ComponentKind::FiniteModulusAnnulus : ComponentKind::PuncturedDisc;
    c.modulus = tower.mu0();
    c.relation = v.verdict;
    c.structural = v.structural;
    c.source = s.name;
    components.push_back(c);
  } else {
    const MapSequence& seq = need_sequence(s, "teich-dim", seq_storage);
    const RelationVerdict v = discreteness_detect(seq, o.base, detector_options(o));
    components.push_back({ComponentKind::SimplyConnectedPiece, 0.0, v.verdict, v.structural, s.name});
  }
  const DimensionVerdict dim = total_dimension(components, o.infinitely_many_components);
  json breakdown = json::array();
  for (std::size_t i = 0; i < components.size(); ++i) {
    breakdown.push_back(json{{"kind", to_string(components[i].kind)},
                             {"relation", to_string(components[i].relation)},
                             {"structural", components[i].structural},
                             {"contribution", to_string(dim.breakdown[i])}});
  }
  Outcome out;
  out.results = json{{"dimension", dim.describe()}, {"components", breakdown}};
  if (dim.kind == DimensionKind::Finite) out.results["value"] = dim.value;
  if (dim.kind == DimensionKind::Unknown) out.exit_code = kExitUndetermined;
  return out;
}

Outcome dispatch(const std::string& command, const Scenario& s, std::optional<MapSequence>& seq) {
  const Options& o = s.options;
  if (command == "classify") return cmd_classify(need_sequence(s, command, seq), o);
  if (command == "linearize") return cmd_linearize(need_sequence(s, command, seq), o);
  if (command == "quotient") return cmd_quotient(need_sequence(s, command, seq), o);
  if (command == "tower-verify") return cmd_tower_verify(need_tower(s, command), o);
  if (command == "orbit") {
    if (s.covering_tower) return cmd_orbit_tower(*s.covering_tower, o);
    return cmd_orbit_sequence(need_sequence(s, command, seq), o);
  }
  if (command == "inj-decay") return cmd_inj_decay(need_tower(s, command), o);
  if (command == "teich-dim") return cmd_teich_dim(s, seq);
  throw std::invalid_argument("unknown command \"" + command + "\"");
}

std::vector<std::string> applicable_commands(const Scenario& s) {
  if (s.inner_sequence) return {"classify", "linearize", "quotient", "orbit", "teich-dim"};
  if (s.covering_tower) return {"tower-verify", "orbit", "inj-decay", "teich-dim"};
  return {"teich-dim"};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"classify", "linearize", "quotient", "tower-verify",
                                              "orbit",    "inj-decay", "teich-dim", "all"};
  return names;
}

std::string PlotTable::render() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += '\t';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

json RunReport::document() const {
  return json{{"scenario", {{"name", scenario_name}, {"hash", scenario_hash}}},
              {"command", command},
              {"results", results},
              {"exit_code", exit_code},
              {"provenance", provenance}};
}

RunReport run(const std::string& command, const Scenario& scenario) {
  RunReport report;
  report.scenario_name = scenario.name;
  report.scenario_hash = scenario_hash(scenario);
  report.command = command;

  const auto start = std::chrono::steady_clock::now();
  std::optional<MapSequence> seq;
  try {
    if (command == "all") {
      report.results = json::object();
      for (const auto& c : applicable_commands(scenario)) {
        Outcome o = dispatch(c, scenario, seq);
        report.results[c] = std::move(o.results);
        report.exit_code = std::max(report.exit_code, o.exit_code);
        for (auto& t : o.tables) report.tables.push_back(std::move(t));
      }
    } else {
      Outcome o = dispatch(command, scenario, seq);
      report.results = std::move(o.results);
      report.exit_code = o.exit_code;
      report.tables = std::move(o.tables);
    }
  } catch (const std::exception& e) {
    throw std::runtime_error("scenario \"" + scenario.name + "\", command " + command + ": " + e.what());
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  report.provenance = json{{"tool_version", kToolVersion},
                           {"config", options_to_json(scenario.options)},
                           {"timestamp", {{"utc", utc_now()}, {"wall_time_seconds", wall}}}};
  return report;
}

void write_outputs(const RunReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
  };
  write(out_dir / (report.command + ".report.json"), report.document().dump(2) + "\n");
  for (const auto& t : report.tables) write(out_dir / t.file_name, t.render());
}

}  // namespace wander::cli
