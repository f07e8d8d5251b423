#include "wander/cli/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "wander/hypgeo.hpp"

namespace wander::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ScenarioError(path + ": " + message);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!keys.contains(item.key())) fail(path + "." + item.key(), "unknown field");
  }
}

const json& require(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::size_t read_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

cplx read_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
  return {read_number(j[0], path + "[0]"), read_number(j[1], path + "[1]")};
}

json write_complex(cplx z) { return json::array({z.real(), z.imag()}); }

MapSpec read_map(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a map object");
  MapSpec spec;
  if (j.contains("linear")) {
    check_keys(j, path, {"linear"});
    const cplx c = read_complex(j["linear"], path + ".linear");
    if (std::abs(c) == 0.0 || std::abs(c) > 1.0) fail(path + ".linear", "multiplier must satisfy 0 < |c| <= 1");
    spec.zeros = {cplx{0.0, 0.0}};
    spec.rotation = c / std::abs(c);
    spec.scale = std::abs(c);
  } else {
    check_keys(j, path, {"zeros", "rotation", "scale"});
    const json& zeros = require(j, path, "zeros");
    if (!zeros.is_array()) fail(path + ".zeros", "expected an array of complex numbers");
    spec.zeros.clear();
    for (std::size_t k = 0; k < zeros.size(); ++k) {
      spec.zeros.push_back(read_complex(zeros[k], path + ".zeros[" + std::to_string(k) + "]"));
    }
    if (j.contains("rotation")) spec.rotation = read_complex(j["rotation"], path + ".rotation");
    if (j.contains("scale")) spec.scale = read_number(j["scale"], path + ".scale");
  }
  try {
    (void)spec.build();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return spec;
}

json write_map(const MapSpec& m) {
  json zeros = json::array();
  for (cplx a : m.zeros) zeros.push_back(write_complex(a));
  return json{{"zeros", zeros}, {"rotation", write_complex(m.rotation)}, {"scale", m.scale}};
}

std::vector<MapSpec> read_map_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of maps");
  std::vector<MapSpec> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(read_map(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

json write_map_list(const std::vector<MapSpec>& maps) {
  json out = json::array();
  for (const auto& m : maps) out.push_back(write_map(m));
  return out;
}

SequenceSpec read_sequence(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const json& rule = require(j, path, "rule");
  if (!rule.is_string()) fail(path + ".rule", "expected a string");
  const std::string r = rule.get<std::string>();
  SequenceSpec spec;
  if (r == "explicit") {
    check_keys(j, path, {"rule", "maps"});
    spec.rule = SequenceRuleSpec::Explicit;
    spec.maps = read_map_list(require(j, path, "maps"), path + ".maps");
  } else if (r == "constant") {
    check_keys(j, path, {"rule", "map"});
    spec.rule = SequenceRuleSpec::Periodic;
    spec.period = {read_map(require(j, path, "map"), path + ".map")};
  } else if (r == "periodic") {
    check_keys(j, path, {"rule", "head", "period"});
    spec.rule = SequenceRuleSpec::Periodic;
    if (j.contains("head")) spec.maps = read_map_list(j["head"], path + ".head");
    spec.period = read_map_list(require(j, path, "period"), path + ".period");
    if (spec.period.empty()) fail(path + ".period", "period must be non-empty");
  } else if (r == "rotation_tail") {
    check_keys(j, path, {"rule", "head", "angle"});
    spec.rule = SequenceRuleSpec::RotationTail;
    if (j.contains("head")) spec.maps = read_map_list(j["head"], path + ".head");
    spec.angle = read_number(require(j, path, "angle"), path + ".angle");
  } else if (r == "deficit_family") {
    check_keys(j, path, {"rule", "c", "alpha", "shape"});
    spec.rule = SequenceRuleSpec::DeficitFamily;
    spec.c = read_number(require(j, path, "c"), path + ".c");
    spec.alpha = read_number(require(j, path, "alpha"), path + ".alpha");
    if (j.contains("shape")) {
      const std::string shape = j["shape"].is_string() ? j["shape"].get<std::string>() : "";
      if (shape == "blaschke") {
        spec.shape = FamilyShape::Blaschke;
      } else if (shape == "linear") {
        spec.shape = FamilyShape::Linear;
      } else {
        fail(path + ".shape", "expected \"blaschke\" or \"linear\"");
      }
    }
  } else {
    fail(path + ".rule", "unknown rule \"" + r + "\"");
  }
  try {
    (void)spec.build();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return spec;
}

json write_sequence(const SequenceSpec& s) {
  switch (s.rule) {
    case SequenceRuleSpec::Explicit:
      return json{{"rule", "explicit"}, {"maps", write_map_list(s.maps)}};
    case SequenceRuleSpec::Periodic:
      return json{{"rule", "periodic"}, {"head", write_map_list(s.maps)}, {"period", write_map_list(s.period)}};
    case SequenceRuleSpec::RotationTail:
      return json{{"rule", "rotation_tail"}, {"head", write_map_list(s.maps)}, {"angle", s.angle}};
    case SequenceRuleSpec::DeficitFamily:
      return json{{"rule", "deficit_family"},
                  {"c", s.c},
                  {"alpha", s.alpha},
                  {"shape", s.shape == FamilyShape::Linear ? "linear" : "blaschke"}};
  }
  return {};
}

DegreeRule read_degrees(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected {kind, params}");
  check_keys(j, path, {"kind", "params"});
  const json& kind = require(j, path, "kind");
  const json& params = require(j, path, "params");
  if (!params.is_array()) fail(path + ".params", "expected an array of degrees");
  std::vector<unsigned> values;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const std::string p = path + ".params[" + std::to_string(k) + "]";
    if (!params[k].is_number_integer() || params[k].get<long long>() < 1) fail(p, "degree must be an integer >= 1");
    values.push_back(params[k].get<unsigned>());
  }
  const std::string k = kind.is_string() ? kind.get<std::string>() : "";
  try {
    if (k == "constant") {
      if (values.size() != 1) fail(path + ".params", "constant rule takes exactly one degree");
      return DegreeRule::constant(values[0]);
    }
    if (k == "periodic") return DegreeRule::periodic(values);
    if (k == "explicit") return DegreeRule::explicit_list(values);
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "expected \"constant\", \"periodic\" or \"explicit\"");
}

json write_degrees(const DegreeRule& d) {
  const char* kind = d.kind() == DegreeRuleKind::Constant   ? "constant"
                     : d.kind() == DegreeRuleKind::Periodic ? "periodic"
                                                            : "explicit";
  return json{{"kind", kind}, {"params", d.values()}};
}

TowerSpec read_tower(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"kind", "mu0", "degrees", "perturbation", "point"});
  TowerSpec spec;
  const json& kind = require(j, path, "kind");
  const std::string k = kind.is_string() ? kind.get<std::string>() : "";
  if (k == "annulus") {
    spec.kind = TowerKind::Annulus;
    spec.mu0 = read_number(require(j, path, "mu0"), path + ".mu0");
    if (!(spec.mu0 > 0.0)) fail(path + ".mu0", "modulus must be positive");
  } else if (k == "punctured_disc") {
    spec.kind = TowerKind::PuncturedDisc;
    if (j.contains("mu0")) fail(path + ".mu0", "punctured-disc towers have no modulus");
  } else {
    fail(path + ".kind", "expected \"annulus\" or \"punctured_disc\"");
  }
  spec.degrees = read_degrees(require(j, path, "degrees"), path + ".degrees");
  if (j.contains("perturbation")) {
    const json& angles = j["perturbation"];
    if (!angles.is_array()) fail(path + ".perturbation", "expected an array of angles");
    for (std::size_t i = 0; i < angles.size(); ++i) {
      spec.perturbation.push_back(read_number(angles[i], path + ".perturbation[" + std::to_string(i) + "]"));
    }
    const auto len = spec.degrees.length();
    if (len && spec.perturbation.size() > *len) {
      fail(path + ".perturbation", "more angles than degrees in the explicit list");
    }
  }
  if (j.contains("point")) spec.point = read_complex(j["point"], path + ".point");
  const TowerPoint p{0, spec.base_point()};
  if (!in_level_model(spec.build(), p)) fail(path + ".point", "point is not in the level-0 model");
  return spec;
}

json write_tower(const TowerSpec& t) {
  json out{{"kind", t.kind == TowerKind::Annulus ? "annulus" : "punctured_disc"},
           {"degrees", write_degrees(t.degrees)},
           {"perturbation", t.perturbation}};
  if (t.kind == TowerKind::Annulus) out["mu0"] = t.mu0;
  if (t.point) out["point"] = write_complex(*t.point);
  return out;
}

ComponentKind read_component_kind(const json& j, const std::string& path) {
  const std::string k = j.is_string() ? j.get<std::string>() : "";
  if (k == "annulus") return ComponentKind::FiniteModulusAnnulus;
  if (k == "punctured_disc") return ComponentKind::PuncturedDisc;
  if (k == "simply_connected") return ComponentKind::SimplyConnectedPiece;
  if (k == "other") return ComponentKind::Other;
  fail(path, "expected \"annulus\", \"punctured_disc\", \"simply_connected\" or \"other\"");
}

const char* component_kind_key(ComponentKind k) {
  switch (k) {
    case ComponentKind::FiniteModulusAnnulus: return "annulus";
    case ComponentKind::PuncturedDisc: return "punctured_disc";
    case ComponentKind::SimplyConnectedPiece: return "simply_connected";
    case ComponentKind::Other: return "other";
  }
  return "other";
}

Relation read_relation(const json& j, const std::string& path) {
  const std::string r = j.is_string() ? j.get<std::string>() : "";
  if (r == "discrete") return Relation::Discrete;
  if (r == "indiscrete") return Relation::Indiscrete;
  if (r == "undetermined") return Relation::Undetermined;
  fail(path, "expected \"discrete\", \"indiscrete\" or \"undetermined\"");
}

const char* relation_key(Relation r) {
  switch (r) {
    case Relation::Discrete: return "discrete";
    case Relation::Indiscrete: return "indiscrete";
    case Relation::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::vector<ComponentReport> read_components(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of components");
  std::vector<ComponentReport> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json& c = j[i];
    if (!c.is_object()) fail(p, "expected an object");
    check_keys(c, p, {"kind", "modulus", "relation", "structural", "source"});
    ComponentReport r;
    r.kind = read_component_kind(require(c, p, "kind"), p + ".kind");
    if (c.contains("modulus")) r.modulus = read_number(c["modulus"], p + ".modulus");
    r.relation = read_relation(require(c, p, "relation"), p + ".relation");
    if (c.contains("structural")) {
      if (!c["structural"].is_boolean()) fail(p + ".structural", "expected a boolean");
      r.structural = c["structural"].get<bool>();
    }
    if (c.contains("source")) {
      if (!c["source"].is_string()) fail(p + ".source", "expected a string");
      r.source = c["source"].get<std::string>();
    }
    try {
      (void)component_dimension(r);
    } catch (const std::exception& e) {
      fail(p, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

json write_components(const std::vector<ComponentReport>& cs) {
  json out = json::array();
  for (const auto& c : cs) {
    json j{{"kind", component_kind_key(c.kind)},
           {"relation", relation_key(c.relation)},
           {"structural", c.structural},
           {"source", c.source}};
    if (c.kind == ComponentKind::FiniteModulusAnnulus) j["modulus"] = c.modulus;
    out.push_back(std::move(j));
  }
  return out;
}

void apply_option(Options& o, const std::string& key, const json& v, const std::string& path) {
  if (key == "horizon") {
    o.horizon = read_count(v, path);
  } else if (key == "tolerance") {
    o.tolerance = read_number(v, path);
    if (!(o.tolerance > 0.0)) fail(path, "tolerance must be positive");
  } else if (key == "max_m") {
    o.max_m = read_count(v, path);
    if (o.max_m == 0) fail(path, "max_m must be positive");
  } else if (key == "grid.radius") {
    o.grid.radius = read_number(v, path);
    if (!(o.grid.radius > 0.0 && o.grid.radius < 1.0)) fail(path, "grid radius must lie in (0, 1)");
  } else if (key == "grid.count") {
    o.grid.count = read_count(v, path);
  } else if (key == "seed") {
    if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    o.seed = v.get<std::uint64_t>();
  } else if (key == "index") {
    o.index = read_count(v, path);
  } else if (key == "base") {
    o.base = read_complex(v, path);
    if (std::abs(o.base) >= 1.0) fail(path, "base point must lie in the unit disc");
  } else if (key == "depth") {
    o.depth = read_count(v, path);
  } else if (key == "depth_schedule") {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of depths");
    o.depth_schedule.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      o.depth_schedule.push_back(read_count(v[i], path + "[" + std::to_string(i) + "]"));
    }
  } else if (key == "floor") {
    o.floor = read_number(v, path);
  } else if (key == "levels") {
    o.levels = read_count(v, path);
  } else if (key == "infinitely_many_components") {
    if (!v.is_boolean()) fail(path, "expected a boolean");
    o.infinitely_many_components = v.get<bool>();
  } else {
    fail(path, "unknown option");
  }
}

Options read_options(const json& j, const std::string& path) {
  Options o;
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    if (item.key() == "grid") {
      if (!item.value().is_object()) fail(path + ".grid", "expected an object");
      for (const auto& g : item.value().items()) {
        apply_option(o, "grid." + g.key(), g.value(), path + ".grid." + g.key());
      }
    } else {
      apply_option(o, item.key(), item.value(), path + "." + item.key());
    }
  }
  return o;
}

std::string syntax_error(const std::string& text, const nlohmann::json::parse_error& e) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": syntax error: " + e.what();
}

}  // namespace

MapSequence SequenceSpec::build() const {
  auto to_maps = [](const std::vector<MapSpec>& specs) {
    std::vector<BlaschkeMap> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(s.build());
    return out;
  };
  switch (rule) {
    case SequenceRuleSpec::Explicit: return MapSequence::explicit_list(to_maps(maps));
    case SequenceRuleSpec::Periodic: return MapSequence::periodic(to_maps(maps), to_maps(period));
    case SequenceRuleSpec::RotationTail: return MapSequence::rotation_tail(to_maps(maps), angle);
    case SequenceRuleSpec::DeficitFamily: return MapSequence::deficit_family(c, alpha, shape);
  }
  throw std::logic_error("unknown sequence rule");
}

CoveringTower TowerSpec::build() const {
  return kind == TowerKind::Annulus ? CoveringTower::annulus(mu0, degrees) : CoveringTower::punctured_disc(degrees);
}

cplx TowerSpec::base_point() const {
  if (point) return *point;
  if (kind == TowerKind::Annulus) return {hypgeo::StdAnnulus(mu0).core_radius(), 0.0};
  // Horocycle of length 1, inside the standard cusp collar.
  return {hypgeo::StdPuncturedDisc::radius_at(0.0), 0.0};
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(syntax_error(text, e));
  }
  if (!doc.is_object()) fail("$", "scenario must be a JSON object");
  check_keys(doc, "$", {"schema_version", "name", "inner_sequence", "covering_tower", "component_list", "options"});

  Scenario s;
  const json& version = require(doc, "$", "schema_version");
  if (!version.is_number_integer()) fail("schema_version", "expected an integer");
  s.schema_version = version.get<int>();
  if (s.schema_version != kSchemaVersion) {
    fail("schema_version", "unsupported version " + std::to_string(s.schema_version) + " (supported: " +
                               std::to_string(kSchemaVersion) + ")");
  }
  const json& name = require(doc, "$", "name");
  if (!name.is_string() || name.get<std::string>().empty()) fail("name", "expected a non-empty string");
  s.name = name.get<std::string>();

  const int payloads = int(doc.contains("inner_sequence")) + int(doc.contains("covering_tower")) +
                       int(doc.contains("component_list"));
  if (payloads != 1) {
    fail("$", "exactly one payload (inner_sequence, covering_tower, component_list) is required");
  }
  if (doc.contains("inner_sequence")) s.inner_sequence = read_sequence(doc["inner_sequence"], "inner_sequence");
  if (doc.contains("covering_tower")) s.covering_tower = read_tower(doc["covering_tower"], "covering_tower");
  if (doc.contains("component_list")) s.component_list = read_components(doc["component_list"], "component_list");
  if (doc.contains("options")) s.options = read_options(doc["options"], "options");
  return s;
}

Scenario ingest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

json options_to_json(const Options& o) {
  return json{{"horizon", o.horizon},
              {"tolerance", o.tolerance},
              {"max_m", o.max_m},
              {"grid", {{"radius", o.grid.radius}, {"count", o.grid.count}}},
              {"seed", o.seed},
              {"index", o.index},
              {"base", write_complex(o.base)},
              {"depth", o.depth},
              {"depth_schedule", o.depth_schedule},
              {"floor", o.floor},
              {"levels", o.levels},
              {"infinitely_many_components", o.infinitely_many_components}};
}

json serialize(const Scenario& s) {
  json out{{"schema_version", s.schema_version}, {"name", s.name}, {"options", options_to_json(s.options)}};
  if (s.inner_sequence) out["inner_sequence"] = write_sequence(*s.inner_sequence);
  if (s.covering_tower) out["covering_tower"] = write_tower(*s.covering_tower);
  if (s.component_list) out["component_list"] = write_components(*s.component_list);
  return out;
}

void apply_config(Options& options, const json& config) {
  if (!config.is_object()) fail("config", "expected an object");
  Options updated = options;
  for (const auto& item : config.items()) {
    if (item.key() == "grid" && item.value().is_object()) {
      for (const auto& g : item.value().items()) {
        apply_option(updated, "grid." + g.key(), g.value(), "config.grid." + g.key());
      }
    } else {
      apply_option(updated, item.key(), item.value(), "config." + item.key());
    }
  }
  options = updated;
}

std::vector<cplx> spiral_grid(double radius, std::size_t count) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<cplx> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double r = radius * std::sqrt((double(k) + 0.5) / double(count));
    out.push_back(std::polar(r, golden * double(k)));
  }
  return out;
}

std::string scenario_hash(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize(scenario).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wander::cli
