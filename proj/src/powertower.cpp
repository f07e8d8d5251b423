#include "wander/powertower.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wander/errors.hpp"
#include "wander/hypgeo.hpp"

namespace wander {

using std::numbers::pi;

namespace {

void require_degrees(const std::vector<unsigned>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] < 1) throw std::invalid_argument("degree " + std::to_string(i) + " must be >= 1");
}

cplx integer_power(cplx z, unsigned d) {
  cplx result{1.0, 0.0};
  cplx base = z;
  while (d > 0) {
    if (d & 1u) result *= base;
    base *= base;
    d >>= 1u;
  }
  return result;
}

}  // namespace

DegreeRule DegreeRule::constant(unsigned d) {
  DegreeRule rule;
  rule.kind_ = DegreeRuleKind::Constant;
  rule.values_ = {d};
  require_degrees(rule.values_);
  return rule;
}

DegreeRule DegreeRule::periodic(std::vector<unsigned> cycle) {
  if (cycle.empty()) throw std::invalid_argument("periodic degree rule needs a nonempty cycle");
  DegreeRule rule;
  rule.kind_ = DegreeRuleKind::Periodic;
  rule.values_ = std::move(cycle);
  require_degrees(rule.values_);
  return rule;
}

DegreeRule DegreeRule::explicit_list(std::vector<unsigned> degrees) {
  DegreeRule rule;
  rule.kind_ = DegreeRuleKind::Explicit;
  rule.values_ = std::move(degrees);
  require_degrees(rule.values_);
  return rule;
}

std::optional<std::size_t> DegreeRule::length() const {
  if (kind_ == DegreeRuleKind::Explicit) return values_.size();
  return std::nullopt;
}

unsigned DegreeRule::degree(std::size_t n) const {
  switch (kind_) {
    case DegreeRuleKind::Constant: return values_[0];
    case DegreeRuleKind::Periodic: return values_[n % values_.size()];
    case DegreeRuleKind::Explicit: break;
  }
  if (n >= values_.size())
    throw std::out_of_range("degree " + std::to_string(n) + " requested from a list of " +
                            std::to_string(values_.size()));
  return values_[n];
}

std::optional<bool> DegreeRule::expands_infinitely_often() const {
  if (kind_ == DegreeRuleKind::Explicit) return std::nullopt;
  return std::any_of(values_.begin(), values_.end(), [](unsigned d) { return d >= 2; });
}

struct CoveringTower::Cache {
  std::mutex mutex;
  std::vector<BigInt> products{BigInt(1)};
};

CoveringTower CoveringTower::annulus(double mu0, DegreeRule degrees) {
  if (!(mu0 > 0.0 && std::isfinite(mu0))) throw std::invalid_argument("annulus tower needs a positive finite mu0");
  CoveringTower tower;
  tower.kind_ = TowerKind::Annulus;
  tower.mu0_ = mu0;
  tower.degrees_ = std::move(degrees);
  tower.cache_ = std::make_shared<Cache>();
  return tower;
}

CoveringTower CoveringTower::punctured_disc(DegreeRule degrees) {
  CoveringTower tower;
  tower.kind_ = TowerKind::PuncturedDisc;
  tower.degrees_ = std::move(degrees);
  tower.cache_ = std::make_shared<Cache>();
  return tower;
}

BigInt CoveringTower::degree_product(std::size_t n) const {
  std::lock_guard lock(cache_->mutex);
  auto& products = cache_->products;
  while (products.size() <= n) products.push_back(products.back() * degrees_.degree(products.size() - 1));
  return products[n];
}

double CoveringTower::log_inner_radius(std::size_t n) const {
  if (kind_ == TowerKind::PuncturedDisc) return -std::numeric_limits<double>::infinity();
  return -2.0 * pi * mu0_ * degree_product(n).convert_to<double>();
}

double push_modulus(const CoveringTower& tower, std::size_t n) {
  if (tower.kind() != TowerKind::Annulus) throw std::logic_error("push_modulus: punctured-disc towers have no modulus");
  const double value = tower.mu0() * tower.degree_product(n).convert_to<double>();
  if (!std::isfinite(value)) throw std::overflow_error("push_modulus: mu_" + std::to_string(n) + " overflows");
  return value;
}

bool in_level_model(const CoveringTower& tower, const TowerPoint& p) {
  const double r = std::abs(p.z);
  if (!(r > 0.0 && r < 1.0)) return false;
  if (tower.kind() == TowerKind::PuncturedDisc) return true;
  return std::log(r) > tower.log_inner_radius(p.level);
}

TowerPoint tower_map(const CoveringTower& tower, const TowerPoint& p) {
  if (!in_level_model(tower, p)) {
    std::ostringstream msg;
    msg << "tower_map: " << p.z << " is not in the level-" << p.level << " model";
    throw DomainError(msg.str());
  }
  return {p.level + 1, integer_power(p.z, tower.degree(p.level))};
}

cplx RotatedPower::operator()(cplx z) const { return std::polar(1.0, angle) * integer_power(z, degree); }

std::vector<double> rotation_corrections(const CoveringTower& tower, std::span<const RotatedPower> maps) {
  std::vector<double> beta{0.0};
  for (std::size_t n = 0; n < maps.size(); ++n) {
    const unsigned d = tower.degree(n);
    if (maps[n].degree != d)
      throw std::invalid_argument("map " + std::to_string(n) + " has degree " + std::to_string(maps[n].degree) +
                                  ", tower expects " + std::to_string(d));
    beta.push_back(std::remainder(d * beta.back() - maps[n].angle, 2.0 * pi));
  }
  return beta;
}

double conjugacy_residual(const CoveringTower& tower, std::span<const RotatedPower> maps,
                          std::span<const double> uniformizer_angles, std::span<const cplx> grid) {
  if (uniformizer_angles.size() < maps.size() + 1)
    throw std::invalid_argument("conjugacy_residual: need one uniformiser angle per level");
  for (std::size_t n = 0; n < maps.size(); ++n)
    if (maps[n].degree != tower.degree(n))
      throw std::invalid_argument("map " + std::to_string(n) + " has degree " + std::to_string(maps[n].degree) +
                                  ", tower expects " + std::to_string(tower.degree(n)));

  double sup = 0.0;
  for (cplx z : grid) {
    if (!in_level_model(tower, {0, z})) throw DomainError("conjugacy_residual: grid point outside the level-0 model");
    for (std::size_t n = 0; n < maps.size(); ++n) {
      const cplx image = maps[n](z);
      const cplx lhs = std::polar(1.0, uniformizer_angles[n + 1]) * image;
      const cplx rhs = integer_power(std::polar(1.0, uniformizer_angles[n]) * z, maps[n].degree);
      sup = std::max(sup, std::abs(lhs - rhs));
      z = image;
    }
  }
  return sup;
}

std::vector<cplx> fiber_on_circle(const CoveringTower& tower, const TowerPoint& p, std::size_t k, std::size_t cap) {
  if (!in_level_model(tower, p)) throw DomainError("fiber_on_circle: point outside the model");
  const BigInt total = tower.degree_product(k);
  if (total > cap) throw std::length_error("fiber_on_circle: D_k exceeds the point cap");
  const auto count = total.convert_to<std::size_t>();
  const double radius = std::abs(p.z);
  const double theta = std::arg(p.z);
  std::vector<cplx> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = std::polar(radius, theta + 2.0 * pi * double(j) / double(count));
  return out;
}

double indiscreteness_witness(const CoveringTower& tower, const TowerPoint& p, std::size_t k) {
  if (!in_level_model(tower, p)) throw DomainError("indiscreteness_witness: point outside the model");
  return 2.0 * pi / tower.degree_product(k).convert_to<double>();
}

InjDecay inj_decay(const CoveringTower& tower, const TowerPoint& p, std::size_t levels) {
  if (!in_level_model(tower, p)) throw DomainError("inj_decay: point outside the model");
  InjDecay out;
  double log_s = std::log(std::abs(p.z));

  if (tower.kind() == TowerKind::PuncturedDisc) {
    double p_coord = std::log(2.0 * pi) - std::log(-log_s);
    for (std::size_t n = p.level; n < p.level + levels; ++n) {
      out.values.push_back(hypgeo::cusp_injectivity(p_coord));
      p_coord -= std::log(static_cast<double>(tower.degree(n)));
    }
    return out;
  }

  for (std::size_t n = p.level; n < p.level + levels; ++n) {
    const double mu = tower.mu0() * tower.degree_product(n).convert_to<double>();
    if (!std::isfinite(mu) || !std::isfinite(log_s)) {
      out.truncated = true;
      break;
    }
    out.values.push_back(hypgeo::annulus_injectivity_log(hypgeo::StdAnnulus(mu), log_s));
    log_s *= tower.degree(n);
  }
  return out;
}

}  // namespace wander
