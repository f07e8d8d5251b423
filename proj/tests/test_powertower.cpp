#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "support.hpp"
#include "wander/errors.hpp"
#include "wander/hypgeo.hpp"
#include "wander/powertower.hpp"

namespace wander {
namespace {

using std::numbers::pi;
using testing::Gen;

double core_log_radius(double mu) { return -pi * mu; }

// Level-0 preimages of the level-k image of z, by extracting d-th roots one
// level at a time from the top.
std::vector<cplx> fiber_by_roots(const CoveringTower& tower, cplx z, std::size_t k) {
  std::vector<cplx> orbit{z};
  for (std::size_t n = 0; n < k; ++n) orbit.push_back(std::pow(orbit.back(), static_cast<int>(tower.degree(n))));
  std::vector<cplx> layer{orbit.back()};
  for (std::size_t n = k; n-- > 0;) {
    const unsigned d = tower.degree(n);
    std::vector<cplx> below;
    for (cplx w : layer) {
      const cplx root = std::polar(std::pow(std::abs(w), 1.0 / d), std::arg(w) / d);
      for (unsigned j = 0; j < d; ++j) below.push_back(root * std::polar(1.0, 2.0 * pi * j / d));
    }
    layer = std::move(below);
  }
  return layer;
}

double min_angular_gap(std::vector<cplx> points) {
  std::vector<double> angles;
  for (cplx p : points) angles.push_back(std::arg(p));
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::min(gap, angles[i] - angles[i - 1]);
  return gap;
}

std::vector<cplx> circle_grid(double radius, std::size_t count) {
  std::vector<cplx> out;
  for (std::size_t j = 0; j < count; ++j) out.push_back(std::polar(radius, 2.0 * pi * (j + 0.25) / count));
  return out;
}

TEST(DegreeRule, Values) {
  const auto c = DegreeRule::constant(3);
  EXPECT_EQ(c.degree(0), 3u);
  EXPECT_EQ(c.degree(1000), 3u);
  EXPECT_EQ(c.expands_infinitely_often(), true);
  EXPECT_EQ(DegreeRule::constant(1).expands_infinitely_often(), false);

  const auto p = DegreeRule::periodic({2, 1, 3});
  EXPECT_EQ(p.degree(4), 1u);
  EXPECT_EQ(p.degree(5), 3u);
  EXPECT_EQ(p.expands_infinitely_often(), true);
  EXPECT_EQ(DegreeRule::periodic({1, 1}).expands_infinitely_often(), false);

  const auto e = DegreeRule::explicit_list({2, 2});
  EXPECT_EQ(e.length(), 2u);
  EXPECT_FALSE(e.expands_infinitely_often().has_value());
  EXPECT_THROW(e.degree(2), std::out_of_range);
}

TEST(DegreeRule, RejectsZeroDegree) {
  EXPECT_THROW(DegreeRule::constant(0), std::invalid_argument);
  EXPECT_THROW(DegreeRule::periodic({2, 0}), std::invalid_argument);
  EXPECT_THROW(DegreeRule::periodic({}), std::invalid_argument);
}

TEST(CoveringTower, RejectsBadModulus) {
  EXPECT_THROW(CoveringTower::annulus(0.0, DegreeRule::constant(2)), std::invalid_argument);
  EXPECT_THROW(CoveringTower::annulus(-1.0, DegreeRule::constant(2)), std::invalid_argument);
}

TEST(PushModulus, Examples) {
  const auto tower = CoveringTower::annulus(0.3, DegreeRule::explicit_list({2, 3}));
  EXPECT_EQ(push_modulus(tower, 0), 0.3);
  EXPECT_NEAR(push_modulus(tower, 2), 1.8, 1e-15);
  EXPECT_EQ(tower.degree_product(2), 6);
}

TEST(PushModulus, RoundModelBoundary) {
  // z -> z^2 carries {r < |z| < 1} onto {r^2 < |z| < 1}.
  const double r = 0.5;
  const auto tower = CoveringTower::annulus(std::log(1.0 / r) / (2.0 * pi), DegreeRule::constant(2));
  EXPECT_NEAR(push_modulus(tower, 1), std::log(1.0 / (r * r)) / (2.0 * pi), 1e-15);
  EXPECT_NEAR(std::exp(tower.log_inner_radius(1)), r * r, 1e-15);
}

TEST(PushModulus, ExactMultiplicativity) {
  Gen gen(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<unsigned> cycle(gen.index(1, 5));
    for (auto& d : cycle) d = static_cast<unsigned>(gen.index(1, 4));
    const auto tower = CoveringTower::annulus(gen.uniform(0.01, 2.0), DegreeRule::periodic(cycle));
    BigInt product = 1;
    for (std::size_t n = 0; n < 60; ++n) {
      ASSERT_EQ(tower.degree_product(n), product);
      const double mu = push_modulus(tower, n);
      EXPECT_EQ(mu, tower.mu0() * product.convert_to<double>());
      const double next = push_modulus(tower, n + 1);
      EXPECT_NEAR(next, tower.degree(n) * mu, 4e-16 * next);
      product *= tower.degree(n);
    }
  }
}

TEST(PushModulus, BigDegreeProducts) {
  const auto tower = CoveringTower::annulus(1.0, DegreeRule::constant(2));
  EXPECT_EQ(tower.degree_product(200), BigInt(1) << 200);
  EXPECT_EQ(push_modulus(tower, 200), std::ldexp(1.0, 200));
  EXPECT_THROW(push_modulus(tower, 2000), std::overflow_error);
  EXPECT_THROW(push_modulus(CoveringTower::punctured_disc(DegreeRule::constant(2)), 1), std::logic_error);
}

TEST(TowerMap, Examples) {
  const auto tower = CoveringTower::annulus(std::log(2.0) / (2.0 * pi), DegreeRule::constant(2));
  const auto image = tower_map(tower, {0, {0.8, 0.0}});
  EXPECT_EQ(image.level, 1u);
  EXPECT_NEAR(std::abs(image.z - cplx{0.64, 0.0}), 0.0, 1e-15);
  EXPECT_TRUE(in_level_model(tower, image));

  const auto identity = CoveringTower::annulus(0.4, DegreeRule::constant(1));
  const cplx z = std::polar(0.5, 1.0);
  EXPECT_EQ(tower_map(identity, {3, z}).z, z);
}

TEST(TowerMap, StaysInModel) {
  Gen gen(42);
  const auto tower = CoveringTower::annulus(0.2, DegreeRule::periodic({2, 1, 3}));
  for (int i = 0; i < 2000; ++i) {
    const double log_s = gen.uniform(tower.log_inner_radius(0), 0.0) * (1.0 - 1e-9);
    TowerPoint p{0, std::polar(std::exp(log_s), gen.uniform(0.0, 2.0 * pi))};
    for (int n = 0; n < 5; ++n) {
      p = tower_map(tower, p);
      ASSERT_TRUE(in_level_model(tower, p));
    }
  }
}

TEST(TowerMap, BoundaryPreservation) {
  const auto tower = CoveringTower::annulus(0.3, DegreeRule::constant(5));
  for (double eps : {1e-3, 1e-6, 1e-9}) {
    const auto image = tower_map(tower, {0, {1.0 - eps, 0.0}});
    EXPECT_LT(1.0 - std::abs(image.z), 5.0 * eps * 1.0001);
  }
}

TEST(TowerMap, RejectsPointsOffModel) {
  const auto tower = CoveringTower::annulus(0.3, DegreeRule::constant(2));
  EXPECT_THROW(tower_map(tower, {0, {1.0, 0.0}}), DomainError);
  EXPECT_THROW(tower_map(tower, {0, {0.1, 0.0}}), DomainError);
  const auto disc = CoveringTower::punctured_disc(DegreeRule::constant(2));
  EXPECT_THROW(tower_map(disc, {0, {0.0, 0.0}}), DomainError);
  EXPECT_NO_THROW(tower_map(disc, {0, {1e-100, 0.0}}));
}

TEST(Conjugacy, ExactPowers) {
  const auto tower = CoveringTower::annulus(0.3, DegreeRule::periodic({2, 3}));
  const std::vector<RotatedPower> maps{{0.0, 2}, {0.0, 3}, {0.0, 2}};
  const std::vector<double> angles(4, 0.0);
  const auto grid = circle_grid(std::exp(core_log_radius(0.3)), 64);
  EXPECT_EQ(conjugacy_residual(tower, maps, angles, grid), 0.0);
}

TEST(Conjugacy, RotatedPowersWithCorrections) {
  Gen gen(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto tower = CoveringTower::annulus(gen.uniform(0.05, 1.0), DegreeRule::periodic({2, 1, 3}));
    std::vector<RotatedPower> maps;
    for (std::size_t n = 0; n < 6; ++n) maps.push_back({gen.uniform(-pi, pi), tower.degree(n)});
    const auto beta = rotation_corrections(tower, maps);
    ASSERT_EQ(beta.size(), maps.size() + 1);
    EXPECT_EQ(beta[0], 0.0);
    const auto grid = circle_grid(std::exp(core_log_radius(tower.mu0())), 32);
    EXPECT_LT(conjugacy_residual(tower, maps, beta, grid), 1e-12);
  }
}

TEST(Conjugacy, WrongUniformiserDetected) {
  const double mu = 0.3;
  const auto tower = CoveringTower::annulus(mu, DegreeRule::constant(2));
  const std::vector<RotatedPower> maps{{pi / 4.0, 2}};
  const std::vector<double> identity(2, 0.0);
  const auto grid = circle_grid(std::exp(core_log_radius(mu)), 64);
  double min_sq = 1.0;
  for (cplx z : grid) min_sq = std::min(min_sq, std::norm(z));
  const double bound = std::abs(std::polar(1.0, pi / 4.0) - 1.0) * min_sq;
  EXPECT_GT(bound, 0.0);
  EXPECT_GE(conjugacy_residual(tower, maps, identity, grid), bound * (1.0 - 1e-12));
}

TEST(Conjugacy, DegreeMismatch) {
  const auto tower = CoveringTower::annulus(0.3, DegreeRule::constant(2));
  const std::vector<RotatedPower> maps{{0.1, 3}};
  const std::vector<double> angles(2, 0.0);
  EXPECT_THROW(rotation_corrections(tower, maps), std::invalid_argument);
  EXPECT_THROW(conjugacy_residual(tower, maps, angles, circle_grid(0.5, 4)), std::invalid_argument);
}

TEST(Witness, Examples) {
  const cplx z = std::polar(0.9, 0.3);
  const auto isometric = CoveringTower::annulus(0.5, DegreeRule::constant(1));
  for (std::size_t k : {0, 1, 10, 100}) EXPECT_DOUBLE_EQ(indiscreteness_witness(isometric, {0, z}, k), 2.0 * pi);
  const auto doubling = CoveringTower::annulus(0.5, DegreeRule::constant(2));
  EXPECT_DOUBLE_EQ(indiscreteness_witness(doubling, {0, z}, 10), 2.0 * pi / 1024.0);
}

TEST(Witness, MixedRuleMatchesRootExtraction) {
  const auto tower = CoveringTower::annulus(0.05, DegreeRule::periodic({2, 1, 3, 1, 2}));
  const cplx z = std::polar(0.95, 0.7);
  for (std::size_t k = 1; k <= 8; ++k) {
    const auto roots = fiber_by_roots(tower, z, k);
    const auto fiber = fiber_on_circle(tower, {0, z}, k);
    ASSERT_EQ(BigInt(roots.size()), tower.degree_product(k));
    ASSERT_EQ(fiber.size(), roots.size());
    EXPECT_NEAR(min_angular_gap(roots), indiscreteness_witness(tower, {0, z}, k), 1e-9);
    for (cplx r : roots) {
      double nearest = 1.0;
      for (cplx f : fiber) nearest = std::min(nearest, std::abs(r - f));
      EXPECT_LT(nearest, 1e-9);
    }
  }
  EXPECT_EQ(tower.degree_product(5), 12);
  EXPECT_DOUBLE_EQ(indiscreteness_witness(tower, {0, z}, 5), 2.0 * pi / 12.0);
}

TEST(Witness, FiberIsTheFullPreimage) {
  Gen gen(44);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<unsigned> cycle(gen.index(1, 4));
    for (auto& d : cycle) d = static_cast<unsigned>(gen.index(1, 3));
    const auto tower = CoveringTower::annulus(0.02, DegreeRule::periodic(cycle));
    const cplx z = gen.on_circle(gen.uniform(0.9, 0.99));
    const std::size_t k = gen.index(0, 6);
    const auto fiber = fiber_on_circle(tower, {0, z}, k);
    ASSERT_EQ(BigInt(fiber.size()), tower.degree_product(k));
    TowerPoint target{0, z};
    for (std::size_t n = 0; n < k; ++n) target = tower_map(tower, target);
    for (cplx w : fiber) {
      TowerPoint image{0, w};
      for (std::size_t n = 0; n < k; ++n) image = tower_map(tower, image);
      EXPECT_LT(std::abs(image.z - target.z), 1e-12);
    }
  }
}

TEST(Witness, FiberCap) {
  const auto tower = CoveringTower::annulus(0.5, DegreeRule::constant(2));
  EXPECT_THROW(fiber_on_circle(tower, {0, {0.9, 0.0}}, 30, 1000), std::length_error);
}

TEST(InjDecay, IsometricTowerIsConstant) {
  const auto tower = CoveringTower::annulus(0.7, DegreeRule::constant(1));
  const auto out = inj_decay(tower, {0, {0.5, 0.0}}, 20);
  ASSERT_EQ(out.values.size(), 20u);
  for (double v : out.values) EXPECT_EQ(v, out.values.front());
}

TEST(InjDecay, DoublingCoreClosedForm) {
  const double mu0 = 1.0;
  const auto tower = CoveringTower::annulus(mu0, DegreeRule::constant(2));
  const auto out = inj_decay(tower, {0, {std::exp(core_log_radius(mu0)), 0.0}}, 16);
  ASSERT_EQ(out.values.size(), 16u);
  for (std::size_t n = 0; n < out.values.size(); ++n) {
    const double mu = mu0 * std::ldexp(1.0, static_cast<int>(n));
    EXPECT_NEAR(out.values[n], pi / (2.0 * mu), 1e-12 * pi / (2.0 * mu));
  }
  EXPECT_LT(out.values.back(), 1e-3);
}

TEST(InjDecay, MonotoneAlongOrbits) {
  Gen gen(45);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<unsigned> cycle(gen.index(1, 4));
    for (auto& d : cycle) d = static_cast<unsigned>(gen.index(1, 3));
    const auto tower = CoveringTower::annulus(gen.uniform(0.05, 3.0), DegreeRule::periodic(cycle));
    const double log_s = gen.uniform(tower.log_inner_radius(0), 0.0) * (1.0 - 1e-6);
    const auto out = inj_decay(tower, {0, std::polar(std::exp(log_s), 1.0)}, 30);
    for (std::size_t n = 1; n < out.values.size(); ++n) EXPECT_LE(out.values[n], out.values[n - 1] + 1e-12);
  }
}

TEST(InjDecay, PuncturedDiscCusp) {
  const double s = 0.01;
  const auto tower = CoveringTower::punctured_disc(DegreeRule::periodic({2, 3}));
  const auto out = inj_decay(tower, {0, {s, 0.0}}, 12);
  ASSERT_EQ(out.values.size(), 12u);
  // In the cusp the horocycle through s^{D_n} has length 2 pi / (D_n log(1/s)).
  for (std::size_t n = 0; n < out.values.size(); ++n) {
    const double length = 2.0 * pi / (tower.degree_product(n).convert_to<double>() * std::log(1.0 / s));
    EXPECT_NEAR(out.values[n], hypgeo::cusp_injectivity(std::log(length)), 1e-15);
    EXPECT_NEAR(out.values[n], 0.5 * length, 1e-12 * length);
  }
  EXPECT_LT(out.values.back(), 1e-4);
}

TEST(InjDecay, TruncatesOnOverflow) {
  const auto tower = CoveringTower::annulus(1.0, DegreeRule::constant(2));
  const auto out = inj_decay(tower, {0, {0.5, 0.0}}, 1100);
  EXPECT_TRUE(out.truncated);
  EXPECT_LT(out.values.size(), 1100u);
  EXPECT_GT(out.values.size(), 1000u);
}

TEST(Dichotomy, AcrossBuiltInRules) {
  const std::vector<DegreeRule> rules{DegreeRule::constant(1),        DegreeRule::constant(2),
                                      DegreeRule::constant(3),        DegreeRule::periodic({1, 1}),
                                      DegreeRule::periodic({1, 1, 2}), DegreeRule::periodic({2, 1, 3, 1, 2})};
  for (const auto& rule : rules) {
    const auto tower = CoveringTower::annulus(0.5, rule);
    const TowerPoint p{0, std::polar(0.6, 0.2)};
    const bool expands = rule.expands_infinitely_often().value();
    const bool witness_vanishes = indiscreteness_witness(tower, p, 120) < 1e-9;
    const auto inj = inj_decay(tower, p, 120);
    const bool inj_vanishes = inj.values.back() < 1e-9;
    EXPECT_EQ(expands, witness_vanishes);
    EXPECT_EQ(expands, inj_vanishes);
  }
}

}  // namespace
}  // namespace wander
