#include <gtest/gtest.h>

#include "support.hpp"
#include "wander/teichreport.hpp"

namespace wander {
namespace {

using testing::Gen;

ComponentReport annulus(double mu, Relation r, bool structural = true) {
  return {ComponentKind::FiniteModulusAnnulus, mu, r, structural, "annulus"};
}
ComponentReport punctured(Relation r) { return {ComponentKind::PuncturedDisc, 0.0, r, true, "punctured"}; }
ComponentReport piece(Relation r) { return {ComponentKind::SimplyConnectedPiece, 0.0, r, true, "piece"}; }

TEST(ComponentDimension, Examples) {
  EXPECT_EQ(component_dimension(piece(Relation::Discrete)), Contribution::Infinite);
  EXPECT_EQ(component_dimension(annulus(0.7, Relation::Indiscrete)), Contribution::One);
  EXPECT_EQ(component_dimension(punctured(Relation::Indiscrete)), Contribution::Zero);
  EXPECT_EQ(component_dimension(annulus(0.7, Relation::Discrete)), Contribution::Infinite);
  EXPECT_EQ(component_dimension(punctured(Relation::Undetermined)), Contribution::Unknown);
  EXPECT_EQ(component_dimension({ComponentKind::Other, 0.0, Relation::Discrete, true, "x"}), Contribution::Infinite);
}

TEST(ComponentDimension, HeuristicVerdictsAreUnknown) {
  EXPECT_EQ(component_dimension(annulus(0.7, Relation::Indiscrete, false)), Contribution::Unknown);
  EXPECT_EQ(component_dimension(annulus(0.7, Relation::Discrete, false)), Contribution::Unknown);
}

TEST(ComponentDimension, InvariantViolations) {
  EXPECT_THROW(component_dimension(piece(Relation::Indiscrete)), std::invalid_argument);
  EXPECT_THROW(component_dimension({ComponentKind::Other, 0.0, Relation::Indiscrete, true, "x"}), std::invalid_argument);
  EXPECT_THROW(component_dimension(annulus(0.0, Relation::Indiscrete)), std::invalid_argument);
  EXPECT_THROW(component_dimension(annulus(-1.0, Relation::Discrete)), std::invalid_argument);
  EXPECT_THROW(component_dimension(annulus(std::numeric_limits<double>::infinity(), Relation::Indiscrete)),
               std::invalid_argument);
}

TEST(TotalDimension, Examples) {
  const std::vector<ComponentReport> one{annulus(0.5, Relation::Indiscrete), punctured(Relation::Indiscrete),
                                         punctured(Relation::Indiscrete)};
  const auto v1 = total_dimension(one);
  EXPECT_EQ(v1.kind, DimensionKind::Finite);
  EXPECT_EQ(v1.value, 1u);
  EXPECT_EQ(v1.describe(), "Finite(1)");
  EXPECT_EQ(v1.breakdown, (std::vector{Contribution::One, Contribution::Zero, Contribution::Zero}));

  const auto empty = total_dimension({});
  EXPECT_EQ(empty.describe(), "Finite(0)");

  const std::vector<ComponentReport> mixed{piece(Relation::Discrete), annulus(0.5, Relation::Indiscrete)};
  EXPECT_EQ(total_dimension(mixed).describe(), "Infinite");

  const std::vector<ComponentReport> unknown{annulus(0.5, Relation::Indiscrete), punctured(Relation::Undetermined)};
  EXPECT_EQ(total_dimension(unknown).describe(), "Unknown");

  const std::vector<ComponentReport> dominated{punctured(Relation::Undetermined), piece(Relation::Discrete)};
  EXPECT_EQ(total_dimension(dominated).describe(), "Infinite");

  EXPECT_EQ(total_dimension({}, true).describe(), "Infinite");
}

TEST(TotalDimension, CountsAnnuli) {
  for (std::size_t m = 0; m < 6; ++m) {
    std::vector<ComponentReport> list;
    for (std::size_t i = 0; i < m; ++i) list.push_back(annulus(0.1 + i, Relation::Indiscrete));
    for (std::size_t i = 0; i < 4; ++i) list.push_back(punctured(Relation::Indiscrete));
    const auto v = total_dimension(list);
    EXPECT_EQ(v.kind, DimensionKind::Finite);
    EXPECT_EQ(v.value, m);
  }
}

TEST(TotalDimension, Order) {
  const DimensionVerdict f0{DimensionKind::Finite, 0, {}};
  const DimensionVerdict f3{DimensionKind::Finite, 3, {}};
  const DimensionVerdict unknown{DimensionKind::Unknown, 0, {}};
  const DimensionVerdict infinite{DimensionKind::Infinite, 0, {}};
  EXPECT_TRUE(f0 < f3);
  EXPECT_TRUE(f3 < unknown);
  EXPECT_TRUE(unknown < infinite);
  EXPECT_FALSE(f3 < f0);
  EXPECT_FALSE(infinite < infinite);
}

TEST(TotalDimension, MonotoneUnderAddingComponents) {
  Gen gen(61);
  const auto random_component = [&] {
    switch (gen.index(0, 5)) {
      case 0: return annulus(gen.uniform(0.01, 5.0), Relation::Indiscrete);
      case 1: return punctured(Relation::Indiscrete);
      case 2: return piece(Relation::Discrete);
      case 3: return annulus(gen.uniform(0.01, 5.0), Relation::Discrete);
      case 4: return punctured(Relation::Undetermined);
      default: return annulus(gen.uniform(0.01, 5.0), Relation::Indiscrete, false);
    }
  };
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ComponentReport> list;
    auto before = total_dimension(list);
    for (std::size_t k = 0; k < gen.index(1, 8); ++k) {
      list.push_back(random_component());
      const auto after = total_dimension(list);
      EXPECT_FALSE(after < before) << before.describe() << " -> " << after.describe();
      before = after;
    }
  }
}

TEST(TotalDimension, ExactOnNormalForms) {
  // Components whose relations come from the structural detectors.
  const TowerPoint p{0, {0.6, 0.0}};
  std::vector<ComponentReport> list;
  for (double mu : {0.3, 1.2}) {
    const auto v = discreteness_detect(CoveringTower::annulus(mu, DegreeRule::periodic({1, 2})), p);
    list.push_back({ComponentKind::FiniteModulusAnnulus, mu, v.verdict, v.structural, "tower"});
  }
  const auto cusp = discreteness_detect(CoveringTower::punctured_disc(DegreeRule::constant(3)), p);
  list.push_back({ComponentKind::PuncturedDisc, 0.0, cusp.verdict, cusp.structural, "cusp"});
  const auto finite = total_dimension(list);
  EXPECT_EQ(finite.describe(), "Finite(2)");

  const auto iso = discreteness_detect(MapSequence::rotation_tail({}, 0.4), {0.2, 0.0});
  list.push_back({ComponentKind::SimplyConnectedPiece, 0.0, iso.verdict, iso.structural, "isometric"});
  const auto infinite = total_dimension(list);
  EXPECT_EQ(infinite.describe(), "Infinite");
  for (auto c : infinite.breakdown) EXPECT_NE(c, Contribution::Unknown);
}

}  // namespace
}  // namespace wander
