#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wander/orbitrel.hpp"

namespace wander {

enum class ComponentKind { FiniteModulusAnnulus, PuncturedDisc, SimplyConnectedPiece, Other };

const char* to_string(ComponentKind k);

struct ComponentReport {
  ComponentKind kind = ComponentKind::Other;
  double modulus = 0.0;  // FiniteModulusAnnulus only
  Relation relation = Relation::Undetermined;
  // Heuristic relation verdicts never produce a dimension.
  bool structural = true;
  std::string source;

  friend bool operator==(const ComponentReport&, const ComponentReport&) = default;
};

enum class Contribution { Infinite, One, Zero, Unknown };

const char* to_string(Contribution c);

// Throws std::invalid_argument for reports violating the invariants
// (indiscrete relation on a non doubly connected kind, bad modulus).
Contribution component_dimension(const ComponentReport& c);

enum class DimensionKind { Finite, Unknown, Infinite };

struct DimensionVerdict {
  DimensionKind kind = DimensionKind::Finite;
  std::size_t value = 0;  // Finite only
  std::vector<Contribution> breakdown;

  std::string describe() const;
};

// Total order Finite(m) < Finite(m+1) < Unknown < Infinite.
bool operator<(const DimensionVerdict& a, const DimensionVerdict& b);

DimensionVerdict total_dimension(std::span<const ComponentReport> components, bool infinitely_many = false);

}  // namespace wander
