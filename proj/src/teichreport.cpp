#include "wander/teichreport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wander {

const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::FiniteModulusAnnulus: return "FiniteModulusAnnulus";
    case ComponentKind::PuncturedDisc: return "PuncturedDisc";
    case ComponentKind::SimplyConnectedPiece: return "SimplyConnectedPiece";
    case ComponentKind::Other: return "Other";
  }
  return "?";
}

const char* to_string(Contribution c) {
  switch (c) {
    case Contribution::Infinite: return "infinite";
    case Contribution::One: return "1";
    case Contribution::Zero: return "0";
    case Contribution::Unknown: return "unknown";
  }
  return "?";
}

Contribution component_dimension(const ComponentReport& c) {
  if (c.kind == ComponentKind::FiniteModulusAnnulus && !(c.modulus > 0.0 && std::isfinite(c.modulus)))
    throw std::invalid_argument("component '" + c.source + "': annulus modulus must be positive and finite");
  const bool doubly_connected = c.kind == ComponentKind::FiniteModulusAnnulus || c.kind == ComponentKind::PuncturedDisc;
  if (c.relation == Relation::Indiscrete && !doubly_connected)
    throw std::invalid_argument("component '" + c.source + "': an indiscrete relation needs a doubly connected component");

  if (c.relation == Relation::Undetermined || !c.structural) return Contribution::Unknown;
  if (c.relation == Relation::Discrete) return Contribution::Infinite;
  return c.kind == ComponentKind::FiniteModulusAnnulus ? Contribution::One : Contribution::Zero;
}

std::string DimensionVerdict::describe() const {
  switch (kind) {
    case DimensionKind::Finite: return "Finite(" + std::to_string(value) + ")";
    case DimensionKind::Unknown: return "Unknown";
    case DimensionKind::Infinite: return "Infinite";
  }
  return "?";
}

bool operator<(const DimensionVerdict& a, const DimensionVerdict& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  return a.kind == DimensionKind::Finite && a.value < b.value;
}

DimensionVerdict total_dimension(std::span<const ComponentReport> components, bool infinitely_many) {
  DimensionVerdict verdict;
  for (const auto& c : components) verdict.breakdown.push_back(component_dimension(c));

  const auto has = [&](Contribution x) {
    return std::find(verdict.breakdown.begin(), verdict.breakdown.end(), x) != verdict.breakdown.end();
  };
  if (infinitely_many || has(Contribution::Infinite)) {
    verdict.kind = DimensionKind::Infinite;
  } else if (has(Contribution::Unknown)) {
    verdict.kind = DimensionKind::Unknown;
  } else {
    verdict.kind = DimensionKind::Finite;
    verdict.value = static_cast<std::size_t>(std::count(verdict.breakdown.begin(), verdict.breakdown.end(), Contribution::One));
  }
  return verdict;
}

}  // namespace wander
