#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wander/blaschke.hpp"

namespace wander {

using BigInt = boost::multiprecision::cpp_int;

enum class DegreeRuleKind {
  Constant,  // d_n = values[0]
  Periodic,  // d_n = values[n mod size]
  Explicit,  // finite list, no tail information
};

class DegreeRule {
 public:
  static DegreeRule constant(unsigned d);
  static DegreeRule periodic(std::vector<unsigned> cycle);
  static DegreeRule explicit_list(std::vector<unsigned> degrees);

  DegreeRuleKind kind() const { return kind_; }
  const std::vector<unsigned>& values() const { return values_; }
  std::optional<std::size_t> length() const;
  // Throws std::out_of_range past the end of an explicit list.
  unsigned degree(std::size_t n) const;
  // Whether d_n >= 2 for infinitely many n; empty for explicit lists.
  std::optional<bool> expands_infinitely_often() const;

  friend bool operator==(const DegreeRule&, const DegreeRule&) = default;

 private:
  DegreeRuleKind kind_ = DegreeRuleKind::Constant;
  std::vector<unsigned> values_{1};
};

enum class TowerKind { Annulus, PuncturedDisc };

// Levels V_n modelled as round annuli {exp(-2 pi mu_n) < |z| < 1} (or punctured
// discs) with dynamics z -> z^{d_n}; mu_{n+1} = d_n mu_n.
class CoveringTower {
 public:
  static CoveringTower annulus(double mu0, DegreeRule degrees);
  static CoveringTower punctured_disc(DegreeRule degrees);

  TowerKind kind() const { return kind_; }
  double mu0() const { return mu0_; }
  const DegreeRule& degrees() const { return degrees_; }
  unsigned degree(std::size_t n) const { return degrees_.degree(n); }

  // D_n = d_{n-1} ... d_0 (exact), memoised.
  BigInt degree_product(std::size_t n) const;

  // log of the inner radius at level n (-2 pi mu_n), -inf for punctured discs.
  double log_inner_radius(std::size_t n) const;

 private:
  struct Cache;
  TowerKind kind_ = TowerKind::Annulus;
  double mu0_ = 0.0;
  DegreeRule degrees_;
  std::shared_ptr<Cache> cache_;
};

// mu_n = mu0 * D_n. Throws std::logic_error for punctured discs and
// std::overflow_error when mu_n is not representable.
double push_modulus(const CoveringTower& tower, std::size_t n);

struct TowerPoint {
  std::size_t level = 0;
  cplx z;
};

bool in_level_model(const CoveringTower& tower, const TowerPoint& p);

// (n, z) -> (n + 1, z^{d_n}). Throws DomainError for points off the model.
TowerPoint tower_map(const CoveringTower& tower, const TowerPoint& p);

// f_n(z) = e^{i angle} z^degree.
struct RotatedPower {
  double angle = 0.0;
  unsigned degree = 1;
  cplx operator()(cplx z) const;
};

// Angles beta_n of the uniformisers phi_n(z) = e^{i beta_n} z that conjugate
// the rotated powers to the tower: beta_0 = 0, beta_{n+1} = d_n beta_n - alpha_n.
std::vector<double> rotation_corrections(const CoveringTower& tower, std::span<const RotatedPower> maps);

// sup |phi_{n+1}(f_n(z)) - phi_n(z)^{d_n}| over levels n < maps.size(), with
// the level-0 grid pushed forward by the maps. Throws std::invalid_argument on
// a degree mismatch.
double conjugacy_residual(const CoveringTower& tower, std::span<const RotatedPower> maps,
                          std::span<const double> uniformizer_angles, std::span<const cplx> grid);

// Level-0 points on the circle through p whose image at level k equals that
// of p: the D_k-th roots of p^{D_k}. Throws std::length_error above cap.
std::vector<cplx> fiber_on_circle(const CoveringTower& tower, const TowerPoint& p, std::size_t k,
                                  std::size_t cap = std::size_t{1} << 20);

// Minimal angular gap 2 pi / D_k between the fiber points on the circle.
double indiscreteness_witness(const CoveringTower& tower, const TowerPoint& p, std::size_t k);

struct InjDecay {
  std::vector<double> values;  // inj at levels 0 .. levels-1
  bool truncated = false;      // orbit left the representable range
};

// Injectivity radius along the orbit of p (a level-0 point). Punctured-disc
// towers need p inside the standard cusp collar.
InjDecay inj_decay(const CoveringTower& tower, const TowerPoint& p, std::size_t levels);

}  // namespace wander
