#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "wander/blaschke.hpp"

namespace wander::testing {

// Seeded generators for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * double(rng_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t lo, std::size_t hi) { return lo + std::size_t(rng_() % (hi - lo + 1)); }

  // Uniform in the disc of the given radius.
  cplx in_disc(double radius = 1.0) {
    const double r = radius * std::sqrt(uniform());
    return std::polar(r, uniform(0.0, 2.0 * std::numbers::pi));
  }

  cplx on_circle(double radius) { return std::polar(radius, uniform(0.0, 2.0 * std::numbers::pi)); }

  // Random origin-fixing Blaschke product of the given degree whose other
  // zeros have modulus at most max_zero.
  BlaschkeMap origin_fixing(std::size_t degree, double max_zero = 0.9) {
    std::vector<cplx> zeros{cplx{0.0, 0.0}};
    while (zeros.size() < degree) zeros.push_back(in_disc(max_zero));
    return BlaschkeMap(zeros, std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)));
  }

  // Degree-2 origin-fixing product with |g'(0)| = lambda exactly.
  BlaschkeMap quadratic_with_lambda(double lambda) {
    return BlaschkeMap({cplx{0.0, 0.0}, on_circle(lambda)}, std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)));
  }

 private:
  std::mt19937_64 rng_;
};

// z (z + lambda) / (1 + lambda z).
inline BlaschkeMap quadratic(double lambda) { return BlaschkeMap({cplx{0.0, 0.0}, cplx{-lambda, 0.0}}); }

// Equally spaced points of the square [-r, r]^2 that lie in the open disc of radius r.
inline std::vector<cplx> square_grid(double r, std::size_t per_side) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < per_side; ++i) {
    for (std::size_t j = 0; j < per_side; ++j) {
      const cplx z{-r + 2.0 * r * (double(i) + 0.5) / double(per_side), -r + 2.0 * r * (double(j) + 0.5) / double(per_side)};
      if (std::abs(z) < r) out.push_back(z);
    }
  }
  return out;
}

// Number of pairs of distinct sample points whose images lie within
// `resolution` of each other (sweep over images sorted by real part).
template <class F>
std::size_t count_collisions(const std::vector<cplx>& points, F&& f, double resolution) {
  std::vector<std::pair<cplx, std::size_t>> images;
  images.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) images.emplace_back(f(points[i]), i);
  std::sort(images.begin(), images.end(), [](const auto& a, const auto& b) { return a.first.real() < b.first.real(); });
  std::size_t collisions = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size() && images[j].first.real() - images[i].first.real() <= resolution; ++j) {
      if (std::abs(images[j].first - images[i].first) <= resolution) ++collisions;
    }
  }
  return collisions;
}

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, std::size_t n = 2000) {
  const double h = (b - a) / double(n);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) sum += f(a + h * double(i)) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace wander::testing
