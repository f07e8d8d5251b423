#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wander/innerseq.hpp"

namespace wander {

// Radius R(c) on which every origin-fixing self-map of the disc with
// |g'(0)| >= c is univalent: critical points lie outside
// R1 = tanh(artanh(c) / 2), and R = h_c(R1). R(1) = 1.
double univalence_radius(double c);

// E_n^m(z) = G_n^m(z) / Lambda_n^m.
cplx koenigs_E(const MapSequence& seq, std::size_t n, std::size_t m, cplx z);

struct LinearizeOptions {
  double tolerance = 1e-10;
  std::size_t max_m = std::size_t{1} << 16;  // cap on m - n
};

// phi_n at a set of points by doubling m - n until the Cauchy gap
// sup |E_n^{n+s} - E_n^{n+s/2}| drops below the tolerance.
struct PhiSamples {
  std::vector<cplx> values;
  std::size_t m_used = 0;
  double cauchy_gap = 0.0;
  bool converged = false;
};

PhiSamples phi_samples(const MapSequence& seq, std::size_t n, std::span<const cplx> points,
                       const LinearizeOptions& opts);

enum class LinearizationStatus { Converged, NonConvergent };

struct LinearizationResult {
  std::size_t n = 0;
  std::size_t m_used = 0;
  std::vector<cplx> grid;
  std::vector<cplx> phi_values;
  // Certified radius Q: Lambda_1 when not contracting, R(inf lambda) when
  // contracting. Residuals are certified only on |z| < Q.
  double univalence_radius = 0.0;
  double residual_sup = 0.0;
  std::vector<double> residuals;  // per grid point
  double cauchy_gap = 0.0;
  LinearizationStatus status = LinearizationStatus::NonConvergent;
  InternalVerdict regime = InternalVerdict::Undetermined;
  std::vector<std::string> warnings;
};

// Radius Q of the region where the limit is certified. Throws HypothesisError
// for Undetermined sequences or when inf lambda_n = 0.
double certified_radius(const MapSequence& seq);

LinearizationResult koenigs_limit(const MapSequence& seq, std::size_t n, std::span<const cplx> grid,
                                  const LinearizeOptions& opts = {});

struct ExtendedValue {
  cplx value;
  std::size_t m = 0;  // number of forward steps used
};

// phi_n(z) = phi_{n+m}(G_n^m(z)) / Lambda_n^m, with m the least index such that
// |G_n^m(z)| < R (plus extra_steps). Contracting sequences only; throws
// HypothesisError otherwise and NonConvergentError when no admissible m is
// found within the horizon or phi_{n+m} does not converge.
ExtendedValue extend_by_dynamics(const MapSequence& seq, std::size_t n, cplx z, const LinearizeOptions& opts = {},
                                 std::size_t extra_steps = 0, std::size_t horizon = kDefaultHorizon);

// sup over the grid of |phi_{n+1}(g_n(z)) - lambda_n phi_n(z)|, each phi
// computed independently to the requested tolerance.
double commutation_residual(const MapSequence& seq, std::size_t n, std::span<const cplx> grid,
                            const LinearizeOptions& opts = {});

enum class SurfaceKind { PlaneMinusSet, DiscMinusSet };

const char* to_string(SurfaceKind k);

struct QuotientSurfaceModel {
  SurfaceKind kind = SurfaceKind::DiscMinusSet;
  std::vector<cplx> marked_points;
  bool countable_flag = false;
  std::size_t levels_scanned = 0;
  // Largest Cauchy gap among the phi evaluations behind the marked points.
  double max_cauchy_gap = 0.0;
};

struct QuotientOptions {
  std::size_t levels = 12;       // critical data of g_0 .. g_{levels-1}
  double merge_tolerance = 1e-9;
  LinearizeOptions linearize;
};

// Marked points are the phi_0-images of the critical values of g_k for
// k < levels, phi_{k+1}(g_k(c)) / Lambda_0^{k+1} = phi_k(c) / Lambda_0^k,
// merged within the tolerance (one per grand orbit).
QuotientSurfaceModel quotient_surface_model(const MapSequence& seq, const QuotientOptions& opts = {});

}  // namespace wander
