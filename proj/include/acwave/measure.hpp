#pragma once

// ============================================================================
// Norms over the half-space slab: the weighted energy norm H with its
// degenerate boundary weight, weighted L^2 norms with an x_d power, plain and
// mixed L^q_t L^r_x space-time norms, and the dyadic surrogate for the
// higher-order data norm of frequency-localized fields.
//
// Spatial integrals split into an exact tangential lattice sum (cell volume
// times the sample sum, exact for trigonometric polynomials at r = 2) and a
// normal quadrature: graded composite Simpson for the weighted norms, with the
// possibly singular first cell handled by a two-term expansion about x_d = 0,
// and trapezoid for the mixed norms whose integrands are only C^0 in r != 2
// powers. r = infinity and q = infinity are grid maxima, reported as lower
// bounds on the true sup.
// ============================================================================

#include "acwave/synthesis.hpp"

#include <string>
#include <vector>

namespace acwave::measure {

/// Mixed-norm request: exponents q (time) and r (space), both >= 2 or
/// infinity, a time interval, and the number of uniform samples (>= 4,
/// endpoints included) the caller supplies as slices.
struct NormRequest {
  double q = 2.0;
  double r = 2.0;
  double t0 = 0.0;
  double t1 = 1.0;
  int time_samples = 16;

  void validate() const;
};

/// Result of a mixed-norm evaluation: the space-time value, the inner spatial
/// norm at each time sample, and a second-difference estimate of the outer
/// trapezoid error (0 for q = infinity).
struct NormReport {
  double q = 0.0;
  double r = 0.0;
  double value = 0.0;
  std::vector<double> per_time_values;
  double error_estimate = 0.0;
};

/// Energy norm of a data pair (s, w):
///   ||(s, w)||_H = ( int x_d^{1/kappa - 1} (|s|^2 + kappa x_d |w|^2) dx )^{1/2},
/// where w is the full spatial gradient magnitude field of the position
/// component (see gradient_magnitude). Fields must share the tangential grid
/// and normal grid; the tangential integral is the exact lattice sum, the
/// normal integral graded Simpson with an analytic first cell when the grid
/// starts at x_d = 0 (the weight is singular there for kappa > 1).
double h_norm(const synthesis::Field& s_field, const synthesis::Field& w_field,
              double kappa);

/// Pointwise magnitude of the full spatial gradient, sqrt(sum_a |d_a u|^2),
/// assembled from the spectral tangential derivatives and the per-harmonic
/// normal derivative. Requires the profile bank; the result carries none (its
/// samples are no longer a harmonic synthesis).
synthesis::Field gradient_magnitude(const synthesis::Field& field);

/// Weighted L^2 norm ( int x_d^{2 alpha} |u|^2 dx )^{1/2}. Throws a
/// ValidationError when the integral diverges at the boundary: 2 alpha <= -1
/// with a nonvanishing boundary slice (or alpha <= -1 with a nonvanishing
/// first interior slice).
double weighted_l2(const synthesis::Field& field, double alpha);

/// Spatial L^r norm of a single field: exact tangential cell sum, trapezoid
/// across the normal grid; r = infinity is the grid maximum.
double lr_norm(const synthesis::Field& field, double r);

/// Mixed L^q_t L^r_x norm of uniformly spaced time slices over
/// [request.t0, request.t1]: inner lr_norm per slice, outer composite
/// trapezoid in time (maximum for q = infinity).
NormReport mixed_norm(const std::vector<synthesis::Field>& time_slices,
                      const NormRequest& request);

/// Dyadic surrogate for the order-2s data norm of 2^{2j}-localized data:
/// 2^{2js} times the energy norm.
double h2s_surrogate(double h_value, int j, double s);

/// Compact JSON serialization of a NormReport:
/// {"q":..,"r":..,"value":..,"per_time_values":[..],"error_estimate":..};
/// infinite exponents are encoded as the string "inf".
std::string to_json(const NormReport& report);

}  // namespace acwave::measure
