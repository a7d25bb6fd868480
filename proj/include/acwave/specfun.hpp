#pragma once

#include <string>

namespace acwave::specfun {

// ============================================================================
// Self-contained special functions: log-Gamma, digamma, Pochhammer symbols,
// generalized Laguerre functions of (possibly non-integer) degree, and the
// confluent hypergeometric second solution U(a,b,z). Everything is evaluated
// by explicit series with a uniform truncation rule, so downstream code can
// carry honest error estimates.
//
// Truncation rule for all non-terminating series: stop once two consecutive
// terms fall below 1e-16 times the running sum in magnitude; the larger of the
// two is reported as abs_error_estimate. Terminating series report 0.
// ============================================================================

/// Result of a truncated series evaluation.
struct SeriesValue {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int terms_used = 0;
};

/// Value together with first and second z-derivatives, each obtained by
/// termwise differentiation of the same series.
struct SeriesTriple {
  SeriesValue f;
  double df = 0.0;
  double d2f = 0.0;
};

/// log Gamma(x) for x > 0 (Spouge approximation, a = 32).
/// Relative accuracy of exp(log_gamma(x)) vs Gamma(x) is ~1e-15 on [1e-3, 170].
double log_gamma(double x);

/// Digamma psi(x) for x not a nonpositive integer (asymptotic series with
/// upward recurrence; reflection for x < 1/2).
double digamma(double x);

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), k >= 0; (a)_0 = 1.
/// Computed as a direct product, exact zero when the product crosses zero.
double pochhammer(double a, int k);

/// Generalized Laguerre function
///   L^lambda_nu(z) = Gamma(lambda+nu+1)/Gamma(nu+1)
///                    * sum_k (-nu)_k z^k / (Gamma(k+lambda+1) k!).
/// Terminates after nu+1 terms when nu is a nonnegative integer (tested with
/// tolerance 1e-12); the terminating sum is accumulated in double-double
/// arithmetic to survive the alternating-sign cancellation. Non-terminating
/// evaluation requires z <= 80 (twice the largest supported profile
/// truncation) and nu > -1, lambda + nu + 1 > 0.
SeriesValue laguerre(double lambda, double nu, double z);

/// laguerre value plus dL/dz, d2L/dz2 from the termwise-differentiated series.
SeriesTriple laguerre_d2(double lambda, double nu, double z);

/// Confluent hypergeometric U(a,b,z), z > 0, via the two-series formula for
/// non-integer b and the logarithmic (digamma) branch for positive integer b;
/// nonpositive integer b routes through U(a,b,z) = z^{1-b} U(a-b+1, 2-b, z).
SeriesValue hyp_u(double a, double b, double z);

/// hyp_u value plus dU/dz, d2U/dz2 (termwise differentiation, including the
/// log z and z^{1-b} prefactor terms of the integer-b branch).
SeriesTriple hyp_u_d2(double a, double b, double z);

/// True if x is within tol of an integer (shared integer test, default 1e-12).
bool near_integer(double x, double tol = 1e-12);

}  // namespace acwave::specfun
