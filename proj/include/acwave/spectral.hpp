#pragma once

// Boundary-trapped mode profiles of the degenerate half-line operator. The
// tangentially reduced equation in the scaled coordinate s = |xi'| x_d is
//
//     kappa s B'' + B' + (mu - kappa s) B = 0,     B(0) = 1,
//
// whose regular solution is B(s) = e^{-s} L^{1/kappa-1}_nu(2s) / L(0) with
// degree nu = (mu - 1)/(2 kappa). The series terminates (bound state) exactly
// when nu is a nonnegative integer, i.e. mu = 2 kappa n + 1.

#include <limits>
#include <optional>
#include <vector>

namespace acwave::spectral {

struct ModeSpec {
  double kappa = 1.0;
  double mu = 1.0;
  std::optional<int> n;  // quantum number when mu = 2 kappa n + 1

  static ModeSpec quantized(double kappa, int n);
  void validate() const;  // throws ValidationError on violated invariants
};

struct ModeProfile {
  ModeSpec spec;
  std::vector<double> s_grid;  // strictly increasing, s_grid[0] <= 1e-6
  std::vector<double> B, dB, d2B;
  double truncation_s_max = 0.0;
  // estimated relative admixture of the exponentially growing second solution
  // at the truncation point; 0 for terminating (quantized) series
  double contamination_bound = 0.0;
};

struct WkbReport {
  double small_s_logderiv = 0.0;  // dB/B at the first node; -mu for the regular branch
  double large_s_logderiv = 0.0;  // dB/B at the last node; -1 once the profile decays
  // zero-spacing law 2 (sqrt(s_{k+1}) - sqrt(s_k)) sqrt(mu/kappa) = pi:
  // max relative deviation for gaps with midpoint <= mu/(6 kappa), where the
  // small-s phase approximation is valid, and for midpoints in
  // (mu/(4 kappa), mu/(2 kappa)), where the turning point already bends it
  double zero_spacing_dev_inner = std::numeric_limits<double>::quiet_NaN();
  double zero_spacing_dev_bulk = std::numeric_limits<double>::quiet_NaN();
  int zeros_found = 0;
  std::vector<double> zeros;
};

// mu of the n-th bound state: 2 kappa n + 1.
double quantized_mu(int n, double kappa);

// Graded grid on [0, s_max]: first interval 1e-6, geometric growth (ratio
// 1.05) capped at 0.015, then uniform. Resolves both the degenerate weight
// at s = 0 and the interior oscillation of high modes.
std::vector<double> graded_s_grid(double s_max, bool include_zero = true);

// Termwise-differentiated series evaluation of the regular solution on the
// graded grid. Throws NumericalError when the non-terminating (non-integer
// nu) truncation would admit a growing-solution admixture above 1e-6.
ModeProfile closed_form_profile(const ModeSpec& spec, double xi_norm,
                                double s_max);

// max over the grid of |kappa s B'' + B' + (mu - kappa s) B| / (1 + |B|).
double mode_ode_residual(const ModeProfile& profile);

// Q(f) = int_0^inf kappa x^{1/kappa} ((f')^2 + |xi'|^2 f^2) dx with
// f(x) = B(|xi'| x); graded-grid Simpson quadrature. Throws NumericalError
// when the integrand fails to vanish at either end (singular branch at the
// origin, or insufficient decay at truncation).
double quadratic_form(const ModeProfile& profile, double xi_norm, double kappa);

// Independent oracle: adaptive Runge-Kutta integration of the mode equation
// from s = 1e-6 with regular-branch series data; no shared code with the
// closed form. Throws NumericalError if |B| exceeds 1e6 before s_max
// (signals a non-quantized mu).
ModeProfile shooting_oracle(const ModeSpec& spec, double kappa, double s_max);

// Asymptotic-regime diagnostics: boundary log-derivatives and the zero
// spacing law (zeros located by Hermite interpolation between grid nodes).
// Zero checks require spec.n present and >= 8; otherwise those fields stay NaN.
WkbReport wkb_diagnostics(const ModeProfile& profile);

}  // namespace acwave::spectral
