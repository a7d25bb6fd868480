#pragma once

// ============================================================================
// Time evolution and dispersion. Under the tangential Fourier transform the
// degenerate wave problem reduces per frequency to
//
//     d_t^2 v = kappa x_d d_d^2 v + d_d v - kappa x_d |xi'|^2 v,
//
// whose boundary-trapped solutions are the half-wave flows
// e^{-i t sqrt(mu |xi'|)} acting on the lattice spectrum. The module provides
// that multiplier evolution (exponential and cosine-data forms), an
// independent radial leapfrog oracle for the per-frequency equation in flux
// form, the oscillatory integral
//
//     J(z, j, lambda) = int e^{i lambda (z.eta - 2^{-j} sqrt(mu) |eta|^{1/2})}
//                           psi(|eta|) d eta      over eta in R^{d-1},
//
// its stationary-phase leading term, and least-squares fits of the
// dispersive-decay exponent -(d-1)/2 of sup_z |J| in lambda.
// ============================================================================

#include <complex>
#include <vector>

#include "acwave/fit.hpp"
#include "acwave/synthesis.hpp"

namespace acwave::dynamics {

using cplx = std::complex<double>;

// Tangential half-wave data: lattice spectrum phihat(t, xi') together with
// the dispersion parameter mu and the time it was sampled at.
struct HalfWaveState {
  double mu = 1.0;
  synthesis::TangentialGrid grid;
  std::vector<cplx> spectrum;  // row-major lattice coefficients
  double t = 0.0;

  void validate() const;
};

// Advance the state by t: each coefficient is multiplied by
// e^{-i t sqrt(mu |xi'|)} (one-sided solution of d_t^2 + mu |grad'|).
HalfWaveState halfwave_evolve(const HalfWaveState& initial, double t);

// Cosine combination for data (phi0, 0): coefficient cos(t sqrt(mu |xi'|)).
HalfWaveState halfwave_cosine_evolve(const HalfWaveState& initial, double t);

// Field-level evolution through the harmonic bank: every bank weight is
// multiplied by e^{-i t sqrt(mu_h |xi'_h|)} (or cos(t sqrt(mu_h |xi'_h|))
// when cosine_data is set) and the field re-synthesized. Requires a
// non-empty bank. For a dyadic packet mu_h |xi'_h| = 2^{2j} on the whole
// annulus, so the exponential form is the global phase e^{-i t 2^j}.
synthesis::Field halfwave_evolve(const synthesis::Field& base, double t,
                                 bool cosine_data = false);

// Result of the radial oracle: synchronized profile/velocity at t_end, the
// conserved discrete weighted energy
//     E = sum_i M_i |vdot_i|^2 + sum_i a_{i+1/2} |v_{i+1} - v_i|^2
//         + sum_i K_i |v_i|^2,
// the largest relative deviation of E observed over the run, and the time
// step actually used after stability halving.
struct RadialEvolveResult {
  std::vector<cplx> profile;
  std::vector<cplx> velocity;
  double energy = 0.0;
  double energy_drift = 0.0;
  double dt = 0.0;
  long long steps = 0;
};

// Largest stable leapfrog step for the discretized operator (Gershgorin
// bound on the generalized spectrum of the mass/stiffness pair, with a 2%
// safety margin).
double radial_stability_limit(double xi_norm, double kappa,
                              const std::vector<double>& xg);

// Independent per-frequency evolution oracle: conservative finite
// differences in the flux form
//     x^{1/kappa - 1} d_t^2 v = d_d(kappa x^{1/kappa} d_d v)
//                               - kappa x^{1/kappa} |xi'|^2 v
// on the graded grid xg (which must start at 0), velocity-Verlet in time.
// The degenerate flux vanishes at x = 0, so no boundary condition is
// imposed there. dt is validated against radial_stability_limit and then
// halved (up to 12 times) until the sampled energy drift is below 1e-6;
// drift above 1e-4 after halving raises NumericalError. Initial data must
// decay before the truncation point (relative tail below 1e-3).
RadialEvolveResult radial_evolve_oracle(double xi_norm, double kappa,
                                        const std::vector<double>& xg,
                                        const std::vector<cplx>& initial_profile,
                                        const std::vector<cplx>& initial_velocity,
                                        double t_end, double dt);

// One point of a dispersive scan, exported to CSV by the front end.
struct DispersiveSample {
  std::vector<double> z;
  int j = 0;
  double lambda = 0.0;  // t 2^{2j}
  cplx J_value{0.0, 0.0};

  void validate() const;  // lambda > 0, z of tangential dimension 1 or 2
};

// Direct quadrature of J(z, j, lambda) over the annular window psi: tensor
// Gauss-Legendre panels with at least 10 points per oscillation of the
// phase along every axis. The tangential dimension d - 1 is z.size().
// Budget: lambda <= 1e4 for d = 2 and lambda <= 2e3 for d = 3; beyond that
// the resolution requirement raises NumericalError.
cplx oscillatory_J(const std::vector<double>& z, int j, double lambda,
                   double mu, const synthesis::Window& psi);

// Leading stationary-phase term c0 lambda^{-(d-1)/2} at the critical point
// eta0 = eta(z) of the phase z.eta - 2^{-j} sqrt(mu) |eta|^{1/2}:
//     |eta0| = 2^{-2j} mu / (4 |z|^2),  eta0 parallel to z,
//     c0 = e^{i pi sgn/4} e^{i lambda Phi(eta0)}
//          (2 pi)^{(d-1)/2} |det Hess|^{-1/2} psi(|eta0|).
// Throws ValidationError when |eta0| falls outside the open support of psi
// (no stationary point: J then decays faster than any power of lambda).
cplx stationary_phase_prediction(const std::vector<double>& z, int j,
                                 double lambda, double mu,
                                 const synthesis::Window& psi);

// max over a radial scan of n_scan admissible z of |J(z, j, lambda)|; the
// scan covers the critical points of the inner 80% of the window support.
double sup_abs_J(int j, double lambda, double mu,
                 const synthesis::Window& psi, int d, int n_scan = 11);

// Least-squares fit of log2 sup_z |J| against log2 lambda over a log-spaced
// ladder (>= 6 values, lambda >= 50, ascending), compared with the
// dispersive-decay prediction -(d-1)/2.
ScalingFit dispersive_decay_fit(int j, const std::vector<double>& lambdas,
                                double mu, const synthesis::Window& psi,
                                int d, double tolerance = 0.05);

}  // namespace acwave::dynamics
