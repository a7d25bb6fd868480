#include "acwave/spectral.hpp"

#include "acwave/errors.hpp"
#include "acwave/quadrature.hpp"
#include "acwave/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace acwave::spectral {

namespace {

constexpr double kGridH0 = 1e-6;     // first interval of the graded grid
constexpr double kGridRatio = 1.05;  // geometric growth near the origin
constexpr double kGridHMax = 0.015;  // uniform spacing away from the origin

// Laguerre degree of the regular solution.
double degree_nu(const ModeSpec& spec) {
  return (spec.mu - 1.0) / (2.0 * spec.kappa);
}

bool is_terminating(double nu) {
  return specfun::near_integer(nu) && std::round(nu) >= 0.0;
}

}  // namespace

ModeSpec ModeSpec::quantized(double kappa, int n) {
  ModeSpec spec;
  spec.kappa = kappa;
  spec.mu = quantized_mu(n, kappa);
  spec.n = n;
  return spec;
}

void ModeSpec::validate() const {
  if (!(kappa > 0.0)) throw ValidationError("kappa must be > 0");
  if (!(mu > 0.0)) throw ValidationError("mu must be > 0");
  if (n) {
    if (*n < 0) throw ValidationError("n must be >= 0");
    if (std::abs(mu - quantized_mu(*n, kappa)) > 1e-12)
      throw ValidationError("mu must equal 2*kappa*n + 1 when n is given");
  }
}

double quantized_mu(int n, double kappa) {
  if (n < 0) throw ValidationError("n must be >= 0");
  if (!(kappa > 0.0)) throw ValidationError("kappa must be > 0");
  return 2.0 * kappa * static_cast<double>(n) + 1.0;
}

std::vector<double> graded_s_grid(double s_max, bool include_zero) {
  if (!(s_max > 0.0)) throw ValidationError("s_max must be > 0");
  std::vector<double> s;
  if (include_zero) s.push_back(0.0);
  double cur = kGridH0;
  double h = kGridH0;
  s.push_back(cur);
  while (cur < s_max - 1e-12) {
    h = std::min(h * kGridRatio, kGridHMax);
    cur = std::min(cur + h, s_max);
    s.push_back(cur);
  }
  return s;
}

ModeProfile closed_form_profile(const ModeSpec& spec, double xi_norm,
                                double s_max) {
  spec.validate();
  if (!(xi_norm > 0.0)) throw ValidationError("xi_norm must be > 0");
  if (!(s_max > 0.0)) throw ValidationError("s_max must be > 0");

  const double kappa = spec.kappa;
  const double mu = spec.mu;
  const double lambda = 1.0 / kappa - 1.0;
  const double nu = degree_nu(spec);

  ModeProfile out;
  out.spec = spec;
  out.truncation_s_max = s_max;

  if (is_terminating(nu)) {
    out.contamination_bound = 0.0;
  } else {
    // growing-solution admixture at truncation, relative to the e^{-s} decay:
    // coefficient |1/Gamma(-nu)| times e^{2 s_max} s_max^{-nu - 1/kappa}
    double log_bound = -std::lgamma(-nu) + 2.0 * s_max +
                       (-nu - 1.0 / kappa) * std::log(s_max);
    out.contamination_bound =
        (log_bound > 700.0) ? std::numeric_limits<double>::infinity()
                            : std::exp(log_bound);
    if (out.contamination_bound > 1e-6)
      throw NumericalError(
          "closed_form_profile: truncated series would carry a "
          "growing-solution admixture above 1e-6 at requested s_max");
  }

  out.s_grid = graded_s_grid(s_max, /*include_zero=*/true);
  const std::size_t n = out.s_grid.size();
  out.B.resize(n);
  out.dB.resize(n);
  out.d2B.resize(n);

  const double l0 = specfun::laguerre(lambda, nu, 0.0).value;
  for (std::size_t i = 0; i < n; ++i) {
    double s = out.s_grid[i];
    specfun::SeriesTriple t = specfun::laguerre_d2(lambda, nu, 2.0 * s);
    double e = std::exp(-s);
    // B = e^{-s} L(2s)/L(0); chain rule doubles each Laguerre derivative
    out.B[i] = e * t.f.value / l0;
    out.dB[i] = e * (2.0 * t.df - t.f.value) / l0;
    out.d2B[i] = e * (t.f.value - 4.0 * t.df + 4.0 * t.d2f) / l0;
  }
  return out;
}

double mode_ode_residual(const ModeProfile& profile) {
  const std::size_t n = profile.s_grid.size();
  if (profile.B.size() != n || profile.dB.size() != n || profile.d2B.size() != n)
    throw ValidationError("profile arrays must align with s_grid");
  const double kappa = profile.spec.kappa;
  const double mu = profile.spec.mu;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = profile.s_grid[i];
    double r = kappa * s * profile.d2B[i] + profile.dB[i] +
               (mu - kappa * s) * profile.B[i];
    worst = std::max(worst, std::abs(r) / (1.0 + std::abs(profile.B[i])));
  }
  return worst;
}

double quadratic_form(const ModeProfile& profile, double xi_norm, double kappa) {
  if (!(xi_norm > 0.0)) throw ValidationError("xi_norm must be > 0");
  if (!(kappa > 0.0)) throw ValidationError("kappa must be > 0");
  const std::size_t n = profile.s_grid.size();
  if (profile.B.size() != n || profile.dB.size() != n)
    throw ValidationError("profile arrays must align with s_grid");

  // x = s/|xi'|, f(x) = B(s), f' = |xi'| B'
  std::vector<double> x(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = profile.s_grid[i] / xi_norm;
    double fp = xi_norm * profile.dB[i];
    g[i] = kappa * std::pow(x[i], 1.0 / kappa) *
           (fp * fp + xi_norm * xi_norm * profile.B[i] * profile.B[i]);
  }
  double peak = 0.0;
  for (double v : g) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  if (std::abs(g.front()) > 1e-10 * peak)
    throw NumericalError(
        "quadratic_form: integrand does not vanish at the boundary "
        "(singular branch)");
  if (std::abs(g.back()) > 1e-10 * peak)
    throw NumericalError(
        "quadratic_form: integrand has not decayed at truncation");
  return quadrature::integrate_grid(x, g);
}

namespace {

// ----------------------------------------------------------------------------
// Dormand-Prince 5(4) pair for the shooting integration; independent of the
// series machinery by construction.
// ----------------------------------------------------------------------------
struct State {
  double b, w;  // B and B'
};

State ode_rhs(double s, const State& y, double kappa, double mu) {
  return {y.w, -(y.w + (mu - kappa * s) * y.b) / (kappa * s)};
}

State axpy(const State& y, double h, const State& k) {
  return {y.b + h * k.b, y.w + h * k.w};
}

// One adaptive step; returns the error estimate scaled to tolerance 1.
double dp54_step(double s, const State& y, double h, double kappa, double mu,
                 State* out) {
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  State k1 = ode_rhs(s, y, kappa, mu);
  State k2 = ode_rhs(s + h / 5, {y.b + h * a21 * k1.b, y.w + h * a21 * k1.w},
                     kappa, mu);
  State k3 = ode_rhs(s + 3 * h / 10,
                     {y.b + h * (a31 * k1.b + a32 * k2.b),
                      y.w + h * (a31 * k1.w + a32 * k2.w)},
                     kappa, mu);
  State k4 = ode_rhs(s + 4 * h / 5,
                     {y.b + h * (a41 * k1.b + a42 * k2.b + a43 * k3.b),
                      y.w + h * (a41 * k1.w + a42 * k2.w + a43 * k3.w)},
                     kappa, mu);
  State k5 = ode_rhs(s + 8 * h / 9,
                     {y.b + h * (a51 * k1.b + a52 * k2.b + a53 * k3.b + a54 * k4.b),
                      y.w + h * (a51 * k1.w + a52 * k2.w + a53 * k3.w + a54 * k4.w)},
                     kappa, mu);
  State k6 = ode_rhs(
      s + h,
      {y.b + h * (a61 * k1.b + a62 * k2.b + a63 * k3.b + a64 * k4.b + a65 * k5.b),
       y.w + h * (a61 * k1.w + a62 * k2.w + a63 * k3.w + a64 * k4.w + a65 * k5.w)},
      kappa, mu);

  State y5 = {
      y.b + h * (b1 * k1.b + b3 * k3.b + b4 * k4.b + b5 * k5.b + b6 * k6.b),
      y.w + h * (b1 * k1.w + b3 * k3.w + b4 * k4.w + b5 * k5.w + b6 * k6.w)};
  State k7 = ode_rhs(s + h, y5, kappa, mu);

  double err_b = h * (e1 * k1.b + e3 * k3.b + e4 * k4.b + e5 * k5.b +
                      e6 * k6.b + e7 * k7.b);
  double err_w = h * (e1 * k1.w + e3 * k3.w + e4 * k4.w + e5 * k5.w +
                      e6 * k6.w + e7 * k7.w);
  const double atol = 1e-12, rtol = 1e-10;
  double sb = atol + rtol * std::max(std::abs(y.b), std::abs(y5.b));
  double sw = atol + rtol * std::max(std::abs(y.w), std::abs(y5.w));
  double eb = err_b / sb, ew = err_w / sw;
  *out = y5;
  return std::sqrt(0.5 * (eb * eb + ew * ew));
}

}  // namespace

ModeProfile shooting_oracle(const ModeSpec& spec, double kappa, double s_max) {
  spec.validate();
  if (std::abs(kappa - spec.kappa) > 1e-12)
    throw ValidationError("kappa must agree with spec.kappa");
  if (!(s_max > 0.0)) throw ValidationError("s_max must be > 0");

  const double mu = spec.mu;
  const double s0 = kGridH0;
  // regular-branch series data at s0, carried to second order so the
  // singular branches (s^{1-1/kappa}, log s) stay unexcited
  const double b2 = (kappa + mu * mu) / (2.0 * (kappa + 1.0));

  ModeProfile out;
  out.spec = spec;
  out.truncation_s_max = s_max;
  out.contamination_bound = 0.0;
  out.s_grid = graded_s_grid(s_max, /*include_zero=*/true);
  const std::size_t n = out.s_grid.size();
  out.B.resize(n);
  out.dB.resize(n);
  out.d2B.resize(n);

  out.B[0] = 1.0;
  out.dB[0] = -mu;
  out.d2B[0] = 2.0 * b2;

  State y = {1.0 - mu * s0 + b2 * s0 * s0, -mu + 2.0 * b2 * s0};
  double s = s0;
  out.B[1] = y.b;
  out.dB[1] = y.w;
  out.d2B[1] = ode_rhs(s, y, kappa, mu).w;

  double h = 0.1 * s0;
  long steps = 0;
  for (std::size_t i = 2; i < n; ++i) {
    const double target = out.s_grid[i];
    while (s < target - 1e-14 * target) {
      double hs = std::min(h, target - s);
      State ynew;
      double err = dp54_step(s, y, hs, kappa, mu, &ynew);
      if (err <= 1.0) {
        s += hs;
        y = ynew;
        if (std::abs(y.b) > 1e6)
          throw NumericalError(
              "shooting_oracle: |B| exceeded 1e6 before s_max "
              "(mu is not a quantized eigenvalue)");
      }
      double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
      h = hs * std::clamp(fac, 0.2, 5.0);
      if (++steps > 20000000)
        throw NumericalError("shooting_oracle: step budget exhausted");
    }
    out.B[i] = y.b;
    out.dB[i] = y.w;
    out.d2B[i] = ode_rhs(s, y, kappa, mu).w;
  }
  return out;
}

namespace {

// Zero of the cubic Hermite interpolant on [s0, s1] given a sign change;
// safeguarded Newton against the bracket.
double hermite_zero(double s0, double s1, double f0, double f1, double d0,
                    double d1) {
  double h = s1 - s0;
  auto eval = [&](double t, double* deriv) {
    double t2 = t * t, t3 = t2 * t;
    double v = (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 +
               (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
    if (deriv)
      *deriv = (6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * d0 +
               (-6 * t2 + 6 * t) * f1 + (3 * t2 - 2 * t) * h * d1;
    return v;
  };
  double lo = 0.0, hi = 1.0, flo = f0;
  double t = 0.5;
  for (int it = 0; it < 40; ++it) {
    double dv, v = eval(t, &dv);
    if (v == 0.0) break;
    if ((v > 0) == (flo > 0))
      lo = t;
    else
      hi = t;
    double tn = t - v / dv;
    t = (tn > lo && tn < hi) ? tn : 0.5 * (lo + hi);
    if (hi - lo < 1e-14) break;
  }
  return s0 + t * h;
}

}  // namespace

WkbReport wkb_diagnostics(const ModeProfile& profile) {
  const std::size_t n = profile.s_grid.size();
  if (profile.B.size() != n || profile.dB.size() != n)
    throw ValidationError("profile arrays must align with s_grid");
  WkbReport rep;
  rep.small_s_logderiv = profile.dB.front() / profile.B.front();
  rep.large_s_logderiv = profile.dB.back() / profile.B.back();

  if (!profile.spec.n || *profile.spec.n < 8) return rep;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (profile.B[i] * profile.B[i + 1] < 0.0)
      rep.zeros.push_back(hermite_zero(profile.s_grid[i], profile.s_grid[i + 1],
                                       profile.B[i], profile.B[i + 1],
                                       profile.dB[i], profile.dB[i + 1]));
  }
  rep.zeros_found = static_cast<int>(rep.zeros.size());

  const double mu = profile.spec.mu;
  const double kappa = profile.spec.kappa;
  double dev_inner = -1.0, dev_bulk = -1.0;
  for (std::size_t k = 0; k + 1 < rep.zeros.size(); ++k) {
    double sa = rep.zeros[k], sb = rep.zeros[k + 1];
    double law = 2.0 * (std::sqrt(sb) - std::sqrt(sa)) * std::sqrt(mu / kappa);
    double dev = std::abs(law / M_PI - 1.0);
    double mid = 0.5 * (sa + sb);
    if (mid <= mu / (6.0 * kappa)) dev_inner = std::max(dev_inner, dev);
    if (mid > mu / (4.0 * kappa) && mid < mu / (2.0 * kappa))
      dev_bulk = std::max(dev_bulk, dev);
  }
  if (dev_inner >= 0.0) rep.zero_spacing_dev_inner = dev_inner;
  if (dev_bulk >= 0.0) rep.zero_spacing_dev_bulk = dev_bulk;
  return rep;
}

}  // namespace acwave::spectral
