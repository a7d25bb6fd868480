#include "acwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "acwave/errors.hpp"

namespace acwave::dynamics {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// half-wave multipliers
// ---------------------------------------------------------------------------

void check_state(const HalfWaveState& state) {
  state.grid.validate();
  if (!(state.mu > 0.0) || !std::isfinite(state.mu))
    throw ValidationError("halfwave state: mu must be positive");
  if (!std::isfinite(state.t))
    throw ValidationError("halfwave state: non-finite time");
  if (static_cast<long>(state.spectrum.size()) != state.grid.lattice_size())
    throw ValidationError("halfwave state: spectrum size does not match the lattice");
}

template <typename Factor>
HalfWaveState apply_multiplier(const HalfWaveState& initial, double t,
                               Factor&& factor) {
  check_state(initial);
  if (!std::isfinite(t))
    throw ValidationError("halfwave evolution: non-finite time increment");
  HalfWaveState out = initial;
  out.t = initial.t + t;
  const long m = initial.grid.lattice_size();
  for (long f = 0; f < m; ++f) {
    const double omega = std::sqrt(initial.mu * initial.grid.freq_norm(f));
    out.spectrum[static_cast<std::size_t>(f)] *= factor(t * omega);
  }
  return out;
}

// ---------------------------------------------------------------------------
// radial flux-form operator
// ---------------------------------------------------------------------------

// Diagonal mass M (weight x^{1/kappa-1}), face flux coefficients a (a[i]
// couples nodes i, i+1), diagonal potential K (kappa |xi'|^2 x^{1/kappa});
// cell masses are exact integrals of the weights over the dual cells, so the
// scheme is the conservative finite-difference form of
// d_d(kappa x^{1/kappa} d_d) - kappa x^{1/kappa} |xi'|^2 and the flux through
// x = 0 vanishes identically.
struct RadialOperator {
  std::vector<double> M, a, K;
};

RadialOperator assemble_radial(double xi_norm, double kappa,
                               const std::vector<double>& xg) {
  const std::size_t n = xg.size();
  const double p = 1.0 / kappa;
  const auto mass_anti = [&](double x) { return kappa * std::pow(x, p); };
  const auto pot_anti = [&](double x) {
    return kappa / (kappa + 1.0) * std::pow(x, p + 1.0);
  };
  RadialOperator op;
  op.M.resize(n);
  op.K.resize(n);
  op.a.resize(n - 1);
  const double xi2 = xi_norm * xi_norm;
  double face_lo = xg[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double face_hi = i + 1 < n ? 0.5 * (xg[i] + xg[i + 1]) : xg[n - 1];
    op.M[i] = mass_anti(face_hi) - mass_anti(face_lo);
    op.K[i] = kappa * xi2 * (pot_anti(face_hi) - pot_anti(face_lo));
    if (i + 1 < n)
      op.a[i] = kappa * std::pow(face_hi, p) / (xg[i + 1] - xg[i]);
    face_lo = face_hi;
  }
  return op;
}

void check_radial_inputs(double xi_norm, double kappa,
                         const std::vector<double>& xg) {
  if (!(xi_norm > 0.0) || !std::isfinite(xi_norm))
    throw ValidationError("radial evolution: xi norm must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ValidationError("radial evolution: kappa must be positive");
  if (xg.size() < 8)
    throw ValidationError("radial evolution: need at least 8 grid nodes");
  if (xg.front() != 0.0)
    throw ValidationError("radial evolution: grid must start at x = 0");
  for (std::size_t i = 1; i < xg.size(); ++i)
    if (!(xg[i] > xg[i - 1]) || !std::isfinite(xg[i]))
      throw ValidationError("radial evolution: grid must increase strictly");
}

void accel(const RadialOperator& op, const std::vector<cplx>& v,
           std::vector<cplx>& out) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = -op.K[i] * v[i];
    if (i > 0) s += op.a[i - 1] * (v[i - 1] - v[i]);
    if (i + 1 < n) s += op.a[i] * (v[i + 1] - v[i]);
    out[i] = s / op.M[i];
  }
}

double weighted_energy(const RadialOperator& op, const std::vector<cplx>& v,
                       const std::vector<cplx>& w) {
  const std::size_t n = v.size();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) e += op.M[i] * std::norm(w[i]);
  for (std::size_t i = 0; i + 1 < n; ++i)
    e += op.a[i] * std::norm(v[i + 1] - v[i]);
  for (std::size_t i = 0; i < n; ++i) e += op.K[i] * std::norm(v[i]);
  return e;
}

struct VerletRun {
  std::vector<cplx> v, w;
  double energy = 0.0;
  double drift = 0.0;
  long long steps = 0;
};

VerletRun verlet_run(const RadialOperator& op, const std::vector<cplx>& v0,
                     const std::vector<cplx>& w0, double t_end, double dt) {
  VerletRun run;
  run.v = v0;
  run.w = w0;
  const double e0 = weighted_energy(op, run.v, run.w);
  run.energy = e0;
  if (t_end <= 0.0) return run;
  const long long steps =
      std::max<long long>(1, static_cast<long long>(std::ceil(t_end / dt)));
  if (steps > 200000000LL)
    throw NumericalError("radial evolution: step budget exceeded");
  const double h = t_end / static_cast<double>(steps);
  const long long sample_every = std::max<long long>(1, steps / 256);
  const double denom = std::max(e0, 1e-300);
  std::vector<cplx> acc(v0.size());
  accel(op, run.v, acc);
  const std::size_t n = v0.size();
  for (long long s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) run.w[i] += 0.5 * h * acc[i];
    for (std::size_t i = 0; i < n; ++i) run.v[i] += h * run.w[i];
    accel(op, run.v, acc);
    for (std::size_t i = 0; i < n; ++i) run.w[i] += 0.5 * h * acc[i];
    if ((s + 1) % sample_every == 0 || s + 1 == steps) {
      run.energy = weighted_energy(op, run.v, run.w);
      run.drift = std::max(run.drift, std::abs(run.energy - e0) / denom);
    }
  }
  run.steps = steps;
  return run;
}

void check_decayed(const std::vector<cplx>& data, const char* what) {
  double peak = 0.0;
  for (const cplx& c : data) peak = std::max(peak, std::abs(c));
  if (peak > 0.0 && std::abs(data.back()) > 1e-3 * peak)
    throw ValidationError(std::string("radial evolution: initial ") + what +
                          " must decay before the truncation point");
}

// ---------------------------------------------------------------------------
// oscillatory quadrature
// ---------------------------------------------------------------------------

// 16-point Gauss-Legendre rule on [-1, 1], positive half; mirrored in use.
constexpr int kGlPairs = 8;
constexpr double kGlNode[kGlPairs] = {
    9.50125098376374544e-02, 2.81603550779258915e-01, 4.58016777657227370e-01,
    6.17876244402643771e-01, 7.55404408355002999e-01, 8.65631202387831755e-01,
    9.44575023073232600e-01, 9.89400934991649939e-01};
constexpr double kGlWeight[kGlPairs] = {
    1.89450610455068585e-01, 1.82603415044923612e-01, 1.69156519395002619e-01,
    1.49595988816576764e-01, 1.24628971255534030e-01, 9.51585116824925914e-02,
    6.22535239386477063e-02, 2.71524594117540374e-02};

// 10 sample points per oscillation of e^{i lambda Phi} along an axis whose
// phase gradient is at most lmax, with a floor resolving the window bump.
long panel_count(double length, double lambda, double lmax, long min_panels) {
  const double density = 10.0 * lambda * lmax / (2.0 * kPi);
  const double need = length * density / 16.0;
  long panels = static_cast<long>(std::ceil(need));
  return std::max(panels, min_panels);
}

void check_J_args(const std::vector<double>& z, int j, double lambda,
                  double mu, const synthesis::Window& psi) {
  psi.validate();
  if (z.size() != 1 && z.size() != 2)
    throw ValidationError("oscillatory integral: tangential dimension must be 1 or 2");
  for (double c : z)
    if (!std::isfinite(c))
      throw ValidationError("oscillatory integral: non-finite z");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("oscillatory integral: lambda must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw ValidationError("oscillatory integral: mu must be positive");
  if (j < -40 || j > 40)
    throw ValidationError("oscillatory integral: scale index out of range");
  const double budget = z.size() == 1 ? 1.0e4 : 2.0e3;
  if (lambda > budget)
    throw NumericalError(
        "oscillatory integral: lambda exceeds the resolution budget (1e4 in "
        "d = 2, 2e3 in d = 3)");
}

// single interval of the 1-D integral; the interval does not cross 0.
cplx integrate_interval_1d(double a, double b, double z1, double c,
                           double lambda, const synthesis::Window& psi) {
  const double lo_abs = std::min(std::abs(a), std::abs(b));
  const double lmax = std::abs(z1) + c / (2.0 * std::sqrt(lo_abs));
  const long panels = panel_count(b - a, lambda, lmax, 24);
  const double pw = (b - a) / static_cast<double>(panels);
  double re = 0.0, im = 0.0;
  for (long p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * pw;
    const double half = 0.5 * pw;
    for (int i = 0; i < kGlPairs; ++i) {
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        const double x = mid + sgn * half * kGlNode[i];
        const double bump = psi.value(x);
        if (bump == 0.0) continue;
        const double ph = lambda * (z1 * x - c * std::sqrt(std::abs(x)));
        const double wb = kGlWeight[i] * half * bump;
        re += wb * std::cos(ph);
        im += wb * std::sin(ph);
      }
    }
  }
  return {re, im};
}

cplx oscillatory_J_1d(double z1, double c, double lambda,
                      const synthesis::Window& psi) {
  const double eps = psi.epsilon;
  return integrate_interval_1d(1.0 - eps, 1.0 + eps, z1, c, lambda, psi) +
         integrate_interval_1d(-(1.0 + eps), -(1.0 - eps), z1, c, lambda, psi);
}

cplx oscillatory_J_2d(double z1, double z2, double c, double lambda,
                      const synthesis::Window& psi) {
  const double eps = psi.epsilon;
  const double hi = 1.0 + eps;
  const double grad_g = c / (2.0 * std::sqrt(1.0 - eps));
  const long px = panel_count(2.0 * hi, lambda, std::abs(z1) + grad_g, 12);
  const long py = panel_count(2.0 * hi, lambda, std::abs(z2) + grad_g, 12);
  if (px * py > 3000000LL)
    throw NumericalError("oscillatory integral: panel budget exceeded");
  const double wx = 2.0 * hi / static_cast<double>(px);
  const double wy = 2.0 * hi / static_cast<double>(py);
  const double r_lo2 = (1.0 - eps) * (1.0 - eps);
  const double r_hi2 = hi * hi;

  // per-panel Gauss nodes along one axis, ascending within the panel
  const auto axis_nodes = [](double width, double mid, double* nodes) {
    const double half = 0.5 * width;
    for (int i = 0; i < kGlPairs; ++i) {
      nodes[kGlPairs - 1 - i] = mid - half * kGlNode[i];
      nodes[kGlPairs + i] = mid + half * kGlNode[i];
    }
  };
  double wgt[2 * kGlPairs];
  for (int i = 0; i < kGlPairs; ++i) {
    wgt[kGlPairs - 1 - i] = kGlWeight[i];
    wgt[kGlPairs + i] = kGlWeight[i];
  }

  double re = 0.0, im = 0.0;
  double xs[2 * kGlPairs], ys[2 * kGlPairs];
  for (long p = 0; p < px; ++p) {
    const double x0 = -hi + static_cast<double>(p) * wx;
    const double x1 = x0 + wx;
    const double cx = std::clamp(0.0, x0, x1);
    const double mx = std::max(std::abs(x0), std::abs(x1));
    axis_nodes(wx, 0.5 * (x0 + x1), xs);
    for (long q = 0; q < py; ++q) {
      const double y0 = -hi + static_cast<double>(q) * wy;
      const double y1 = y0 + wy;
      const double cy = std::clamp(0.0, y0, y1);
      if (cx * cx + cy * cy >= r_hi2) continue;  // panel outside the annulus
      const double my = std::max(std::abs(y0), std::abs(y1));
      if (mx * mx + my * my <= r_lo2) continue;  // panel inside the hole
      axis_nodes(wy, 0.5 * (y0 + y1), ys);
      for (int i = 0; i < 2 * kGlPairs; ++i) {
        const double x = xs[i];
        const double r2x = x * x;
        const double phx = z1 * x;
        for (int k = 0; k < 2 * kGlPairs; ++k) {
          const double y = ys[k];
          const double r2 = r2x + y * y;
          if (r2 <= r_lo2 || r2 >= r_hi2) continue;
          const double r = std::sqrt(r2);
          const double bump = psi.value(r);
          if (bump == 0.0) continue;
          const double ph = lambda * (phx + z2 * y - c * std::sqrt(r));
          const double wb = wgt[i] * wgt[k] * bump;
          re += wb * std::cos(ph);
          im += wb * std::sin(ph);
        }
      }
    }
  }
  const double cell = 0.25 * wx * wy;  // Gauss weights carry a factor 2 each
  return {re * cell, im * cell};
}

}  // namespace

void HalfWaveState::validate() const { check_state(*this); }

HalfWaveState halfwave_evolve(const HalfWaveState& initial, double t) {
  return apply_multiplier(initial, t, [](double phase) {
    return cplx{std::cos(phase), -std::sin(phase)};
  });
}

HalfWaveState halfwave_cosine_evolve(const HalfWaveState& initial, double t) {
  return apply_multiplier(
      initial, t, [](double phase) { return cplx{std::cos(phase), 0.0}; });
}

synthesis::Field halfwave_evolve(const synthesis::Field& base, double t,
                                 bool cosine_data) {
  if (!std::isfinite(t))
    throw ValidationError("halfwave evolution: non-finite time increment");
  if (base.harmonics.empty())
    throw ValidationError(
        "halfwave evolution of a field requires the harmonic bank");
  std::vector<cplx> weights(base.harmonics.size());
  for (std::size_t h = 0; h < base.harmonics.size(); ++h) {
    const synthesis::Harmonic& harm = base.harmonics[h];
    const double omega = std::sqrt(harm.mu * harm.xi_norm);
    const cplx factor = cosine_data
                            ? cplx{std::cos(t * omega), 0.0}
                            : cplx{std::cos(t * omega), -std::sin(t * omega)};
    weights[h] = harm.weight * factor;
  }
  return synthesis::reweight_harmonics(base, weights);
}

double radial_stability_limit(double xi_norm, double kappa,
                              const std::vector<double>& xg) {
  check_radial_inputs(xi_norm, kappa, xg);
  const RadialOperator op = assemble_radial(xi_norm, kappa, xg);
  const std::size_t n = xg.size();
  double lam = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = op.K[i];
    if (i > 0) row += 2.0 * op.a[i - 1];
    if (i + 1 < n) row += 2.0 * op.a[i];
    lam = std::max(lam, row / op.M[i]);
  }
  return 0.98 * 2.0 / std::sqrt(lam);
}

RadialEvolveResult radial_evolve_oracle(double xi_norm, double kappa,
                                        const std::vector<double>& xg,
                                        const std::vector<cplx>& initial_profile,
                                        const std::vector<cplx>& initial_velocity,
                                        double t_end, double dt) {
  check_radial_inputs(xi_norm, kappa, xg);
  if (initial_profile.size() != xg.size() ||
      initial_velocity.size() != xg.size())
    throw ValidationError("radial evolution: data size does not match the grid");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw ValidationError("radial evolution: t_end must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ValidationError("radial evolution: dt must be positive");
  const double limit = radial_stability_limit(xi_norm, kappa, xg);
  if (dt > limit)
    throw ValidationError(
        "radial evolution: dt exceeds the stability limit " +
        std::to_string(limit));
  check_decayed(initial_profile, "profile");
  check_decayed(initial_velocity, "velocity");

  const RadialOperator op = assemble_radial(xi_norm, kappa, xg);
  double step = dt;
  int halvings = 0;
  VerletRun run;
  for (;;) {
    run = verlet_run(op, initial_profile, initial_velocity, t_end, step);
    if (run.drift <= 1e-6 || halvings >= 12) break;
    step *= 0.5;
    ++halvings;
  }
  if (run.drift > 1e-4)
    throw NumericalError(
        "radial evolution unstable: relative energy drift " +
        std::to_string(run.drift));

  RadialEvolveResult result;
  result.profile = std::move(run.v);
  result.velocity = std::move(run.w);
  result.energy = run.energy;
  result.energy_drift = run.drift;
  result.dt = step;
  result.steps = run.steps;
  return result;
}

void DispersiveSample::validate() const {
  if (z.size() != 1 && z.size() != 2)
    throw ValidationError("dispersive sample: tangential dimension must be 1 or 2");
  for (double c : z)
    if (!std::isfinite(c))
      throw ValidationError("dispersive sample: non-finite z");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("dispersive sample: lambda must be positive");
  if (j < -40 || j > 40)
    throw ValidationError("dispersive sample: scale index out of range");
}

cplx oscillatory_J(const std::vector<double>& z, int j, double lambda,
                   double mu, const synthesis::Window& psi) {
  check_J_args(z, j, lambda, mu, psi);
  const double c = std::ldexp(std::sqrt(mu), -j);
  if (z.size() == 1) return oscillatory_J_1d(z[0], c, lambda, psi);
  return oscillatory_J_2d(z[0], z[1], c, lambda, psi);
}

cplx stationary_phase_prediction(const std::vector<double>& z, int j,
                                 double lambda, double mu,
                                 const synthesis::Window& psi) {
  check_J_args(z, j, std::min(lambda, 1.0), mu, psi);  // skip the budget cap
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("stationary phase: lambda must be positive");
  const int dm1 = static_cast<int>(z.size());
  const double c = std::ldexp(std::sqrt(mu), -j);
  double zn2 = 0.0;
  for (double v : z) zn2 += v * v;
  const double zn = std::sqrt(zn2);
  if (zn == 0.0)
    throw ValidationError(
        "stationary phase: no critical point at z = 0; J decays rapidly");
  const double eta_norm = c * c / (4.0 * zn2);
  if (eta_norm <= 1.0 - psi.epsilon || eta_norm >= 1.0 + psi.epsilon)
    throw ValidationError(
        "stationary phase: z outside the admissible shell; J decays rapidly");
  const double phi0 = zn * eta_norm - c * std::sqrt(eta_norm);
  // Hessian of the phase at the critical point: the radial eigenvalue is
  // +f/2 and the d-2 tangential ones are -f, f = c / (2 |eta0|^{3/2});
  // |det| = f^{d-1}/2 and the signature is 1 in d = 2, 0 in d = 3.
  const double f = c / (2.0 * std::pow(eta_norm, 1.5));
  const double det = 0.5 * std::pow(f, static_cast<double>(dm1));
  const int signature = 2 - dm1;
  const double mag = std::pow(2.0 * kPi / lambda, 0.5 * dm1) / std::sqrt(det) *
                     psi.value(eta_norm);
  return std::polar(mag, lambda * phi0 + signature * kPi / 4.0);
}

double sup_abs_J(int j, double lambda, double mu, const synthesis::Window& psi,
                 int d, int n_scan) {
  if (d != 2 && d != 3)
    throw ValidationError("dispersive scan: d must be 2 or 3");
  if (n_scan < 3)
    throw ValidationError("dispersive scan: need at least 3 scan points");
  psi.validate();
  const double c = std::ldexp(std::sqrt(mu), -j);
  const double eta_lo = 1.0 - 0.8 * psi.epsilon;
  const double eta_hi = 1.0 + 0.8 * psi.epsilon;
  double best = 0.0;
  for (int k = 0; k < n_scan; ++k) {
    const double eta = eta_lo + (eta_hi - eta_lo) * static_cast<double>(k) /
                                    static_cast<double>(n_scan - 1);
    const double zmag = c / (2.0 * std::sqrt(eta));
    std::vector<double> z(static_cast<std::size_t>(d - 1), 0.0);
    z[0] = zmag;
    best = std::max(best, std::abs(oscillatory_J(z, j, lambda, mu, psi)));
  }
  return best;
}

ScalingFit dispersive_decay_fit(int j, const std::vector<double>& lambdas,
                                double mu, const synthesis::Window& psi, int d,
                                double tolerance) {
  if (d != 2 && d != 3)
    throw ValidationError("dispersive fit: d must be 2 or 3");
  if (lambdas.size() < 6)
    throw ValidationError("dispersive fit: need at least 6 lambda values");
  if (!(lambdas.front() >= 50.0))
    throw ValidationError("dispersive fit: lambda must start at >= 50");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw ValidationError("dispersive fit: lambdas must increase strictly");
  std::vector<double> xs(lambdas.size()), ys(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    xs[i] = std::log2(lambdas[i]);
    const double sup = sup_abs_J(j, lambdas[i], mu, psi, d);
    if (!(sup > 0.0))
      throw NumericalError("dispersive fit: vanishing scan maximum");
    ys[i] = std::log2(sup);
  }
  return fit_log2(std::move(xs), std::move(ys), -0.5 * (d - 1), tolerance);
}

}  // namespace acwave::dynamics
