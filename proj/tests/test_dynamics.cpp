/// @file test_dynamics.cpp
/// Half-wave multiplier evolution, the radial leapfrog oracle against
/// separated solutions, oscillatory integrals against closed forms and an
/// independent Bessel reduction, stationary-phase predictions, dispersive
/// decay fits, and the discrete residual of the full wave equation for an
/// evolved gallery mode.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "acwave/dynamics.hpp"
#include "acwave/errors.hpp"
#include "acwave/measure.hpp"
#include "acwave/spectral.hpp"
#include "acwave/specfun.hpp"
#include "acwave/synthesis.hpp"

using namespace acwave;
using dynamics::HalfWaveState;
using synthesis::Field;
using synthesis::TangentialGrid;
using synthesis::Window;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

TangentialGrid make_grid(int d, double box, int n) {
  TangentialGrid g;
  g.d = d;
  g.box_length = box;
  g.points_per_dim = n;
  g.validate();
  return g;
}

Field field_from_spectrum(const TangentialGrid& g,
                          const std::vector<double>& xg,
                          const std::vector<cplx>& slice_spectrum) {
  Field f;
  f.grid = g;
  f.normal_grid = xg;
  const long m = g.lattice_size();
  f.values.assign(xg.size() * static_cast<std::size_t>(m), cplx{0.0, 0.0});
  f.tangential_spectrum.clear();
  for (std::size_t s = 0; s < xg.size(); ++s)
    f.tangential_spectrum.insert(f.tangential_spectrum.end(),
                                 slice_spectrum.begin(), slice_spectrum.end());
  synthesis::values_from_spectrum(f);
  return f;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<cplx>& a) {
  double m = 0.0;
  for (const cplx& c : a) m = std::max(m, std::abs(c));
  return m;
}

// regular mode profile B(mu, s) = e^{-s} L_n^{(1/kappa-1)}(2s) / L_n(0)
double b_profile(double kappa, int n, double s) {
  const double alpha = 1.0 / kappa - 1.0;
  const double l0 = std::exp(std::lgamma(n + alpha + 1.0) -
                             std::lgamma(n + 1.0) - std::lgamma(alpha + 1.0));
  return std::exp(-s) * specfun::laguerre(alpha, n, 2.0 * s).value / l0;
}

}  // namespace

// ---------------------------------------------------------------------------
// half-wave multiplier evolution
// ---------------------------------------------------------------------------

TEST_CASE("half-wave state validation") {
  HalfWaveState st;
  st.grid = make_grid(2, 2.0 * kPi, 16);
  st.spectrum.assign(16, cplx{0.0, 0.0});
  st.mu = 0.0;
  CHECK_THROWS_AS(st.validate(), ValidationError);
  st.mu = 1.0;
  CHECK_NOTHROW(st.validate());
  st.spectrum.resize(15);
  CHECK_THROWS_AS(st.validate(), ValidationError);
}

TEST_CASE("half-wave multiplier: identity at t = 0 and the exact phase") {
  auto g = make_grid(2, 2.0 * kPi, 16);
  HalfWaveState st;
  st.grid = g;
  st.mu = 1.0;
  st.spectrum.assign(16, cplx{0.0, 0.0});
  st.spectrum[4] = cplx{0.3, -0.7};  // |xi'| = 4, omega = sqrt(mu 4) = 2

  auto id = dynamics::halfwave_evolve(st, 0.0);
  CHECK(max_abs_diff(id.spectrum, st.spectrum) == 0.0);
  CHECK(id.t == 0.0);

  const double t = 0.7;
  auto out = dynamics::halfwave_evolve(st, t);
  const cplx expected = st.spectrum[4] * std::polar(1.0, -2.0 * t);
  CHECK(std::abs(out.spectrum[4] - expected) <= 1e-15);
  CHECK(out.t == t);

  auto cosed = dynamics::halfwave_cosine_evolve(st, t);
  const cplx cos_expected = st.spectrum[4] * std::cos(2.0 * t);
  CHECK(std::abs(cosed.spectrum[4] - cos_expected) <= 1e-15);
}

TEST_CASE("half-wave multiplier: unitary, composes, conserves lattice energy") {
  auto g = make_grid(2, 2.0 * kPi, 32);
  HalfWaveState st;
  st.grid = g;
  st.mu = 3.0;
  st.spectrum.assign(32, cplx{0.0, 0.0});
  // fixed deterministic data over several frequencies
  const long idx[] = {1, 3, 7, 12, 20, 27, 31};
  const cplx val[] = {{0.8, 0.1}, {-0.5, 0.4},  {0.0, 0.9}, {0.3, -0.3},
                      {1.1, 0.0}, {-0.2, -0.6}, {0.45, 0.25}};
  for (int i = 0; i < 7; ++i) st.spectrum[idx[i]] = val[i];

  double l2_0 = 0.0;
  for (const cplx& c : st.spectrum) l2_0 += std::norm(c);

  auto a = dynamics::halfwave_evolve(st, 0.37);
  double l2_a = 0.0;
  for (const cplx& c : a.spectrum) l2_a += std::norm(c);
  CHECK(l2_a == doctest::Approx(l2_0).epsilon(1e-12));
  for (std::size_t f = 0; f < a.spectrum.size(); ++f)
    CHECK(std::abs(std::abs(a.spectrum[f]) - std::abs(st.spectrum[f])) <=
          1e-15);

  // group property
  auto b = dynamics::halfwave_evolve(a, 0.21);
  auto direct = dynamics::halfwave_evolve(st, 0.58);
  CHECK(max_abs_diff(b.spectrum, direct.spectrum) <= 1e-13);
  CHECK(b.t == doctest::Approx(0.58).epsilon(1e-15));

  // (phi0, 0) data: position cos(t omega) phihat0, velocity -omega sin(t
  // omega) phihat0; E = sum |vhat|^2 + mu |xi| |phat|^2 is t-independent.
  for (double t : {0.0, 0.4, 1.3, 2.9}) {
    auto pos = dynamics::halfwave_cosine_evolve(st, t);
    double e = 0.0;
    for (long f = 0; f < 32; ++f) {
      const double omega = std::sqrt(st.mu * g.freq_norm(f));
      const cplx vel = -omega * std::sin(t * omega) * st.spectrum[f];
      e += std::norm(vel) + st.mu * g.freq_norm(f) * std::norm(pos.spectrum[f]);
    }
    static double e0 = e;  // first iteration is t = 0
    CHECK(e == doctest::Approx(e0).epsilon(1e-12));
  }
}

TEST_CASE("field-level half-wave evolution matches the lattice route") {
  auto g = make_grid(2, 2.0 * kPi, 64);
  std::vector<cplx> phihat(64, cplx{0.0, 0.0});
  phihat[3] = cplx{1.0, 0.0} * g.box_length;
  phihat[4] = cplx{0.7, -0.2} * g.box_length;
  phihat[5] = cplx{0.0, 0.4} * g.box_length;

  spectral::ModeSpec mode;
  mode.kappa = 1.0;
  mode.mu = 5.0;
  mode.n = 2;
  std::vector<double> xg;
  for (int i = 0; i <= 400; ++i) xg.push_back(2.0 * i / 400.0);
  Field phi_field = field_from_spectrum(g, {0.0}, phihat);
  Field u0 = synthesis::synth_gallery_mode(phi_field.values, mode, g, xg);

  const double t = 0.83;
  Field ut = dynamics::halfwave_evolve(u0, t);

  HalfWaveState st;
  st.grid = g;
  st.mu = 5.0;
  st.spectrum = phihat;
  auto evolved = dynamics::halfwave_evolve(st, t);
  for (long f = 0; f < 64; ++f)
    CHECK(std::abs(ut.spectrum_at(0, f) - evolved.spectrum[f]) <=
          1e-12 * g.box_length);

  // cosine data propagates by the cos(t omega) multiplier instead
  Field utc = dynamics::halfwave_evolve(u0, t, /*cosine_data=*/true);
  auto evolved_c = dynamics::halfwave_cosine_evolve(st, t);
  for (long f = 0; f < 64; ++f)
    CHECK(std::abs(utc.spectrum_at(0, f) - evolved_c.spectrum[f]) <=
          1e-12 * g.box_length);
}

TEST_CASE("packet half-wave evolution is the global carrier phase") {
  synthesis::PacketSpec spec;
  spec.j = 2;
  spec.d = 2;
  spec.kappa = 1.0;
  auto g = synthesis::packet_grid(2, 2, spec.window);
  auto xg = synthesis::packet_normal_grid(2, 2, spec.s_max);
  Field base = synthesis::wave_packet(spec, 0.0, g, xg);

  const double t = 0.29;
  Field evolved = dynamics::halfwave_evolve(base, t);
  // mu |xi'| = 2^{2j} across the annulus, so the multiplier is e^{-i t 2^j};
  // wave_packet at time -t applies the same phase.
  Field phased = synthesis::scaled(base, std::polar(1.0, -t * 4.0));
  CHECK(max_abs_diff(evolved.values, phased.values) <= 1e-12 * max_abs(base.values));
  Field direct = synthesis::wave_packet(spec, -t, g, xg);
  CHECK(max_abs_diff(evolved.values, direct.values) <= 1e-12 * max_abs(base.values));

  Field bankless = base;
  bankless.harmonics.clear();
  CHECK_THROWS_AS(dynamics::halfwave_evolve(bankless, 0.1), ValidationError);
}

// ---------------------------------------------------------------------------
// radial leapfrog oracle
// ---------------------------------------------------------------------------

TEST_CASE("radial oracle: input validation") {
  std::vector<double> xg = synthesis::graded_grid(1e-4, 0.02, 5.0);
  std::vector<cplx> zero(xg.size(), cplx{0.0, 0.0});
  const double limit = dynamics::radial_stability_limit(1.0, 1.0, xg);
  CHECK(limit > 0.0);

  CHECK_THROWS_AS(
      dynamics::radial_evolve_oracle(0.0, 1.0, xg, zero, zero, 1.0, 0.5 * limit),
      ValidationError);
  CHECK_THROWS_AS(
      dynamics::radial_evolve_oracle(1.0, -1.0, xg, zero, zero, 1.0, 0.5 * limit),
      ValidationError);
  CHECK_THROWS_AS(
      dynamics::radial_evolve_oracle(1.0, 1.0, xg, zero, zero, 1.0, 2.0 * limit),
      ValidationError);

  std::vector<double> off = xg;
  for (double& x : off) x += 0.5;  // does not start at 0
  CHECK_THROWS_AS(
      dynamics::radial_evolve_oracle(1.0, 1.0, off, zero, zero, 1.0, 0.5 * limit),
      ValidationError);

  std::vector<cplx> flat(xg.size(), cplx{1.0, 0.0});  // no decay at truncation
  CHECK_THROWS_AS(
      dynamics::radial_evolve_oracle(1.0, 1.0, xg, flat, zero, 1.0, 0.5 * limit),
      ValidationError);
}

TEST_CASE("radial oracle: zero data stays zero") {
  std::vector<double> xg = synthesis::graded_grid(1e-4, 0.02, 5.0);
  std::vector<cplx> zero(xg.size(), cplx{0.0, 0.0});
  const double limit = dynamics::radial_stability_limit(1.0, 1.0, xg);
  auto out = dynamics::radial_evolve_oracle(1.0, 1.0, xg, zero, zero, 1.0,
                                            0.9 * limit);
  CHECK(max_abs(out.profile) == 0.0);
  CHECK(max_abs(out.velocity) == 0.0);
  CHECK(out.energy == 0.0);
  CHECK(out.energy_drift == 0.0);
  CHECK(out.steps >= 1);
}

TEST_CASE("radial oracle: quantized modes follow cos(t sqrt(mu |xi'|)) B") {
  // s-units run (xi = 1): the per-frequency equation at general |xi'| is the
  // exact rescaling x -> |xi'| x, t -> sqrt(|xi'|) t of this one. The n = 5
  // profiles need h ~ 0.003 to push the second-order spatial error below the
  // 1e-4 target.
  std::vector<double> xg = synthesis::graded_grid(1e-5, 0.003, 30.0);
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (int n = 0; n <= 5; ++n) {
      CAPTURE(kappa);
      CAPTURE(n);
      const double mu = spectral::quantized_mu(n, kappa);
      const double omega = std::sqrt(mu);
      std::vector<cplx> v0(xg.size()), zero(xg.size(), cplx{0.0, 0.0});
      for (std::size_t i = 0; i < xg.size(); ++i)
        v0[i] = cplx{b_profile(kappa, n, xg[i]), 0.0};
      const double peak = max_abs(v0);
      const double period = 2.0 * kPi / omega;
      const double limit = dynamics::radial_stability_limit(1.0, kappa, xg);
      auto out = dynamics::radial_evolve_oracle(1.0, kappa, xg, v0, zero,
                                                period, limit);
      const double c = std::cos(omega * period);  // == cos(2 pi) = 1 - eps
      double err = 0.0;
      for (std::size_t i = 0; i < xg.size(); ++i)
        err = std::max(err, std::abs(out.profile[i] - c * v0[i]));
      CHECK(err <= 1e-4 * peak);
      CHECK(out.energy_drift <= 1e-6);
    }
  }
}

TEST_CASE("radial oracle: half-period sign flip of an odd multiple") {
  // quarter/half-period checks catch phase-speed errors a full period hides
  std::vector<double> xg = synthesis::graded_grid(1e-5, 0.003, 30.0);
  const double kappa = 1.0;
  const int n = 2;
  const double mu = spectral::quantized_mu(n, kappa);  // 5
  const double omega = std::sqrt(mu);
  std::vector<cplx> v0(xg.size()), zero(xg.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < xg.size(); ++i)
    v0[i] = cplx{b_profile(kappa, n, xg[i]), 0.0};
  const double peak = max_abs(v0);
  const double limit = dynamics::radial_stability_limit(1.0, kappa, xg);

  const double t_half = kPi / omega;
  auto out = dynamics::radial_evolve_oracle(1.0, kappa, xg, v0, zero, t_half,
                                            limit);
  double err = 0.0;
  for (std::size_t i = 0; i < xg.size(); ++i)
    err = std::max(err, std::abs(out.profile[i] + v0[i]));  // cos(pi) = -1
  CHECK(err <= 1e-4 * peak);
}

TEST_CASE("radial oracle: discrete energy matches the quadratic form") {
  std::vector<double> xg = synthesis::graded_grid(1e-5, 0.0075, 30.0);
  const double kappa = 1.0;
  const int n = 3;
  const double mu = spectral::quantized_mu(n, kappa);
  std::vector<cplx> v0(xg.size()), zero(xg.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < xg.size(); ++i)
    v0[i] = cplx{b_profile(kappa, n, xg[i]), 0.0};
  const double limit = dynamics::radial_stability_limit(1.0, kappa, xg);

  // ten periods of conservation
  const double t_end = 10.0 * 2.0 * kPi / std::sqrt(mu);
  auto out =
      dynamics::radial_evolve_oracle(1.0, kappa, xg, v0, zero, t_end, limit);
  CHECK(out.energy_drift <= 1e-6);
  CHECK(out.dt <= limit);
  CHECK(out.steps >= 1);

  // with zero velocity E(0) = <B, (S+K) B> approximates Q(B)
  spectral::ModeSpec spec;
  spec.kappa = kappa;
  spec.mu = mu;
  spec.n = n;
  auto profile = spectral::closed_form_profile(spec, 1.0, 30.0);
  const double q = spectral::quadratic_form(profile, 1.0, kappa);
  CHECK(out.energy == doctest::Approx(q).epsilon(2e-3));
}

TEST_CASE("radial oracle: complex carrier data rotates by e^{i t}") {
  // j = 0 packet frequency: B = e^{-s}, velocity i B, solution e^{i t} B
  std::vector<double> xg = synthesis::graded_grid(1e-5, 0.015, 30.0);
  std::vector<cplx> v0(xg.size()), w0(xg.size());
  for (std::size_t i = 0; i < xg.size(); ++i) {
    v0[i] = cplx{std::exp(-xg[i]), 0.0};
    w0[i] = cplx{0.0, 1.0} * v0[i];
  }
  const double limit = dynamics::radial_stability_limit(1.0, 1.0, xg);
  const double t_end = 2.0 * kPi;
  auto out = dynamics::radial_evolve_oracle(1.0, 1.0, xg, v0, w0, t_end, limit);
  const cplx rot = std::polar(1.0, t_end);
  double err = 0.0, verr = 0.0;
  for (std::size_t i = 0; i < xg.size(); ++i) {
    err = std::max(err, std::abs(out.profile[i] - rot * v0[i]));
    verr = std::max(verr, std::abs(out.velocity[i] - rot * w0[i]));
  }
  CHECK(err <= 1e-4);
  CHECK(verr <= 1e-4);
  CHECK(out.energy_drift <= 1e-6);
}

// ---------------------------------------------------------------------------
// oscillatory integral and stationary phase
// ---------------------------------------------------------------------------

TEST_CASE("oscillatory integral: small lambda limit is the window mass") {
  Window psi{0.3};
  // int psi over R:   0.26639628970084766
  // int psi over R^2: 0.83690862666776132
  auto j2 = dynamics::oscillatory_J({0.2}, 0, 1e-6, 1.0, psi);
  CHECK(j2.real() == doctest::Approx(0.26639628970084766).epsilon(1e-5));
  CHECK(std::abs(j2.imag()) <= 1e-5);
  auto j3 = dynamics::oscillatory_J({0.1, 0.0}, 0, 1e-6, 1.0, psi);
  CHECK(j3.real() == doctest::Approx(0.83690862666776132).epsilon(1e-5));
  CHECK(std::abs(j3.imag()) <= 1e-5);
}

TEST_CASE("oscillatory integral: frozen values") {
  Window psi{0.3};
  auto j_mid = dynamics::oscillatory_J({0.55}, 0, 10.0, 1.0, psi);
  CHECK(std::abs(j_mid - cplx{-0.082969286398125768, 0.11873086712539283}) <=
        1e-13);

  auto j_hi = dynamics::oscillatory_J({0.5}, 0, 1000.0, 1.0, psi);
  CHECK(std::abs(j_hi - cplx{-0.056230536354251627, -0.014334781810823427}) <=
        1e-12);

  // the 2-D tensor rule bottoms out at ~1e-11 absolute: the bump is flat to
  // all orders at the annulus edges but its high derivatives peak just inside
  auto j_d3 = dynamics::oscillatory_J({0.0, 0.0}, 0, 300.0, 1.0, psi);
  CHECK(std::abs(j_d3 - cplx{-3.2335965074706058e-5, -0.00037754271502716187}) <=
        1e-10);
}

TEST_CASE("oscillatory integral: d = 3 agrees with the polar Bessel reduction") {
  Window psi{0.3};
  const double lambda = 500.0, zmag = 0.45;
  auto tensor = dynamics::oscillatory_J({zmag, 0.0}, 0, lambda, 1.0, psi);

  // J = 2 pi int J0(lambda |z| rho) e^{-i lambda sqrt(rho)} psi(rho) rho drho
  const int m = 60000;
  const double a = 0.7, b = 1.3, h = (b - a) / m;
  cplx acc{0.0, 0.0};
  for (int i = 0; i <= m; ++i) {
    const double rho = a + i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double bump = psi.value(rho);
    if (bump == 0.0) continue;
    const double bess = std::cyl_bessel_j(0.0, lambda * zmag * rho);
    acc += w * bess * bump * rho * std::polar(1.0, -lambda * std::sqrt(rho));
  }
  const cplx bessel = 2.0 * kPi * acc * (h / 3.0);
  CHECK(std::abs(tensor - bessel) <= 1e-8 * std::abs(bessel));
}

TEST_CASE("oscillatory integral: argument validation and budget") {
  Window psi{0.3};
  CHECK_THROWS_AS(dynamics::oscillatory_J({0.1, 0.2, 0.3}, 0, 10.0, 1.0, psi),
                  ValidationError);
  CHECK_THROWS_AS(dynamics::oscillatory_J({0.5}, 0, 0.0, 1.0, psi),
                  ValidationError);
  CHECK_THROWS_AS(dynamics::oscillatory_J({0.5}, 0, 10.0, -1.0, psi),
                  ValidationError);
  CHECK_THROWS_AS(dynamics::oscillatory_J({0.5}, 0, 1.2e4, 1.0, psi),
                  NumericalError);
  CHECK_THROWS_AS(dynamics::oscillatory_J({0.5, 0.0}, 0, 2.5e3, 1.0, psi),
                  NumericalError);
}

TEST_CASE("stationary phase: Hessian closed form against finite differences") {
  // G(eta) = c |eta|^{1/2}, c = 2^{-j} sqrt(mu); j = 0, mu = 1, |eta| = 1
  const double c = 1.0;
  const auto G2 = [&](double x, double y) {
    return c * std::sqrt(std::sqrt(x * x + y * y));
  };
  const double h = 1e-5;
  // d = 3 Hessian at (1, 0): radial -1/4, tangential +1/2, det -1/8
  const double gxx =
      (G2(1.0 + h, 0.0) - 2.0 * G2(1.0, 0.0) + G2(1.0 - h, 0.0)) / (h * h);
  const double gyy =
      (G2(1.0, h) - 2.0 * G2(1.0, 0.0) + G2(1.0, -h)) / (h * h);
  const double gxy = (G2(1.0 + h, h) - G2(1.0 + h, -h) - G2(1.0 - h, h) +
                      G2(1.0 - h, -h)) /
                     (4.0 * h * h);
  CHECK(gxx == doctest::Approx(-0.25).epsilon(1e-5));
  CHECK(gyy == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(std::abs(gxy) <= 1e-6);
  CHECK(gxx * gyy - gxy * gxy == doctest::Approx(-0.125).epsilon(1e-5));
  // d = 2: G'' at eta = 1 is -1/4
  const auto G1 = [&](double x) { return c * std::sqrt(x); };
  const double g11 = (G1(1.0 + h) - 2.0 * G1(1.0) + G1(1.0 - h)) / (h * h);
  CHECK(g11 == doctest::Approx(-0.25).epsilon(1e-5));
}

TEST_CASE("stationary phase: prediction value and admissible-shell errors") {
  Window psi{0.3};
  // z = 0.5, j = 0, mu = 1: critical point |eta0| = 1 exactly, psi = e^{-1},
  // |det Hess| = 1/4, signature +1, Phi0 = -1/2.
  const double lambda = 1000.0;
  auto pred = dynamics::stationary_phase_prediction({0.5}, 0, lambda, 1.0, psi);
  const double mag = 2.0 * std::sqrt(2.0 * kPi / lambda) * std::exp(-1.0);
  CHECK(std::abs(pred) == doctest::Approx(mag).epsilon(1e-12));
  const cplx expected = std::polar(mag, -lambda * 0.5 + kPi / 4.0);
  CHECK(std::abs(pred - expected) <= 1e-12);

  // frozen quadrature/prediction ratio at lambda = 1e3 (leading-order error
  // is ~0.5%, well within the 10% asymptotic-regime bound)
  auto j_hi = dynamics::oscillatory_J({0.5}, 0, lambda, 1.0, psi);
  CHECK(std::abs(j_hi) / std::abs(pred) ==
        doctest::Approx(0.99499127867622847).epsilon(1e-6));
  CHECK(std::abs(std::abs(j_hi) / std::abs(pred) - 1.0) <= 0.1);

  // d = 3 at the shell center: within 10% as well
  auto pred3 =
      dynamics::stationary_phase_prediction({0.5, 0.0}, 0, lambda, 1.0, psi);
  auto j3 = dynamics::oscillatory_J({0.5, 0.0}, 0, lambda, 1.0, psi);
  CHECK(std::abs(std::abs(j3) / std::abs(pred3) - 1.0) <= 0.1);

  CHECK_THROWS_AS(
      dynamics::stationary_phase_prediction({0.65}, 0, lambda, 1.0, psi),
      ValidationError);  // |eta0| = 0.59 below the shell
  CHECK_THROWS_AS(
      dynamics::stationary_phase_prediction({0.2}, 0, lambda, 1.0, psi),
      ValidationError);  // |eta0| = 6.25 above the shell
  CHECK_THROWS_AS(
      dynamics::stationary_phase_prediction({0.0}, 0, lambda, 1.0, psi),
      ValidationError);
}

TEST_CASE("dispersive scan: sup covers the central critical point") {
  Window psi{0.3};
  const double direct = std::abs(dynamics::oscillatory_J({0.5}, 0, 200.0, 1.0, psi));
  CHECK(dynamics::sup_abs_J(0, 200.0, 1.0, psi, 2) >= 0.999 * direct);
}

TEST_CASE("dispersive scan: scale prefactor of sup|J|") {
  Window psi{0.3};
  // The decay envelope t^{-1/2} 2^{-j/2} (d = 2) reads two ways through
  // lambda = t 2^{2j}: at fixed t, sup_z |J| falls by 2^{-1/2} per scale; at
  // fixed lambda it GROWS by 2^{+1/2} per scale (lambda^{-1/2} 2^{+j/2}).
  // Both checks stay inside the settled asymptotic regime: the effective
  // Hessian parameter lambda 2^{-j}/2 must exceed ~200 or second-order
  // stationary-phase corrections distort the ratios (see the fit test below).
  std::vector<double> fixed_lambda;
  for (int j = 0; j <= 4; ++j)
    fixed_lambda.push_back(dynamics::sup_abs_J(j, 6400.0, 1.0, psi, 2));
  for (int j = 0; j < 4; ++j) {
    const double growth = fixed_lambda[j + 1] / fixed_lambda[j];
    CHECK(std::abs(growth / std::sqrt(2.0) - 1.0) <= 0.1);
  }

  const double t = 400.0;
  std::vector<double> fixed_t;
  for (int j = 0; j <= 2; ++j)
    fixed_t.push_back(
        dynamics::sup_abs_J(j, t * std::ldexp(1.0, 2 * j), 1.0, psi, 2));
  for (int j = 0; j < 2; ++j) {
    const double decay = fixed_t[j + 1] / fixed_t[j];
    CHECK(std::abs(decay * std::sqrt(2.0) - 1.0) <= 0.1);
  }
}

TEST_CASE("dispersive decay fit: slope -(d-1)/2") {
  Window psi{0.3};
  // sup|J| sqrt(lambda) settles to within ~1% of its limit only for
  // lambda >~ 800 in d = 2 (the Fresnel zone sqrt(2 pi / (lambda |G''|))
  // must sit well inside the window support), so the fit points live in the
  // settled part of the budget window.
  ScalingFit f2 = dynamics::dispersive_decay_fit(
      0, {800.0, 1325.0, 2196.0, 3639.0, 6030.0, 9991.0}, 1.0, psi, 2);
  CHECK(f2.predicted_slope == -0.5);
  CHECK(std::abs(f2.slope + 0.5) <= 0.05);
  CHECK(f2.pass);
  CHECK(f2.xs.size() == 6);
  CHECK(f2.std_error <= 0.05);

  ScalingFit f3 = dynamics::dispersive_decay_fit(
      0, {400.0, 550.0, 756.0, 1040.0, 1430.0, 1966.0}, 1.0, psi, 3);
  CHECK(f3.predicted_slope == -1.0);
  CHECK(std::abs(f3.slope + 1.0) <= 0.05);
  CHECK(f3.pass);
}

TEST_CASE("dispersive decay fit: input validation") {
  Window psi{0.3};
  CHECK_THROWS_AS(
      dynamics::dispersive_decay_fit(0, {100.0, 200.0, 400.0}, 1.0, psi, 2),
      ValidationError);
  CHECK_THROWS_AS(dynamics::dispersive_decay_fit(
                      0, {20.0, 40.0, 80.0, 160.0, 320.0, 640.0}, 1.0, psi, 2),
                  ValidationError);
  CHECK_THROWS_AS(
      dynamics::dispersive_decay_fit(
          0, {100.0, 100.0, 200.0, 400.0, 800.0, 1600.0}, 1.0, psi, 2),
      ValidationError);
}

// ---------------------------------------------------------------------------
// full-equation residual of the evolved gallery mode
// ---------------------------------------------------------------------------

TEST_CASE("evolved gallery mode satisfies the wave equation discretely") {
  // u(t) = sum_k e^{-it sqrt(mu |xi|)} B(mu, |xi| x_d) phihat_k e^{i k x'}
  // must satisfy d_t^2 u = kappa x_d (Lap' + d_d^2) u + d_d u. Second time
  // derivative by centered differences, tangential Laplacian spectrally,
  // normal derivatives by centered differences on a fine uniform grid.
  auto g = make_grid(2, 2.0 * kPi, 64);
  std::vector<cplx> phihat(64, cplx{0.0, 0.0});
  phihat[3] = cplx{1.0, 0.0} * g.box_length;
  phihat[4] = cplx{0.7, -0.2} * g.box_length;
  phihat[5] = cplx{0.0, 0.4} * g.box_length;
  Field phi_field = field_from_spectrum(g, {0.0}, phihat);

  spectral::ModeSpec mode;
  mode.kappa = 1.0;
  mode.mu = 5.0;
  mode.n = 2;
  const int ns = 4096;
  const double x_hi = 2.4, hx = x_hi / ns;
  std::vector<double> xg(ns + 1);
  for (int i = 0; i <= ns; ++i) xg[i] = i * hx;
  Field u0 = synthesis::synth_gallery_mode(phi_field.values, mode, g, xg);

  const double t0 = 0.4, dt = 1e-3;
  Field um = dynamics::halfwave_evolve(u0, t0 - dt);
  Field uc = dynamics::halfwave_evolve(u0, t0);
  Field up = dynamics::halfwave_evolve(u0, t0 + dt);

  // tangential Laplacian of the central snapshot
  Field lap = uc;
  const long m = g.lattice_size();
  for (long s = 0; s < lap.slice_count(); ++s)
    for (long f = 0; f < m; ++f) {
      const double xi2 = g.freq_norm(f) * g.freq_norm(f);
      lap.tangential_spectrum[s * m + f] *= -xi2;
    }
  synthesis::values_from_spectrum(lap);

  double scale = 0.0, worst = 0.0;
  for (long s = 1; s + 1 < uc.slice_count(); ++s) {
    const double x = xg[s];
    for (long f = 0; f < m; ++f) {
      const cplx utt = (up.values[(s)*m + f] - 2.0 * uc.values[s * m + f] +
                        um.values[s * m + f]) /
                       (dt * dt);
      const cplx udd = (uc.values[(s + 1) * m + f] -
                        2.0 * uc.values[s * m + f] +
                        uc.values[(s - 1) * m + f]) /
                       (hx * hx);
      const cplx ud = (uc.values[(s + 1) * m + f] -
                       uc.values[(s - 1) * m + f]) /
                      (2.0 * hx);
      const cplx residual =
          utt - (mode.kappa * x * (lap.values[s * m + f] + udd) + ud);
      worst = std::max(worst, std::abs(residual));
      scale = std::max(scale, std::abs(utt));
    }
  }
  CHECK(scale > 0.0);
  CHECK(worst <= 1e-5 * scale);
}

// ---------------------------------------------------------------------------
// mixed-norm boundedness of the evolved gallery ladder (small version)
// ---------------------------------------------------------------------------

TEST_CASE("evolved gallery ladder: mixed-norm ratio stays bounded") {
  // (q, r) = (4, inf) in d = 2 with kappa = 1: the mixed norm divided by
  // 2^{2j [(7/4)(1/2) + 1/(2 kappa) - 1]} ||(0, grad u0)||_H stays within a
  // fixed band across scales.
  const double kappa = 1.0;
  const int n_mode = 1;
  const double mu = spectral::quantized_mu(n_mode, kappa);  // 3
  const double exponent = (7.0 / 4.0) * 0.5 + 1.0 / (2.0 * kappa) - 1.0;
  Window window{0.1};

  std::vector<double> ratios;
  for (int j = 1; j <= 2; ++j) {
    const int npts = 512;
    const double scale = std::ldexp(1.0, 2 * j);
    const double need = 1.15 * 1.1 * scale / (npts / 2);
    const double spacing = std::exp2(std::ceil(std::log2(need)));
    auto g = make_grid(2, 2.0 * kPi / spacing, npts);

    std::vector<cplx> phihat(npts, cplx{0.0, 0.0});
    for (long f = 0; f < npts; ++f) {
      const double r = g.freq_norm(f) / scale;
      const double w = window.value(r);
      if (w > 0.0) phihat[f] = cplx{w, 0.0} * g.box_length;
    }
    Field phi_field = field_from_spectrum(g, {0.0}, phihat);

    std::vector<double> xg = synthesis::graded_grid(1e-5, 0.015, 25.0);
    for (double& x : xg) x /= scale;
    spectral::ModeSpec mode;
    mode.kappa = kappa;
    mode.mu = mu;
    mode.n = n_mode;
    Field u0 = synthesis::synth_gallery_mode(phi_field.values, mode, g, xg);

    // data norm ||(0, grad u0)||_H
    Field grad = measure::gradient_magnitude(u0);
    Field zero;
    zero.grid = u0.grid;
    zero.normal_grid = u0.normal_grid;
    zero.values.assign(u0.values.size(), cplx{0.0, 0.0});
    zero.tangential_spectrum.assign(u0.values.size(), cplx{0.0, 0.0});
    const double data_h = measure::h_norm(zero, grad, kappa);

    measure::NormRequest req;
    req.q = 4.0;
    req.r = std::numeric_limits<double>::infinity();
    req.t0 = 0.0;
    req.t1 = 1.0;
    req.time_samples = 8 << j;
    std::vector<Field> snaps;
    snaps.reserve(req.time_samples);
    for (int k = 0; k < req.time_samples; ++k) {
      const double t = req.t0 + (req.t1 - req.t0) * k / (req.time_samples - 1.0);
      snaps.push_back(dynamics::halfwave_evolve(u0, t, /*cosine_data=*/true));
    }
    const auto report = measure::mixed_norm(snaps, req);
    ratios.push_back(report.value /
                     (std::pow(scale, exponent) * data_h));
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 3.0);
}
