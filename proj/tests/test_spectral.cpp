/// @file test_spectral.cpp
/// Mode profiles: closed-form series vs shooting oracle, quadrature of the
/// energy form, graded grids, and asymptotic-regime diagnostics. Zero
/// locations were frozen from arbitrary-precision root finding.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "acwave/errors.hpp"
#include "acwave/quadrature.hpp"
#include "acwave/spectral.hpp"

#include <cmath>
#include <vector>

using namespace acwave;
using namespace acwave::spectral;

TEST_CASE("quantized eigenvalues") {
  CHECK(quantized_mu(0, 0.37) == 1.0);
  CHECK(quantized_mu(1, 0.5) == 2.0);
  CHECK(quantized_mu(3, 1.0) == 7.0);
  CHECK_THROWS_AS(quantized_mu(-1, 1.0), ValidationError);
  CHECK_THROWS_AS(quantized_mu(2, 0.0), ValidationError);
}

TEST_CASE("mode spec validation") {
  ModeSpec bad_kappa{-1.0, 1.0, {}};
  CHECK_THROWS_AS(bad_kappa.validate(), ValidationError);
  ModeSpec bad_mu{1.0, 0.0, {}};
  CHECK_THROWS_AS(bad_mu.validate(), ValidationError);
  ModeSpec bad_pair{1.0, 3.5, 1};  // 2*1*1+1 = 3, not 3.5
  CHECK_THROWS_AS(bad_pair.validate(), ValidationError);
  CHECK_NOTHROW(ModeSpec::quantized(0.5, 4).validate());
}

TEST_CASE("graded grid shape") {
  auto s = graded_s_grid(20.0);
  REQUIRE(s.size() >= 16);
  CHECK(s.front() == 0.0);
  CHECK(s[1] <= 1e-6);
  CHECK(s.back() == doctest::Approx(20.0).epsilon(1e-12));
  double hmax = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    CHECK(s[i + 1] > s[i]);
    hmax = std::max(hmax, s[i + 1] - s[i]);
  }
  CHECK(hmax <= 0.015 + 1e-12);
}

TEST_CASE("non-uniform Simpson quadrature") {
  // irregular grid, parabola integrated exactly
  std::vector<double> x = {0.0, 0.1, 0.35, 0.5, 0.62, 0.8, 1.0};
  std::vector<double> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = 3.0 * x[i] * x[i];
  CHECK(quadrature::integrate_grid(x, f) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = 2.0 * x[i] + 0.25;
  CHECK(quadrature::trapezoid_grid(x, f) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("closed form: decaying exponential branch") {
  ModeSpec spec{0.7, 1.0, {}};
  auto p = closed_form_profile(spec, 1.0, 30.0);
  for (std::size_t i = 0; i < p.s_grid.size(); i += 97) {
    double e = std::exp(-p.s_grid[i]);
    CHECK(p.B[i] == doctest::Approx(e).epsilon(1e-12));
    CHECK(p.dB[i] == doctest::Approx(-e).epsilon(1e-12));
  }
  CHECK(mode_ode_residual(p) <= 1e-10);
  CHECK(p.contamination_bound == 0.0);
}

TEST_CASE("closed form: explicit degree-2 polynomial") {
  auto p = closed_form_profile(ModeSpec::quantized(1.0, 2), 1.0, 25.0);
  for (std::size_t i = 0; i < p.s_grid.size(); i += 131) {
    double s = p.s_grid[i];
    double ref = std::exp(-s) * (1.0 - 4.0 * s + 2.0 * s * s);
    CHECK(p.B[i] == doctest::Approx(ref).epsilon(1e-11));
  }
  CHECK(mode_ode_residual(p) <= 1e-8);
}

TEST_CASE("closed form: boundary series data") {
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (int n = 0; n <= 5; ++n) {
      auto p = closed_form_profile(ModeSpec::quantized(kappa, n), 1.0, 15.0);
      CAPTURE(kappa);
      CAPTURE(n);
      CHECK(p.B[0] == 1.0);
      CHECK(p.dB[0] == doctest::Approx(-p.spec.mu).epsilon(1e-12));
    }
  }
}

TEST_CASE("residual detects perturbation") {
  auto p = closed_form_profile(ModeSpec::quantized(0.5, 1), 1.0, 20.0);
  for (std::size_t i = 0; i < p.s_grid.size(); ++i)
    p.B[i] += 1e-3 * p.s_grid[i];
  CHECK(mode_ode_residual(p) >= 1e-4);
}

TEST_CASE("non-terminating truncation is refused") {
  ModeSpec spec{1.0, 1.5, {}};
  CHECK_THROWS_AS(closed_form_profile(spec, 1.0, 20.0), NumericalError);
}

TEST_CASE("energy quadratic form") {
  SUBCASE("decaying exponential gives 1/2") {
    auto p = closed_form_profile(ModeSpec{1.0, 1.0, 0}, 1.0, 20.0);
    CHECK(quadratic_form(p, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("zero profile gives 0") {
    auto p = closed_form_profile(ModeSpec{1.0, 1.0, 0}, 1.0, 20.0);
    std::fill(p.B.begin(), p.B.end(), 0.0);
    std::fill(p.dB.begin(), p.dB.end(), 0.0);
    CHECK(quadratic_form(p, 1.0, 1.0) == 0.0);
  }
  SUBCASE("argument-dilation scaling") {
    // f(x) -> f(2x) with doubled xi_norm is the same B sampled at doubled
    // xi_norm; Q picks up the factor 2^{1 - 1/kappa}
    auto p = closed_form_profile(ModeSpec::quantized(0.5, 1), 1.0, 25.0);
    double q1 = quadratic_form(p, 1.0, 0.5);
    double q2 = quadratic_form(p, 2.0, 0.5);
    CHECK(q1 > 0.0);
    CHECK(q2 / q1 == doctest::Approx(std::pow(2.0, 1.0 - 2.0)).epsilon(1e-9));
  }
  SUBCASE("singular branch is rejected") {
    // B ~ s^{1 - 1/kappa} = s^{-1} at kappa = 1/2: energy integrand peaks at
    // the boundary instead of vanishing
    ModeProfile p;
    p.spec = ModeSpec{0.5, 2.0, {}};
    p.s_grid = graded_s_grid(5.0, /*include_zero=*/false);
    p.B.resize(p.s_grid.size());
    p.dB.resize(p.s_grid.size());
    p.d2B.assign(p.s_grid.size(), 0.0);
    for (std::size_t i = 0; i < p.s_grid.size(); ++i) {
      p.B[i] = 1.0 / p.s_grid[i];
      p.dB[i] = -1.0 / (p.s_grid[i] * p.s_grid[i]);
    }
    CHECK_THROWS_AS(quadratic_form(p, 1.0, 0.5), NumericalError);
  }
  SUBCASE("insufficient decay at truncation is rejected") {
    auto p = closed_form_profile(ModeSpec::quantized(1.0, 2), 1.0, 2.0);
    CHECK_THROWS_AS(quadratic_form(p, 1.0, 1.0), NumericalError);
  }
}

TEST_CASE("shooting oracle") {
  SUBCASE("decaying exponential") {
    auto p = shooting_oracle(ModeSpec{1.0, 1.0, 0}, 1.0, 20.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < p.s_grid.size(); ++i)
      worst = std::max(worst, std::abs(p.B[i] - std::exp(-p.s_grid[i])));
    CHECK(worst <= 1e-7);
  }
  SUBCASE("matches the closed form") {
    struct Case {
      double kappa;
      int n;
    };
    for (Case c : {Case{0.5, 1}, Case{2.0 / 3.0, 3}, Case{1.0, 5}, Case{2.0, 10}}) {
      CAPTURE(c.kappa);
      CAPTURE(c.n);
      ModeSpec spec = ModeSpec::quantized(c.kappa, c.n);
      auto shoot = shooting_oracle(spec, c.kappa, 20.0);
      auto closed = closed_form_profile(spec, 1.0, 20.0);
      REQUIRE(shoot.s_grid.size() == closed.s_grid.size());
      double sup = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < shoot.s_grid.size(); ++i) {
        sup = std::max(sup, std::abs(shoot.B[i] - closed.B[i]));
        scale = std::max(scale, std::abs(closed.B[i]));
      }
      CHECK(sup / scale <= 1e-6);
      CHECK(mode_ode_residual(closed) <= 1e-8);
    }
  }
  SUBCASE("non-quantized mu blows up") {
    ModeSpec off{1.0, 1.5, {}};
    CHECK_THROWS_AS(shooting_oracle(off, 1.0, 25.0), NumericalError);
  }
}

TEST_CASE("asymptotic-regime diagnostics") {
  SUBCASE("ground profile log-derivatives") {
    auto p = closed_form_profile(ModeSpec{1.0, 1.0, 0}, 1.0, 20.0);
    auto rep = wkb_diagnostics(p);
    CHECK(rep.small_s_logderiv == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(rep.large_s_logderiv == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(rep.zeros_found == 0);  // zero checks gated on n >= 8
  }
  SUBCASE("high mode zero structure") {
    auto p = closed_form_profile(ModeSpec::quantized(1.0, 20), 1.0, 22.0);
    auto rep = wkb_diagnostics(p);
    // first zeros of the degree-20 profile, frozen from 50-digit root finding
    const std::vector<double> ref = {0.035269944846, 0.186063409001,
                                     0.458291051242, 0.853653265514,
                                     1.374599627655, 2.024462656925};
    REQUIRE(rep.zeros_found >= static_cast<int>(ref.size()));
    for (std::size_t k = 0; k < ref.size(); ++k)
      CHECK(rep.zeros[k] == doctest::Approx(ref[k]).epsilon(1e-5));
    // log-derivative at s -> 0 equals -mu
    CHECK(rep.small_s_logderiv == doctest::Approx(-41.0).epsilon(1e-3));
    // spacing law holds to 10% where s << mu/kappa ...
    CHECK(rep.zero_spacing_dev_inner == rep.zero_spacing_dev_inner);  // not NaN
    CHECK(rep.zero_spacing_dev_inner <= 0.10);
    CHECK(rep.zero_spacing_dev_inner >= 0.02);
    // ... and visibly bends near the turning point (frozen 18%..37% band)
    CHECK(rep.zero_spacing_dev_bulk == rep.zero_spacing_dev_bulk);
    CHECK(rep.zero_spacing_dev_bulk >= 0.15);
    CHECK(rep.zero_spacing_dev_bulk <= 0.45);
  }
}
