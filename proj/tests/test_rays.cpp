/// @file test_rays.cpp
/// Bicharacteristic flows: closed form vs adaptive integrator on random
/// characteristic-set states, conservation laws, collision bookkeeping and
/// root-finding cross-checks, cusp continuation, rescaling covariance, and
/// the boundary-dwell measurement.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "acwave/errors.hpp"
#include "acwave/rays.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace acwave;
using namespace acwave::rays;

namespace {

constexpr double kPi = 3.14159265358979323846;

PhaseState make_state(double t, double xd, std::vector<double> xp, double tau,
                      double xid, std::vector<double> xip) {
  PhaseState st;
  st.t = t;
  st.xd = xd;
  st.xp = std::move(xp);
  st.tau = tau;
  st.xid = xid;
  st.xip = std::move(xip);
  return st;
}

// Random state on the characteristic set with tau < 0 (forward time).
PhaseState random_char_state(std::mt19937& rng, int d, double kappa) {
  std::uniform_real_distribution<double> uxd(0.1, 5.0);
  std::uniform_real_distribution<double> uxid(-3.0, 3.0);
  std::uniform_real_distribution<double> uxipn(0.3, 4.0);
  std::uniform_real_distribution<double> upos(-1.0, 1.0);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * kPi);
  PhaseState st;
  st.t = upos(rng);
  st.xd = uxd(rng);
  st.xid = uxid(rng);
  const double xipn = uxipn(rng);
  if (d == 2) {
    st.xip = {(rng() % 2 == 0) ? xipn : -xipn};
    st.xp = {upos(rng)};
  } else {
    const double a = uang(rng);
    st.xip = {xipn * std::cos(a), xipn * std::sin(a)};
    st.xp = {upos(rng), upos(rng)};
  }
  st.tau = -std::sqrt(kappa * st.xd * (st.xid * st.xid + xipn * xipn));
  return st;
}

double first_collision(const PhaseState& st, double kappa) {
  return collision_parameters(st, kappa, -1, -1)[0];
}

// Sup over components of |a_i - b_i| / max(1, |a_i|).
double state_distance(const PhaseState& a, const PhaseState& b) {
  auto rel = [](double u, double v) {
    return std::fabs(u - v) / std::max(1.0, std::fabs(u));
  };
  double m = std::max(std::max(rel(a.t, b.t), rel(a.xd, b.xd)),
                      std::max(rel(a.tau, b.tau), rel(a.xid, b.xid)));
  for (std::size_t i = 0; i < a.xp.size(); ++i) {
    m = std::max(m, rel(a.xp[i], b.xp[i]));
    m = std::max(m, rel(a.xip[i], b.xip[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("hamiltonian values") {
  CHECK(hamiltonian(make_state(0, 0.0, {3.0}, 0.0, 7.0, {-2.0}), 1.0) == 0.0);
  CHECK(hamiltonian(make_state(0, 1.0, {0.0}, 1.0, 0.0, {1.0}), 1.0) == 0.0);
  CHECK(hamiltonian(make_state(0, 3.0, {0.0}, 0.0, 1.0, {2.0}), 2.0) ==
        doctest::Approx(30.0).epsilon(1e-15));
  // same norm split over two tangential components
  CHECK(hamiltonian(make_state(0, 3.0, {0, 0}, 0.0, 1.0, {1.2, 1.6}), 2.0) ==
        doctest::Approx(30.0).epsilon(1e-14));
}

TEST_CASE("state validation") {
  PhaseState mismatched = make_state(0, 1.0, {0.0, 0.0}, -1.0, 0.0, {1.0});
  CHECK_THROWS_AS(mismatched.validate(), ValidationError);
  PhaseState negative_xd = make_state(0, -0.5, {0.0}, -1.0, 0.0, {1.0});
  CHECK_THROWS_AS(negative_xd.validate(), ValidationError);
  PhaseState non_finite = make_state(0, 1.0, {0.0}, -1.0, 0.0 / 0.0, {1.0});
  CHECK_THROWS_AS(non_finite.validate(), ValidationError);
  PhaseState good = make_state(0.2, 1.0, {0.0}, -1.0, 0.3, {1.0});
  CHECK_NOTHROW(good.validate());
}

TEST_CASE("characteristic-set predicate") {
  CHECK(on_characteristic_set(make_state(0, 1.0, {0.0}, -1.0, 0.0, {1.0}), 1.0));
  CHECK(on_characteristic_set(make_state(0, 0.0, {0.0}, 0.0, 5.0, {2.0}), 1.0));
  CHECK_FALSE(
      on_characteristic_set(make_state(0, 1.0, {0.0}, -1.1, 0.0, {1.0}), 1.0));
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i)
    CHECK(on_characteristic_set(random_char_state(rng, 3, 0.5), 0.5));
}

TEST_CASE("closed-form flow is the identity at s = 0") {
  const PhaseState st = make_state(0.4, 2.0, {1.0, -1.0}, -3.0, 1.5, {2.0, 0.5});
  const PhaseState out = closed_form_flow(st, 0.75, 0.0);
  CHECK(out.t == st.t);
  CHECK(out.xd == st.xd);
  CHECK(out.xp == st.xp);
  CHECK(out.tau == st.tau);
  CHECK(out.xid == st.xid);
  CHECK(out.xip == st.xip);
}

TEST_CASE("vanishing tangential frequency branch") {
  // kappa = 1, xd0 = 1, xid0 = 1: xd(s) = (s + 1)^2, xid(s) = 1/(s + 1).
  const PhaseState st = make_state(0.0, 1.0, {0.5}, -1.0, 1.0, {0.0});
  const PhaseState out = closed_form_flow(st, 1.0, 1.0);
  CHECK(out.xd == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(out.xid == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.t == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(out.xp[0] == 0.5);  // no tangential drift on this branch
  CHECK(out.tau == st.tau);

  const PhaseState num = numeric_flow(st, 1.0, 1.0, 1e-10);
  CHECK(state_distance(out, num) <= 1e-8);

  // backward flow stays valid until the frequency pole at s = -1
  CHECK_NOTHROW(closed_form_flow(st, 1.0, -0.999));
  CHECK_THROWS_AS(closed_form_flow(st, 1.0, -1.0), ValidationError);
  CHECK_THROWS_AS(closed_form_flow(st, 1.0, -1.5), ValidationError);

  // incoming ray (xid0 < 0) hits the pole forward in s
  const PhaseState in = make_state(0.0, 1.0, {0.0}, -1.0, -1.0, {0.0});
  CHECK_NOTHROW(closed_form_flow(in, 1.0, 0.999));
  CHECK_THROWS_AS(closed_form_flow(in, 1.0, 1.001), ValidationError);
}

TEST_CASE("rotating-branch kinematics") {
  // xid0 = 0, |xi'| = 1, kappa = 1: xd(s) = xd0 (1/2 + cos(2s)/2).
  const double xd0 = 1.7;
  const PhaseState st =
      make_state(0.0, xd0, {0.0}, -std::sqrt(xd0), 0.0, {1.0});
  const PhaseState a = closed_form_flow(st, 1.0, 0.3);
  CHECK(a.xd ==
        doctest::Approx(xd0 * (0.5 + 0.5 * std::cos(0.6))).epsilon(1e-14));
  CHECK(a.xid == doctest::Approx(-std::tan(0.3)).epsilon(1e-14));
  CHECK(a.t == doctest::Approx(2.0 * std::sqrt(xd0) * 0.3).epsilon(1e-14));

  // the first boundary collision sits at s = pi/2 and xd vanishes there
  CHECK(first_collision(st, 1.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  const PhaseState b = closed_form_flow(st, 1.0, kPi / 2);
  CHECK(std::fabs(b.xd) <= 1e-30);

  CHECK_THROWS_AS(closed_form_flow(st, 1.0, 1.6), ValidationError);
  CHECK_NOTHROW(closed_form_flow(st, 1.0, -0.2));
  CHECK_THROWS_AS(closed_form_flow(st, 1.0, -1.6), ValidationError);
  CHECK_THROWS_AS(closed_form_flow(st, -1.0, 0.1), ValidationError);
}

TEST_CASE("flow group property within a segment") {
  std::mt19937 rng(20240818);
  const double kappas[] = {0.5, 2.0 / 3.0, 1.0, 2.0};
  for (int i = 0; i < 40; ++i) {
    const double kappa = kappas[i % 4];
    const PhaseState st = random_char_state(rng, 2 + i % 2, kappa);
    const double sc = first_collision(st, kappa);
    const PhaseState two_leg =
        closed_form_flow(closed_form_flow(st, kappa, 0.3 * sc), kappa, 0.4 * sc);
    const PhaseState one_leg = closed_form_flow(st, kappa, 0.7 * sc);
    CHECK(state_distance(one_leg, two_leg) <= 1e-9);
  }
  // vanishing tangential frequency branch
  const PhaseState st = make_state(0.1, 2.0, {0.0}, -1.6, 0.9, {0.0});
  const PhaseState two_leg =
      closed_form_flow(closed_form_flow(st, 0.8, 0.5), 0.8, 0.7);
  const PhaseState one_leg = closed_form_flow(st, 0.8, 1.2);
  CHECK(state_distance(one_leg, two_leg) <= 1e-12);
}

TEST_CASE("adaptive integrator matches the closed form") {
  std::mt19937 rng(20240817);
  const double kappas[] = {0.5, 2.0 / 3.0, 1.0, 2.0};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double kappa = kappas[i % 4];
    const PhaseState st = random_char_state(rng, 2 + i % 2, kappa);
    const double s = 0.5 * first_collision(st, kappa);
    const PhaseState exact = closed_form_flow(st, kappa, s);
    const PhaseState num = numeric_flow(st, kappa, s, 1e-9);
    worst = std::max(worst, state_distance(exact, num));

    // dual variables are first integrals, bitwise
    CHECK(num.tau == st.tau);
    CHECK(num.xip == st.xip);
    // Hamiltonian conservation, relative to the energy scale
    const double scale = 2.0 * st.tau * st.tau;
    CHECK(std::fabs(hamiltonian(num, kappa)) <= 1e-8 * scale);
    CHECK(std::fabs(hamiltonian(exact, kappa)) <= 1e-10 * scale);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("adaptive integrator fails loudly across a collision") {
  // first collision at s = pi/2; any span crossing it must collapse
  const PhaseState st = make_state(0.0, 1.0, {0.0}, -1.0, 0.0, {1.0});
  CHECK_THROWS_AS(numeric_flow(st, 1.0, 1.6, 1e-9), NumericalError);
  CHECK_THROWS_AS(numeric_flow(st, 1.0, 2.5, 1e-9), NumericalError);
}

TEST_CASE("collision parameters") {
  const PhaseState st = make_state(0.0, 1.0, {0.0}, -1.0, 0.0, {1.0});
  CHECK(collision_parameters(st, 1.0, -1, -1)[0] ==
        doctest::Approx(kPi / 2).epsilon(1e-15));

  // spacing pi/(kappa |xi'|) = 1 when |xi'| = pi
  const PhaseState sp = make_state(0.0, 2.0, {0.0}, -2.0, 0.7, {kPi});
  const std::vector<double> sk = collision_parameters(sp, 1.0, -4, -1);
  REQUIRE(sk.size() == 4);
  for (std::size_t i = 0; i + 1 < sk.size(); ++i)
    CHECK(sk[i] - sk[i + 1] == doctest::Approx(1.0).epsilon(1e-13));

  // dyadic frequencies: time between collisions is 2 pi / 2^j
  const int j = 5;
  const double tau0 = std::pow(2.0, j);
  const double xipn = std::pow(2.0, 2 * j);
  const PhaseState dy =
      make_state(0.0, tau0 * tau0 / (xipn * xipn), {0.0}, -tau0, 0.0, {xipn});
  const std::vector<double> sd = collision_parameters(dy, 1.0, -3, -1);
  for (std::size_t i = 0; i + 1 < sd.size(); ++i) {
    const double dt = 2.0 * std::fabs(dy.tau) * (sd[i] - sd[i + 1]);
    CHECK(std::fabs(dt) ==
          doctest::Approx(2.0 * kPi / tau0).epsilon(1e-13));
  }

  const PhaseState flat = make_state(0.0, 1.0, {0.0}, -1.0, 1.0, {0.0});
  CHECK_THROWS_AS(collision_parameters(flat, 1.0, -1, -1), ValidationError);
  CHECK_THROWS_AS(collision_parameters(st, 1.0, 2, 1), ValidationError);
}

TEST_CASE("collision spacing recovered by root finding") {
  // locate two successive minima of xd(s) by bisection on a central
  // difference of the path evaluation, then compare their spacing
  const double kappa = 2.0 / 3.0;
  const PhaseState st =
      make_state(0.0, 2.1, {0.3}, -std::sqrt(kappa * 2.1 * (0.64 + 2.89)), 0.8,
                 {1.7});
  const RayPath path = reflect_and_continue(trace_ray(st, kappa), 3);
  const double ds_pred = kPi / (kappa * 1.7);
  const double h = 1e-6 * ds_pred;
  auto slope_sign = [&](double s) {
    return eval_path(path, s + h).xd - eval_path(path, s - h).xd;
  };
  std::vector<double> found;
  for (std::size_t k = 0; k + 1 < path.collisions.size(); ++k) {
    double a = path.collisions[k].s - 0.3 * ds_pred;
    double b = path.collisions[k].s + 0.3 * ds_pred;
    REQUIRE(slope_sign(a) < 0.0);
    REQUIRE(slope_sign(b) > 0.0);
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      (slope_sign(mid) < 0.0 ? a : b) = mid;
    }
    found.push_back(0.5 * (a + b));
  }
  REQUIRE(found.size() >= 2);
  for (std::size_t k = 0; k + 1 < found.size(); ++k)
    CHECK(std::fabs((found[k + 1] - found[k]) - ds_pred) <= 1e-9 * ds_pred);
}

TEST_CASE("trace and cusp continuation bookkeeping") {
  const double kappa = 1.0;
  const double xd0 = 2.0;
  const PhaseState st =
      make_state(0.0, xd0, {0.0, 0.0},
                 -std::sqrt(kappa * xd0 * (0.49 + 2.25)), 0.7, {1.2, -0.9});
  const RayPath path = reflect_and_continue(trace_ray(st, kappa), 5);
  REQUIRE(path.segments.size() == 6);
  REQUIRE(path.collisions.size() == 6);

  // collisions strictly monotone, xd vanishing there
  for (std::size_t k = 0; k < path.collisions.size(); ++k) {
    if (k > 0) CHECK(path.collisions[k].s > path.collisions[k - 1].s);
    CHECK(eval_path(path, path.collisions[k].s).xd <= 1e-9 * xd0);
  }

  // (t, xd, x') continuous across every interior collision
  const double eps = 1e-12;
  for (std::size_t k = 0; k + 1 < path.collisions.size(); ++k) {
    const double s = path.collisions[k].s;
    const PhaseState lo = eval_path(path, s - eps);
    const PhaseState hi = eval_path(path, s + eps);
    CHECK(std::fabs(hi.t - lo.t) <= 1e-9 * (1.0 + std::fabs(lo.t)));
    CHECK(std::fabs(hi.xd - lo.xd) <= 1e-9 * xd0);
    for (std::size_t i = 0; i < lo.xp.size(); ++i)
      CHECK(std::fabs(hi.xp[i] - lo.xp[i]) <=
            1e-9 * (1.0 + std::fabs(lo.xp[i])));
  }

  // tangential hop per period: pi xd0 xi' (|xi'|^2 + xid0^2) / |xi'|^3
  const double xipn2 = 1.2 * 1.2 + 0.9 * 0.9;
  const double hop_scale =
      kPi * xd0 * (xipn2 + 0.49) / (xipn2 * std::sqrt(xipn2));
  for (std::size_t k = 0; k + 1 < path.collisions.size(); ++k)
    for (std::size_t i = 0; i < st.xip.size(); ++i)
      CHECK(path.collisions[k + 1].xp[i] - path.collisions[k].xp[i] ==
            doctest::Approx(hop_scale * st.xip[i]).epsilon(1e-11));

  // normal-incidence hop reduces to pi xd0 in the direction of xi'
  const PhaseState ni = make_state(0.0, xd0, {0.0}, -2.0, 0.0, {-2.0 / xd0});
  // (characteristic set not required for collision geometry)
  const RayPath np = reflect_and_continue(trace_ray(ni, 1.0), 2);
  for (std::size_t k = 0; k + 1 < np.collisions.size(); ++k)
    CHECK(np.collisions[k + 1].xp[0] - np.collisions[k].xp[0] ==
          doctest::Approx(-kPi * xd0).epsilon(1e-12));

  CHECK_THROWS_AS(reflect_and_continue(path, -1), ValidationError);
  CHECK_THROWS_AS(eval_path(path, -0.1), ValidationError);
  CHECK_THROWS_AS(eval_path(path, path.collisions.back().s + 0.1),
                  ValidationError);
  const PhaseState flat = make_state(0.0, 1.0, {0.0}, -1.0, 1.0, {0.0});
  CHECK_THROWS_AS(trace_ray(flat, 1.0), ValidationError);
  const PhaseState at_boundary = make_state(0.0, 0.0, {0.0}, 0.0, 1.0, {1.0});
  CHECK_THROWS_AS(trace_ray(at_boundary, 1.0), ValidationError);
}

TEST_CASE("dyadic ray hits the boundary about 2^j times per unit time") {
  const int j = 6;
  const double tau0 = std::pow(2.0, j);      // 64
  const double xipn = std::pow(2.0, 2 * j);  // 4096
  const double xd0 = tau0 * tau0 / (xipn * xipn);
  const PhaseState st = make_state(0.0, xd0, {0.0}, -tau0, 0.0, {xipn});
  REQUIRE(on_characteristic_set(st, 1.0));
  const RayPath path = reflect_and_continue(trace_ray(st, 1.0), 14);
  int in_unit_time = 0;
  for (const Collision& col : path.collisions)
    if (col.t >= 0.0 && col.t <= 1.0) ++in_unit_time;
  CHECK(in_unit_time == 10);  // 1 + floor((1 - dt/2)/dt), dt = 2 pi / 2^j
  CHECK(in_unit_time >= (1 << j) / 8);
  CHECK(in_unit_time <= (1 << j));
  CHECK(path.collisions.back().t > 1.0);
}

TEST_CASE("parabolic rescaling maps rays to rays") {
  const double lam = 3.0;
  auto rescale = [&](const PhaseState& a) {
    PhaseState b = a;
    b.t = lam * a.t;
    b.xd = lam * lam * a.xd;
    b.tau = a.tau / lam;
    b.xid = a.xid / (lam * lam);
    for (std::size_t i = 0; i < a.xp.size(); ++i) {
      b.xp[i] = lam * lam * a.xp[i];
      b.xip[i] = a.xip[i] / (lam * lam);
    }
    return b;
  };
  std::mt19937 rng(99);
  for (int i = 0; i < 25; ++i) {
    const double kappa = (i % 2 == 0) ? 0.5 : 1.0;
    const PhaseState st = random_char_state(rng, 2 + i % 2, kappa);
    const double s = 0.4 * first_collision(st, kappa);
    const PhaseState direct = rescale(closed_form_flow(st, kappa, s));
    const PhaseState flowed =
        closed_form_flow(rescale(st), kappa, lam * lam * s);
    CHECK(state_distance(direct, flowed) <= 1e-9);
  }
  // vanishing tangential frequency branch
  const PhaseState st = make_state(0.2, 1.5, {0.0}, -1.0, 0.8, {0.0});
  const PhaseState direct = rescale(closed_form_flow(st, 1.0, 0.6));
  const PhaseState flowed = closed_form_flow(rescale(st), 1.0, lam * lam * 0.6);
  CHECK(state_distance(direct, flowed) <= 1e-12);
}

TEST_CASE("boundary dwell fraction") {
  const PhaseState st = make_state(0.0, 1.0, {0.0}, -1.0, 0.0, {1.0});

  // full period recovered as the layer covers the whole swing
  CHECK(dwell_fraction(st, 1.0, 1.0 - 1e-8) >= 0.999);

  // normal incidence: fraction = (2/pi) arcsin(sqrt(c)), about (2/pi) sqrt(c)
  for (double c : {1e-2, 1e-3, 1e-4}) {
    const double frac = dwell_fraction(st, 1.0, c);
    CHECK(frac ==
          doctest::Approx(2.0 / kPi * std::asin(std::sqrt(c))).epsilon(1e-9));
    const double ratio = frac / std::sqrt(c);
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 1.5);
  }

  // independent of the tangential frequency scale and of tau
  const double ref = dwell_fraction(st, 1.0, 1e-3);
  for (double xipn : {0.3, kPi, 64.0}) {
    const PhaseState v = make_state(0.0, 1.0, {0.0}, -7.0, 0.0, {xipn});
    CHECK(std::fabs(dwell_fraction(v, 1.0, 1e-3) - ref) <= 1e-9);
  }
  const PhaseState w = make_state(0.0, 1.0, {0.0}, 5.0, 0.0, {1.0});
  CHECK(std::fabs(dwell_fraction(w, 2.0, 1e-3) - ref) <= 1e-9);

  // oblique incidence: level sits at c cos^2(theta0) of the peak
  const PhaseState ob = make_state(0.0, 2.0, {0.0}, -2.0, 1.3, {1.0});
  const double c2 = 1.0 / (1.0 + 1.3 * 1.3);
  CHECK(dwell_fraction(ob, 1.0, 0.01) ==
        doctest::Approx(2.0 / kPi * std::asin(std::sqrt(0.01 * c2)))
            .epsilon(1e-9));

  CHECK_THROWS_AS(dwell_fraction(st, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(dwell_fraction(st, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(dwell_fraction(st, 1.0, -0.5), ValidationError);
  const PhaseState flat = make_state(0.0, 1.0, {0.0}, -1.0, 1.0, {0.0});
  CHECK_THROWS_AS(dwell_fraction(flat, 1.0, 0.01), ValidationError);
}

TEST_CASE("path export tables") {
  const PhaseState st = make_state(0.0, 1.0, {0.25}, -1.0, 0.0, {1.0});
  const RayPath path = reflect_and_continue(trace_ray(st, 1.0), 2);

  std::ostringstream path_csv;
  write_path_csv(path, 11, path_csv);
  std::istringstream in(path_csv.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 12);
  CHECK(lines[0] == "s,t,x_d,xp_0,xi_d");
  double prev_s = -1.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double s = std::stod(lines[i]);
    CHECK(s > prev_s);
    prev_s = s;
    CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 4);
  }

  // byte-identical on re-export
  std::ostringstream again;
  write_path_csv(path, 11, again);
  CHECK(again.str() == path_csv.str());

  std::ostringstream col_csv;
  write_collisions_csv(path, col_csv);
  std::istringstream cin(col_csv.str());
  lines.clear();
  while (std::getline(cin, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "index,s,t,xp_0");
  CHECK(lines[1].rfind("0,", 0) == 0);

  CHECK_THROWS_AS(write_path_csv(path, 1, col_csv), ValidationError);
}
