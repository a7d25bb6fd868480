// Closed-form and numeric bicharacteristic flows for the degenerate
// half-space Hamiltonian kappa * xd * |xi|^2 - tau^2, with boundary-collision
// bookkeeping, cusp continuation, and boundary-dwell measurement.

#include "acwave/rays.hpp"

#include <algorithm>  // upper_bound
#include <cmath>      // atan, tan, cos, sin, sqrt, isfinite
#include <cstdio>     // snprintf
#include <ostream>
#include <string>

#include "acwave/errors.hpp"

namespace acwave::rays {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Smallest admitted adaptive step relative to the integration span.
constexpr double kMinStepFraction = 1e-14;

void require_kappa(double kappa) {
  if (!(std::isfinite(kappa) && kappa > 0.0))
    throw ValidationError("kappa must be a positive finite real");
}

//----------------------------------------------------------------------------
// Closed-form kernel
//----------------------------------------------------------------------------

// Tangential drift integral D(s), with x'(s) = x'0 + 2 kappa xi'0 xd0 D(s):
//   D(s) = s |xi|^2 / (2 |xi'|^2)
//        + sin(2 kappa |xi'| s) / (2 kappa |xi'|) * (|xi'|^2 - xid0^2) / (2 |xi'|^2)
//        + (1 - cos(2 kappa |xi'| s)) / (2 kappa |xi'|) * xid0 / |xi'|
double drift_integral(double s, double kappa, double xipn, double xid0) {
  const double xi2 = xid0 * xid0 + xipn * xipn;
  const double w = 2.0 * kappa * xipn * s;
  const double t1 = s * xi2 / (2.0 * xipn * xipn);
  const double t2 = std::sin(w) / (2.0 * kappa * xipn) *
                    (xipn * xipn - xid0 * xid0) / (2.0 * xipn * xipn);
  const double t3 = (1.0 - std::cos(w)) / (2.0 * kappa * xipn) * xid0 / xipn;
  return t1 + t2 + t3;
}

// Exact flow without segment checks.  Valid for every s on the |xi'| != 0
// branch (xd and x' are globally smooth; xid has tangent poles exactly at
// the boundary collisions), and for kappa*s*xid0 + 1 > 0 on the other.
PhaseState flow_global(const PhaseState& y0, double kappa, double s) {
  if (s == 0.0) return y0;
  PhaseState y = y0;
  y.t = y0.t - 2.0 * s * y0.tau;
  const double xipn = y0.xip_norm();
  if (xipn == 0.0) {
    const double denom = kappa * s * y0.xid + 1.0;
    y.xid = y0.xid / denom;
    y.xd = y0.xd * denom * denom;
    return y;
  }
  const double r = y0.xid / xipn;
  const double phi = std::atan(r) - kappa * xipn * s;
  const double c = std::cos(phi);
  y.xid = xipn * std::tan(phi);
  y.xd = y0.xd * (1.0 + r * r) * c * c;
  const double d = drift_integral(s, kappa, xipn, y0.xid);
  for (std::size_t i = 0; i < y.xp.size(); ++i)
    y.xp[i] = y0.xp[i] + 2.0 * kappa * y0.xip[i] * y0.xd * d;
  return y;
}

// Normal coordinate only (dwell bisections).
double xd_global(const PhaseState& y0, double kappa, double s) {
  const double xipn = y0.xip_norm();
  const double r = y0.xid / xipn;
  const double c = std::cos(std::atan(r) - kappa * xipn * s);
  return y0.xd * (1.0 + r * r) * c * c;
}

// Collision record at parameter s from the s = 0 base state.
Collision collision_at(const PhaseState& y0, double kappa, double s) {
  Collision col;
  col.s = s;
  col.t = y0.t - 2.0 * s * y0.tau;
  col.xp = y0.xp;
  const double xipn = y0.xip_norm();
  const double d = drift_integral(s, kappa, xipn, y0.xid);
  for (std::size_t i = 0; i < col.xp.size(); ++i)
    col.xp[i] += 2.0 * kappa * y0.xip[i] * y0.xd * d;
  return col;
}

}  // namespace

//----------------------------------------------------------------------------
// Phase-space state
//----------------------------------------------------------------------------

double PhaseState::xip_norm() const {
  double ss = 0.0;
  for (double v : xip) ss += v * v;
  return std::sqrt(ss);
}

void PhaseState::validate() const {
  if (xp.size() != xip.size())
    throw ValidationError("tangential tuples xp and xip must have equal length");
  if (!(xd >= 0.0)) throw ValidationError("xd must be >= 0");
  bool finite = std::isfinite(t) && std::isfinite(xd) && std::isfinite(tau) &&
                std::isfinite(xid);
  for (double v : xp) finite = finite && std::isfinite(v);
  for (double v : xip) finite = finite && std::isfinite(v);
  if (!finite) throw ValidationError("phase-space state has non-finite entries");
}

double hamiltonian(const PhaseState& state, double kappa) {
  const double xipn = state.xip_norm();
  return kappa * state.xd * (state.xid * state.xid + xipn * xipn) -
         state.tau * state.tau;
}

bool on_characteristic_set(const PhaseState& state, double kappa, double rtol) {
  const double xipn = state.xip_norm();
  const double scale = kappa * state.xd * (state.xid * state.xid + xipn * xipn) +
                       state.tau * state.tau;
  const double h = hamiltonian(state, kappa);
  return h == 0.0 || std::fabs(h) <= rtol * scale;
}

//----------------------------------------------------------------------------
// Flows
//----------------------------------------------------------------------------

PhaseState closed_form_flow(const PhaseState& state0, double kappa, double s) {
  state0.validate();
  require_kappa(kappa);
  if (!std::isfinite(s)) throw ValidationError("flow parameter must be finite");
  const double xipn = state0.xip_norm();
  if (xipn == 0.0) {
    if (kappa * s * state0.xid + 1.0 <= 0.0)
      throw ValidationError(
          "flow parameter crosses the normal-frequency pole kappa*s*xid + 1 = 0");
  } else {
    const double rate = kappa * xipn;
    const double theta0 = std::atan(state0.xid / xipn);
    if (s > (theta0 + kPi / 2.0) / rate || s < (theta0 - kPi / 2.0) / rate)
      throw ValidationError(
          "flow parameter crosses a boundary collision; extend the path with "
          "reflect_and_continue instead");
  }
  return flow_global(state0, kappa, s);
}

PhaseState numeric_flow(const PhaseState& state0, double kappa, double s,
                        double tol) {
  state0.validate();
  require_kappa(kappa);
  if (!(std::isfinite(tol) && tol > 0.0))
    throw ValidationError("tolerance must be a positive finite real");
  if (!std::isfinite(s)) throw ValidationError("flow parameter must be finite");
  if (s == 0.0) return state0;

  // Pack as y = (t, xd, xp_0.., tau, xid, xip_0..).
  const int m = static_cast<int>(state0.xp.size());
  const int n = 2 * m + 4;
  std::vector<double> y(n);
  y[0] = state0.t;
  y[1] = state0.xd;
  for (int i = 0; i < m; ++i) y[2 + i] = state0.xp[i];
  y[2 + m] = state0.tau;
  y[3 + m] = state0.xid;
  for (int i = 0; i < m; ++i) y[4 + m + i] = state0.xip[i];

  auto rhs = [kappa, m](const std::vector<double>& v, std::vector<double>& f) {
    const double xd = v[1];
    const double xid = v[3 + m];
    double xi2 = xid * xid;
    for (int i = 0; i < m; ++i) xi2 += v[4 + m + i] * v[4 + m + i];
    f[0] = -2.0 * v[2 + m];
    f[1] = 2.0 * kappa * xd * xid;
    for (int i = 0; i < m; ++i) f[2 + i] = 2.0 * kappa * xd * v[4 + m + i];
    f[2 + m] = 0.0;
    f[3 + m] = -kappa * xi2;
    for (int i = 0; i < m; ++i) f[4 + m + i] = 0.0;
  };

  // Dormand-Prince 5(4) embedded pair.
  static const double a21 = 1.0 / 5.0;
  static const double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static const double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static const double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                      a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static const double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                      a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                      a65 = -5103.0 / 18656.0;
  static const double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                      b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                      b6 = 11.0 / 84.0;
  static const double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                      e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                      e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n),
      yn(n);
  double sc = 0.0;
  double h = s / 16.0;
  const double h_floor = kMinStepFraction * (1.0 + std::fabs(s));
  long steps = 0;
  const long step_budget = 5'000'000;

  while (sc != s) {
    if (++steps > step_budget)
      throw NumericalError("adaptive integration exceeded its step budget");
    bool last = false;
    if ((s - sc) / h <= 1.0) {  // clamp final step to land on the endpoint
      h = s - sc;
      last = true;
    } else if (std::fabs(h) < h_floor) {
      throw NumericalError(
          "adaptive step size collapsed (boundary collision inside the span)");
    }

    rhs(y, k1);
    for (int i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
    rhs(yt, k2);
    for (int i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(yt, k3);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(yt, k4);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] +
              h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(yt, k5);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                          a64 * k4[i] + a65 * k5[i]);
    rhs(yt, k6);
    for (int i = 0; i < n; ++i)
      yn[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                          b6 * k6[i]);
    rhs(yn, k7);

    double err2 = 0.0;
    bool finite = true;
    for (int i = 0; i < n; ++i) {
      const double de = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double w = tol + tol * std::max(std::fabs(y[i]), std::fabs(yn[i]));
      err2 += (de / w) * (de / w);
      finite = finite && std::isfinite(yn[i]);
    }
    const double err = std::sqrt(err2 / n);

    if (finite && err <= 1.0) {
      sc = last ? s : sc + h;
      y.swap(yn);
    }
    double fac = finite ? 0.9 * std::pow(std::max(err, 1e-10), -0.2) : 0.2;
    h *= std::min(5.0, std::max(0.2, fac));
  }

  PhaseState out = state0;
  out.t = y[0];
  out.xd = y[1];
  for (int i = 0; i < m; ++i) out.xp[i] = y[2 + i];
  out.tau = y[2 + m];
  out.xid = y[3 + m];
  for (int i = 0; i < m; ++i) out.xip[i] = y[4 + m + i];
  return out;
}

//----------------------------------------------------------------------------
// Collisions and continuation
//----------------------------------------------------------------------------

std::vector<double> collision_parameters(const PhaseState& state0, double kappa,
                                         int k_min, int k_max) {
  state0.validate();
  require_kappa(kappa);
  if (k_min > k_max) throw ValidationError("collision index range is empty");
  const double xipn = state0.xip_norm();
  if (xipn == 0.0)
    throw ValidationError(
        "no periodic boundary collisions on the |xi'| = 0 branch");
  const double rate = kappa * xipn;
  const double theta0 = std::atan(state0.xid / xipn);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k)
    out.push_back((theta0 - (2.0 * k + 1.0) * kPi / 2.0) / rate);
  return out;
}

RayPath trace_ray(const PhaseState& state0, double kappa) {
  state0.validate();
  require_kappa(kappa);
  if (!(state0.xd > 0.0))
    throw ValidationError("ray tracing requires xd > 0");
  const double xipn = state0.xip_norm();
  if (xipn == 0.0)
    throw ValidationError(
        "ray tracing requires |xi'| != 0 (the |xi'| = 0 branch has no "
        "periodic collisions)");
  const double s1 = (std::atan(state0.xid / xipn) + kPi / 2.0) / (kappa * xipn);
  RayPath path;
  path.kappa = kappa;
  path.segments.push_back(RaySegment{0.0, s1, 0.0, state0});
  path.collisions.push_back(collision_at(state0, kappa, s1));
  return path;
}

RayPath reflect_and_continue(const RayPath& path, int through) {
  if (through < 0) throw ValidationError("collision count must be >= 0");
  if (path.segments.empty() || path.collisions.empty())
    throw ValidationError("path has no traced segment to continue");
  const PhaseState& base = path.segments.front().ref_state;  // state at s = 0
  const double xipn = base.xip_norm();
  if (xipn == 0.0)
    throw ValidationError("continuation requires |xi'| != 0");
  const double ds = kPi / (path.kappa * xipn);
  RayPath out = path;
  for (int i = 0; i < through; ++i) {
    const double s_a = out.collisions.back().s;
    const double s_b = s_a + ds;
    const double s_mid = s_a + 0.5 * ds;
    out.segments.push_back(
        RaySegment{s_a, s_b, s_mid, flow_global(base, path.kappa, s_mid)});
    out.collisions.push_back(collision_at(base, path.kappa, s_b));
  }
  return out;
}

PhaseState eval_path(const RayPath& path, double s) {
  if (path.segments.empty())
    throw ValidationError("path has no traced segment");
  if (s < path.segments.front().s_begin || s > path.segments.back().s_end)
    throw ValidationError("flow parameter lies outside the traced range");
  auto it = std::upper_bound(
      path.segments.begin(), path.segments.end(), s,
      [](double v, const RaySegment& seg) { return v < seg.s_begin; });
  if (it != path.segments.begin()) --it;
  return flow_global(it->ref_state, path.kappa, s - it->s_ref);
}

double dwell_fraction(const PhaseState& state0, double kappa, double c) {
  state0.validate();
  require_kappa(kappa);
  if (!(c > 0.0 && c < 1.0))
    throw ValidationError("dwell level c must lie in (0, 1)");
  if (!(state0.xd > 0.0))
    throw ValidationError("dwell measurement requires xd > 0");
  const double xipn = state0.xip_norm();
  if (xipn == 0.0)
    throw ValidationError("dwell measurement requires |xi'| != 0");

  const double rate = kappa * xipn;
  const double ds = kPi / rate;
  const double s_col = (std::atan(state0.xid / xipn) + kPi / 2.0) / rate;
  const double level = c * state0.xd;

  // x_d rises monotonically from 0 at the collision to its peak half a
  // period later and is symmetric about the peak; one bisection on the
  // rising half gives the crossing of the level c * xd0.
  double a = s_col;
  double b = s_col + 0.5 * ds;
  for (int it = 0; it < 200 && (b - a) > 1e-12 * ds; ++it) {
    const double mid = 0.5 * (a + b);
    (xd_global(state0, kappa, mid) < level ? a : b) = mid;
  }
  return 2.0 * (0.5 * (a + b) - s_col) / ds;
}

//----------------------------------------------------------------------------
// Export
//----------------------------------------------------------------------------

namespace {

void append_num(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

}  // namespace

void write_path_csv(const RayPath& path, int n_samples, std::ostream& os) {
  if (path.segments.empty())
    throw ValidationError("path has no traced segment");
  if (n_samples < 2) throw ValidationError("need at least two samples");
  const int m =
      static_cast<int>(path.segments.front().ref_state.xp.size());
  std::string header = "s,t,x_d";
  for (int i = 0; i < m; ++i) header += ",xp_" + std::to_string(i);
  header += ",xi_d";
  os << header << '\n';
  const double s0 = path.segments.front().s_begin;
  const double s1 = path.segments.back().s_end;
  for (int i = 0; i < n_samples; ++i) {
    const double s = s0 + (s1 - s0) * i / (n_samples - 1);
    const PhaseState st = eval_path(path, s);
    std::string line;
    append_num(line, s);
    line += ',';
    append_num(line, st.t);
    line += ',';
    append_num(line, st.xd);
    for (int j = 0; j < m; ++j) {
      line += ',';
      append_num(line, st.xp[j]);
    }
    line += ',';
    append_num(line, st.xid);
    os << line << '\n';
  }
}

void write_collisions_csv(const RayPath& path, std::ostream& os) {
  const int m = path.collisions.empty()
                    ? 0
                    : static_cast<int>(path.collisions.front().xp.size());
  std::string header = "index,s,t";
  for (int i = 0; i < m; ++i) header += ",xp_" + std::to_string(i);
  os << header << '\n';
  for (std::size_t k = 0; k < path.collisions.size(); ++k) {
    const Collision& col = path.collisions[k];
    std::string line = std::to_string(k);
    line += ',';
    append_num(line, col.s);
    line += ',';
    append_num(line, col.t);
    for (int j = 0; j < m; ++j) {
      line += ',';
      append_num(line, col.xp[j]);
    }
    os << line << '\n';
  }
}

}  // namespace acwave::rays
