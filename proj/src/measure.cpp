#include "acwave/measure.hpp"

#include "acwave/errors.hpp"
#include "acwave/quadrature.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acwave::measure {

namespace {

double box_pow(double base, int p) {
  double v = 1.0;
  for (int i = 0; i < p; ++i) v *= base;
  return v;
}

void check_assembled(const synthesis::Field& field) {
  field.grid.validate();
  if (field.normal_grid.empty())
    throw ValidationError("measure: field has an empty normal grid");
  const long total = field.grid.lattice_size() * field.slice_count();
  if (static_cast<long>(field.values.size()) != total)
    throw ValidationError("measure: field values not assembled");
}

void check_same_layout(const synthesis::Field& a, const synthesis::Field& b) {
  if (a.grid.d != b.grid.d || a.grid.points_per_dim != b.grid.points_per_dim ||
      a.grid.box_length != b.grid.box_length ||
      a.normal_grid != b.normal_grid)
    throw ValidationError("measure: fields must share grids");
}

// Exact tangential lattice integral of |u|^2 on one slice: cell * sum.
double slice_l2sq(const synthesis::Field& f, long slice) {
  const long ls = f.grid.lattice_size();
  const double cell =
      box_pow(f.grid.box_length / f.grid.points_per_dim, f.grid.d - 1);
  double sum = 0.0;
  for (long n = 0; n < ls; ++n) sum += std::norm(f.values[slice * ls + n]);
  return cell * sum;
}

// int_0^{x1} x^p (f0 + (f1 - f0) x / x1) dx, requires p > -1.
double power_head(double p, double x1, double f0, double f1) {
  double xp = std::pow(x1, p + 1.0);
  return f0 * xp / (p + 1.0) + (f1 - f0) * xp / (p + 2.0);
}

}  // namespace

void NormRequest::validate() const {
  auto ok_exponent = [](double e) {
    return e >= 2.0 && (std::isinf(e) || std::isfinite(e));
  };
  if (!ok_exponent(q) || !ok_exponent(r))
    throw ValidationError("norm request: q and r must be >= 2 (or infinite)");
  if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1))
    throw ValidationError("norm request: need a finite interval with t1 > t0");
  if (time_samples < 4)
    throw ValidationError("norm request: at least 4 time samples required");
}

double h_norm(const synthesis::Field& s_field, const synthesis::Field& w_field,
              double kappa) {
  check_assembled(s_field);
  check_assembled(w_field);
  check_same_layout(s_field, w_field);
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ValidationError("h_norm: kappa must be positive");
  const double a = 1.0 / kappa;
  const std::vector<double>& x = s_field.normal_grid;
  const long ns = s_field.slice_count();
  std::vector<double> ssq(ns), wsq(ns);
  for (long i = 0; i < ns; ++i) {
    ssq[i] = slice_l2sq(s_field, i);
    wsq[i] = slice_l2sq(w_field, i);
  }
  double total = 0.0;
  std::size_t lo = 0;
  if (x.front() == 0.0 && x.size() > 1) {
    lo = 1;
    total += power_head(a - 1.0, x[1], ssq[0], ssq[1]) +
             kappa * power_head(a, x[1], wsq[0], wsq[1]);
  }
  std::vector<double> xs(x.begin() + lo, x.end());
  std::vector<double> g(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double xv = xs[i];
    g[i] = std::pow(xv, a - 1.0) * ssq[lo + i] +
           kappa * std::pow(xv, a) * wsq[lo + i];
  }
  total += quadrature::integrate_grid(xs, g);
  return std::sqrt(std::max(total, 0.0));
}

synthesis::Field gradient_magnitude(const synthesis::Field& field) {
  check_assembled(field);
  if (field.harmonics.empty())
    throw ValidationError(
        "gradient magnitude: field carries no profile bank for the normal "
        "derivative");
  synthesis::Field out = field;
  std::vector<double> acc(field.values.size(), 0.0);
  for (int axis = 0; axis < field.grid.d; ++axis) {
    synthesis::Field da = synthesis::derivative_field(field, axis);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(da.values[i]);
  }
  for (std::size_t i = 0; i < acc.size(); ++i)
    out.values[i] = std::sqrt(acc[i]);
  synthesis::spectrum_from_values(out);
  out.harmonics.clear();
  return out;
}

double weighted_l2(const synthesis::Field& field, double alpha) {
  check_assembled(field);
  if (!std::isfinite(alpha))
    throw ValidationError("weighted L2: alpha must be finite");
  const std::vector<double>& x = field.normal_grid;
  const long ns = field.slice_count();
  std::vector<double> fsq(ns);
  double peak = 0.0;
  for (long i = 0; i < ns; ++i) {
    fsq[i] = slice_l2sq(field, i);
    peak = std::max(peak, fsq[i]);
  }
  const double p = 2.0 * alpha;
  double total = 0.0;
  std::size_t lo = 0;
  if (x.front() == 0.0 && x.size() > 1) {
    lo = 1;
    const double floor = 1e-28 * std::max(peak, 1e-300);
    if (p <= -1.0 && fsq[0] > floor)
      throw ValidationError(
          "weighted L2: x_d^{2 alpha} with 2 alpha <= -1 diverges against a "
          "nonvanishing boundary slice");
    if (p <= -2.0 && fsq[1] > floor)
      throw ValidationError(
          "weighted L2: x_d^{2 alpha} with alpha <= -1 is not integrable at "
          "the boundary");
    if (fsq[0] > floor)
      total += power_head(p, x[1], fsq[0], fsq[1]);
    else if (p > -2.0)
      total += fsq[1] * std::pow(x[1], p + 1.0) / (p + 2.0);
  }
  std::vector<double> xs(x.begin() + lo, x.end());
  std::vector<double> g(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    g[i] = std::pow(xs[i], p) * fsq[lo + i];
  total += quadrature::integrate_grid(xs, g);
  return std::sqrt(std::max(total, 0.0));
}

double lr_norm(const synthesis::Field& field, double r) {
  check_assembled(field);
  if (!(r >= 2.0))
    throw ValidationError("spatial norm: r must be >= 2 (or infinite)");
  const long ls = field.grid.lattice_size();
  const long ns = field.slice_count();
  if (std::isinf(r)) {
    double peak = 0.0;
    for (const auto& v : field.values) peak = std::max(peak, std::abs(v));
    return peak;
  }
  const double cell =
      box_pow(field.grid.box_length / field.grid.points_per_dim,
              field.grid.d - 1);
  std::vector<double> g(ns);
  for (long i = 0; i < ns; ++i) {
    double sum = 0.0;
    for (long n = 0; n < ls; ++n)
      sum += std::pow(std::abs(field.values[i * ls + n]), r);
    g[i] = cell * sum;
  }
  double integral = quadrature::trapezoid_grid(field.normal_grid, g);
  return std::pow(std::max(integral, 0.0), 1.0 / r);
}

NormReport mixed_norm(const std::vector<synthesis::Field>& time_slices,
                      const NormRequest& request) {
  request.validate();
  if (static_cast<int>(time_slices.size()) != request.time_samples)
    throw ValidationError(
        "mixed norm: slice count must equal the requested time samples");
  for (const auto& f : time_slices) {
    check_assembled(f);
    check_same_layout(time_slices.front(), f);
  }
  NormReport report;
  report.q = request.q;
  report.r = request.r;
  report.per_time_values.resize(time_slices.size());
  for (std::size_t i = 0; i < time_slices.size(); ++i)
    report.per_time_values[i] = lr_norm(time_slices[i], request.r);

  const int n = request.time_samples;
  if (std::isinf(request.q)) {
    report.value = *std::max_element(report.per_time_values.begin(),
                                     report.per_time_values.end());
    report.error_estimate = 0.0;
    return report;
  }
  const double h = (request.t1 - request.t0) / (n - 1);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = std::pow(report.per_time_values[i], request.q);
  double integral = 0.0;
  for (int i = 0; i + 1 < n; ++i) integral += 0.5 * h * (g[i] + g[i + 1]);
  integral = std::max(integral, 0.0);
  report.value = std::pow(integral, 1.0 / request.q);
  // composite-trapezoid error bound from second differences, pushed through
  // the outer 1/q power
  double d2 = 0.0;
  for (int i = 1; i + 1 < n; ++i)
    d2 += std::abs(g[i + 1] - 2.0 * g[i] + g[i - 1]);
  double ierr = h * d2 / 12.0;
  report.error_estimate =
      integral > 0.0
          ? report.value * (std::pow(1.0 + ierr / integral, 1.0 / request.q) -
                            1.0)
          : 0.0;
  return report;
}

double h2s_surrogate(double h_value, int j, double s) {
  if (j < 0) throw ValidationError("data-norm surrogate: j must be >= 0");
  if (!(h_value >= 0.0) || !std::isfinite(s))
    throw ValidationError("data-norm surrogate: invalid arguments");
  return std::pow(2.0, 2.0 * j * s) * h_value;
}

std::string to_json(const NormReport& report) {
  nlohmann::json out;
  auto exponent = [](double e) -> nlohmann::json {
    if (std::isinf(e)) return "inf";
    return e;
  };
  out["q"] = exponent(report.q);
  out["r"] = exponent(report.r);
  out["value"] = report.value;
  out["per_time_values"] = report.per_time_values;
  out["error_estimate"] = report.error_estimate;
  return out.dump();
}

}  // namespace acwave::measure
