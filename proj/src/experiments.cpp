#include "acwave/experiments.hpp"

#include "acwave/errors.hpp"
#include "acwave/spectral.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace acwave::experiments {

namespace {

using synthesis::Field;
using synthesis::TangentialGrid;
using synthesis::Window;
using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-12;  // slack for the exact triple relations

// 1/x with the mixed-norm convention 1/inf = 0.
double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

void check_exponent(double value, const char* name) {
  if (std::isnan(value) || (!std::isinf(value) && value < 2.0))
    throw ValidationError(std::string("triple: exponent ") + name +
                          " must be >= 2 or infinity");
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

// Field of zeros sharing a field's grids (no harmonic bank).
Field zero_like(const Field& base) {
  Field zero;
  zero.grid = base.grid;
  zero.normal_grid = base.normal_grid;
  zero.values.assign(base.values.size(), cplx{0.0, 0.0});
  zero.tangential_spectrum.assign(base.values.size(), cplx{0.0, 0.0});
  return zero;
}

// Wrap real pointwise samples (slice-major) into a field holding just what
// the norm evaluators read. The spectrum is left empty on purpose: a ladder
// keeps O(time_samples) slices alive at the top scales, and the spectrum
// would double the footprint without entering any norm.
Field wrap_real_samples(const Field& base, const std::vector<double>& samples) {
  Field f;
  f.grid = base.grid;
  f.normal_grid = base.normal_grid;
  f.values.reserve(samples.size());
  for (double v : samples) f.values.emplace_back(v, 0.0);
  return f;
}

// Strip an evolved slice to its physical samples before storing it.
Field lean_slice(Field&& f) {
  f.tangential_spectrum.clear();
  f.tangential_spectrum.shrink_to_fit();
  f.harmonics.clear();
  f.harmonics.shrink_to_fit();
  return std::move(f);
}

// Reduced analogue of the canonical packet grid: shrink the box until the
// annulus |xi'| ~ 2^{2j} fits inside the Nyquist ball of n_points samples.
TangentialGrid annulus_grid(int j, int d, const Window& window, int n_points) {
  const double scale = std::exp2(2 * j);
  const double need =
      1.15 * (1.0 + window.epsilon) * scale / (n_points / 2);
  const double spacing = std::exp2(std::ceil(std::log2(need)));
  TangentialGrid grid;
  grid.d = d;
  grid.box_length = 2.0 * kPi / spacing;
  grid.points_per_dim = n_points;
  grid.validate();
  return grid;
}

double checked_log2(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw NumericalError(std::string("ladder: measured ") + what +
                         " is not a positive finite number");
  return std::log2(v);
}

nlohmann::json exponent_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json fit_json(const ScalingFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"std_error", fit.std_error},
          {"predicted_slope", fit.predicted_slope},
          {"tolerance", fit.tolerance},
          {"pass", fit.pass}};
}

void csv_row(std::ostringstream& os, int j, const char* name, double value) {
  os << j << ',' << name << ',' << std::setprecision(17) << value << ','
     << std::log2(value) << '\n';
}

int parse_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != text.size())
    throw ValidationError("config: value of '" + key +
                          "' is not an integer: " + text);
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "infinity") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != text.size())
    throw ValidationError("config: value of '" + key +
                          "' is not a number: " + text);
  return v;
}

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// triples and predictions
// ---------------------------------------------------------------------------

void TripleSpec::validate() const {
  check_exponent(q, "q");
  check_exponent(r, "r");
  if (!std::isfinite(gamma))
    throw ValidationError("triple: gamma must be finite");
  if (d < 2) throw ValidationError("triple: dimension d must be >= 2");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ValidationError("triple: kappa must be positive and finite");
}

TripleSpec TripleSpec::wave_triple(int d, double kappa, double q, double r) {
  TripleSpec spec;
  spec.q = q;
  spec.r = r;
  spec.kind = TripleKind::wave;
  spec.d = d;
  spec.kappa = kappa;
  spec.gamma = d / 2.0 - inv(q) - d / 2.0 * inv(r);
  spec.validate();
  return spec;
}

TripleSpec TripleSpec::euler_triple(int d, double kappa, double q, double r) {
  TripleSpec spec;
  spec.q = q;
  spec.r = r;
  spec.kind = TripleKind::euler;
  spec.d = d;
  spec.kappa = kappa;
  spec.gamma =
      inv(q) / 2.0 + d * inv(r) - d / 2.0 - 1.0 / (2.0 * kappa) + 1.0;
  spec.validate();
  return spec;
}

AdmissibilityReport check_admissible(const TripleSpec& spec) {
  spec.validate();
  AdmissibilityReport report;

  const double lhs = inv(spec.q) + (spec.d - 1) / 2.0 * inv(spec.r);
  const double rhs = (spec.d - 1) / 4.0;
  report.wave_admissible = lhs <= rhs + kRelTol;
  report.sharp = std::abs(lhs - rhs) <= kRelTol;

  report.gamma_wave = spec.d / 2.0 - inv(spec.q) - spec.d / 2.0 * inv(spec.r);
  report.gamma_euler = inv(spec.q) / 2.0 + spec.d * inv(spec.r) -
                       spec.d / 2.0 - 1.0 / (2.0 * spec.kappa) + 1.0;
  const double required = spec.kind == TripleKind::wave ? report.gamma_wave
                                                        : report.gamma_euler;
  report.triple_consistent = std::abs(spec.gamma - required) <= kRelTol;
  report.admissible = report.wave_admissible && report.triple_consistent;

  std::ostringstream os;
  os << "1/q + (d-1)/(2r) = " << num(lhs) << " vs (d-1)/4 = " << num(rhs)
     << ": " << (report.wave_admissible ? "wave-admissible" : "NOT wave-admissible")
     << (report.sharp ? " (sharp)" : "") << '\n';
  os << (spec.kind == TripleKind::wave ? "wave" : "euler")
     << "-relation gamma: required " << num(required) << ", given "
     << num(spec.gamma) << ": "
     << (report.triple_consistent ? "consistent" : "INCONSISTENT") << '\n';
  os << "solved gammas: wave " << num(report.gamma_wave) << ", euler "
     << num(report.gamma_euler);
  report.diagnostics = os.str();
  return report;
}

ExponentPrediction predicted_exponents(const TripleSpec& spec, double s) {
  spec.validate();
  if (!std::isfinite(s))
    throw ValidationError("prediction: regularity parameter s must be finite");

  ExponentPrediction p;
  p.data_norm_slope = 0.0;
  p.surrogate_slope = 2.0 * s;
  p.two_k0 = spec.d + 1.0 + 1.0 / spec.kappa;
  const double iq = inv(spec.q);
  if (spec.kind == TripleKind::wave) {
    const double base = iq + spec.gamma + 1.0 / (2.0 * spec.kappa);
    p.solution_slope = 2.0 * (base - 1.0);
    p.second_derivative_slope = p.solution_slope + 4.0;
    p.alpha_sup = base + 1.0 - s;
    p.alpha_sup_statement = p.alpha_sup;
    p.statement_proof_discrepancy = false;
  } else {
    const double base = iq / 2.0 - spec.gamma;
    p.solution_slope = 2.0 * base;
    p.second_derivative_slope = p.solution_slope + 4.0;
    p.alpha_sup = base + 2.0 - s;        // derivation route
    p.alpha_sup_statement = base - s;    // statement route, 2 lower
    p.statement_proof_discrepancy = true;
  }
  return p;
}

// ---------------------------------------------------------------------------
// packet ladder
// ---------------------------------------------------------------------------

LadderReport run_ladder(const TripleSpec& spec, int j_min, int j_max, double s,
                        double tolerance, int time_samples,
                        double window_epsilon, double s_max,
                        int lattice_points) {
  spec.validate();
  if (j_min < 0 || j_max < j_min)
    throw ValidationError("ladder: need 0 <= j_min <= j_max");
  if (j_max - j_min < 1)
    throw ValidationError("ladder: need at least two rungs to fit a slope");
  if (!(tolerance > 0.0))
    throw ValidationError("ladder: fit tolerance must be positive");
  if (time_samples != 0 && time_samples < 4)
    throw ValidationError("ladder: time_samples must be 0 (default) or >= 4");
  if (!(s_max > 1.0))
    throw ValidationError("ladder: normal truncation s_max must exceed 1");
  if (lattice_points != 0 && lattice_points < 64)
    throw ValidationError(
        "ladder: lattice_points must be 0 (canonical) or >= 64");
  if (spec.d == 3 && (lattice_points == 0 || lattice_points > 128))
    throw ValidationError(
        "ladder: d = 3 needs a reduced lattice, lattice_points in [64, 128] "
        "(memory budget)");

  const int n_t = time_samples > 0 ? time_samples : 8;
  Window window{window_epsilon};
  window.validate();

  LadderReport report;
  report.spec = spec;
  report.s = s;
  report.admissibility = check_admissible(spec);
  report.prediction = predicted_exponents(spec, s);
  const double alpha = report.prediction.alpha_sup / 2.0;

  measure::NormRequest solution_req{spec.q, spec.r, 0.0, 1.0, n_t};
  // The packet carrier makes |psi^j(t)| t-independent, so 4 samples already
  // integrate the Hessian's (constant) inner norm exactly.
  measure::NormRequest hessian_req{spec.q, spec.r, 0.0, 1.0, 4};

  std::vector<double> js, sol_log, hess_log, data_log, div_log;
  for (int j = j_min; j <= j_max; ++j) {
    synthesis::PacketSpec packet;
    packet.j = j;
    packet.d = spec.d;
    packet.kappa = spec.kappa;
    packet.window = window;
    packet.s_max = s_max;
    const TangentialGrid grid =
        lattice_points > 0 ? annulus_grid(j, spec.d, window, lattice_points)
                           : synthesis::packet_grid(j, spec.d, window);
    const std::vector<double> xg =
        synthesis::packet_normal_grid(j, spec.d, s_max);

    LadderPoint point;
    point.j = j;
    Field psi0;
    {
      // The velocity component is only needed for the data norm; release it
      // before the time sweep (a top-scale field is tens of megabytes).
      auto [position, velocity] =
          synthesis::packet_initial_data(packet, grid, xg);
      psi0 = std::move(position);
      point.data_h = measure::h_norm(
          velocity, measure::gradient_magnitude(psi0), spec.kappa);
    }
    point.surrogate = measure::h2s_surrogate(point.data_h, j, s);

    std::vector<Field> slices, hessians;
    slices.reserve(n_t);
    hessians.reserve(hessian_req.time_samples);
    for (int k = 0; k < n_t; ++k) {
      const double t = static_cast<double>(k) / (n_t - 1);
      Field evolved = dynamics::halfwave_evolve(psi0, t);
      const int stride = (n_t - 1) / (hessian_req.time_samples - 1);
      if (k % std::max(stride, 1) == 0 &&
          static_cast<int>(hessians.size()) < hessian_req.time_samples)
        hessians.push_back(
            wrap_real_samples(evolved, synthesis::hessian_magnitude(evolved)));
      slices.push_back(lean_slice(std::move(evolved)));
    }
    while (static_cast<int>(hessians.size()) < hessian_req.time_samples)
      hessians.push_back(hessians.back());
    point.solution_norm = measure::mixed_norm(slices, solution_req).value;
    point.hessian_norm = measure::mixed_norm(hessians, hessian_req).value;

    point.ratio = std::exp2(-2.0 * j * alpha) * point.hessian_norm /
                  point.surrogate;

    js.push_back(j);
    sol_log.push_back(checked_log2(point.solution_norm, "solution norm"));
    hess_log.push_back(checked_log2(point.hessian_norm, "Hessian norm"));
    data_log.push_back(checked_log2(point.data_h, "data norm"));
    div_log.push_back(hess_log.back() -
                      checked_log2(point.surrogate, "surrogate"));
    report.points.push_back(point);
  }

  const auto& p = report.prediction;
  report.solution_fit = fit_log2(js, sol_log, p.solution_slope, tolerance);
  report.hessian_fit =
      fit_log2(js, hess_log, p.second_derivative_slope, tolerance);
  report.data_fit =
      fit_log2(js, data_log, p.data_norm_slope, std::min(tolerance, 0.05));
  report.divergence_fit = fit_log2(js, div_log, 2.0 * p.alpha_sup, tolerance);

  report.ratio_monotone = true;
  const LadderPoint* prev = nullptr;
  for (const auto& point : report.points) {
    if (point.j < 4) continue;
    if (prev && !(point.ratio > prev->ratio)) report.ratio_monotone = false;
    prev = &point;
  }
  return report;
}

// ---------------------------------------------------------------------------
// gallery ladder
// ---------------------------------------------------------------------------

GalleryLadderReport gallery_strichartz_ladder(int mode_n, double kappa, int d,
                                              double q, double r, int j_min,
                                              int j_max, double tolerance,
                                              int time_samples,
                                              int lattice_points,
                                              double window_epsilon) {
  if (mode_n < 0 || mode_n > 8)
    throw ValidationError("gallery ladder: mode index n must be in [0, 8]");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ValidationError("gallery ladder: kappa must be positive and finite");
  if (d != 2 && d != 3)
    throw ValidationError("gallery ladder: dimension d must be 2 or 3");
  check_exponent(q, "q");
  check_exponent(r, "r");
  if (j_min < 0 || j_max < j_min)
    throw ValidationError("gallery ladder: need 0 <= j_min <= j_max");
  if (!(tolerance > 0.0))
    throw ValidationError("gallery ladder: fit tolerance must be positive");
  if (lattice_points < 64)
    throw ValidationError("gallery ladder: lattice_points must be >= 64");
  if (d == 3 && lattice_points > 128)
    throw ValidationError(
        "gallery ladder: d = 3 needs lattice_points <= 128 (cost budget)");
  if (time_samples != 0 && (time_samples < 4 || time_samples > 128))
    throw ValidationError(
        "gallery ladder: time_samples must be 0 (default) or in [4, 128]");
  // The estimate holds on the sharp line 1/q = ((d-1)/2)(1/2 - 1/r).
  if (std::abs(inv(q) - (d - 1) / 2.0 * (0.5 - inv(r))) > 1e-9)
    throw ValidationError(
        "gallery ladder: (q, r) must satisfy 1/q = ((d-1)/2)(1/2 - 1/r)");

  Window window{window_epsilon};
  window.validate();

  GalleryLadderReport report;
  report.mode_n = mode_n;
  report.kappa = kappa;
  report.d = d;
  report.q = q;
  report.r = r;
  report.exponent =
      (3.0 * d + 1.0) / 4.0 * (0.5 - inv(r)) + 1.0 / (2.0 * kappa) - 1.0;

  spectral::ModeSpec mode = spectral::ModeSpec::quantized(kappa, mode_n);

  std::vector<double> js, ratio_log;
  for (int j = j_min; j <= j_max; ++j) {
    const double scale = std::exp2(2 * j);
    const TangentialGrid grid = annulus_grid(j, d, window, lattice_points);

    const long m = grid.lattice_size();
    const double box_factor =
        d == 2 ? grid.box_length : grid.box_length * grid.box_length;
    Field carrier;
    carrier.grid = grid;
    carrier.normal_grid = {0.0};
    carrier.tangential_spectrum.assign(m, cplx{0.0, 0.0});
    for (long f = 0; f < m; ++f) {
      const double w = window.value(grid.freq_norm(f) / scale);
      if (w > 0.0) carrier.tangential_spectrum[f] = cplx{w * box_factor, 0.0};
    }
    carrier.values.assign(m, cplx{0.0, 0.0});
    synthesis::values_from_spectrum(carrier);

    std::vector<double> xg = synthesis::graded_grid(1e-4, 0.05, 25.0);
    for (double& x : xg) x /= scale;
    Field u0 = synthesis::synth_gallery_mode(carrier.values, mode, grid, xg);

    GalleryPoint point;
    point.j = j;
    point.data_h =
        measure::h_norm(zero_like(u0), measure::gradient_magnitude(u0), kappa);

    // Default sampling tracks the carrier period (~2 pi / (sqrt(mu) 2^j)):
    // 8 * 2^j keeps ~29 points per oscillation, capped by the memory budget
    // at 64 (still >= 14 per period through j = 4).
    measure::NormRequest req{q, r, 0.0, 1.0,
                             time_samples > 0 ? time_samples
                                              : std::min(8 << j, 64)};
    std::vector<Field> snaps;
    snaps.reserve(req.time_samples);
    for (int k = 0; k < req.time_samples; ++k) {
      const double t = req.t0 + (req.t1 - req.t0) * k / (req.time_samples - 1.0);
      snaps.push_back(
          lean_slice(dynamics::halfwave_evolve(u0, t, /*cosine_data=*/true)));
    }
    point.mixed_norm = measure::mixed_norm(snaps, req).value;
    point.ratio = point.mixed_norm /
                  (std::pow(scale, report.exponent) * point.data_h);

    js.push_back(j);
    ratio_log.push_back(checked_log2(point.mixed_norm, "mixed norm") -
                        checked_log2(point.data_h, "data norm"));
    report.points.push_back(point);
  }

  if (report.points.size() >= 2)
    report.fit =
        fit_log2(js, ratio_log, 2.0 * report.exponent, tolerance);
  double lo = kInf, hi = 0.0;
  for (const auto& point : report.points) {
    lo = std::min(lo, point.ratio);
    hi = std::max(hi, point.ratio);
  }
  report.ratio_spread = hi / lo;
  report.bounded = std::isfinite(report.ratio_spread) && report.ratio_spread <= 3.0;
  return report;
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (kind != "wave" && kind != "euler" && kind != "gallery")
    throw ValidationError("config: kind must be wave, euler, or gallery");
  if (d != 2 && d != 3)
    throw ValidationError("config: dimension d must be 2 or 3");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ValidationError("config: kappa must be positive and finite");
  check_exponent(q, "q");
  check_exponent(r, "r");
  if (!std::isfinite(s)) throw ValidationError("config: s must be finite");
  if (j_min < 0 || j_max < j_min)
    throw ValidationError("config: need 0 <= j_min <= j_max");
  if (!(epsilon > 0.0) || !(epsilon < 0.5))
    throw ValidationError("config: epsilon must lie in (0, 1/2)");
  if (!(s_max > 1.0))
    throw ValidationError("config: s_max must exceed 1");
  if (lattice_points != 0 && lattice_points < 64)
    throw ValidationError("config: lattice_points must be 0 (default) or >= 64");
  if (mode_n < 0 || mode_n > 8)
    throw ValidationError("config: mode_n must be in [0, 8]");
  if (time_samples != 0 && time_samples < 4)
    throw ValidationError("config: time_samples must be 0 (default) or >= 4");
  if (!(tolerance > 0.0))
    throw ValidationError("config: tolerance must be positive");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: line " + std::to_string(line_no) +
                            " is not of the form key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError("config: line " + std::to_string(line_no) +
                            " has an empty key or value");

    if (key == "kind") config.kind = value;
    else if (key == "d") config.d = parse_int(key, value);
    else if (key == "kappa") config.kappa = parse_real(key, value);
    else if (key == "q") config.q = parse_real(key, value);
    else if (key == "r") config.r = parse_real(key, value);
    else if (key == "s") config.s = parse_real(key, value);
    else if (key == "j_min") config.j_min = parse_int(key, value);
    else if (key == "j_max") config.j_max = parse_int(key, value);
    else if (key == "epsilon") config.epsilon = parse_real(key, value);
    else if (key == "s_max") config.s_max = parse_real(key, value);
    else if (key == "lattice_points")
      config.lattice_points = parse_int(key, value);
    else if (key == "mode_n") config.mode_n = parse_int(key, value);
    else if (key == "time_samples")
      config.time_samples = parse_int(key, value);
    else if (key == "tolerance") config.tolerance = parse_real(key, value);
    else
      throw ValidationError("config: unknown key '" + key + "'");
  }
  config.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  return parse_config(in);
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

std::string verdict_json(const LadderReport& report) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["experiment"] = "packet_ladder";
  doc["triple"] = {
      {"kind", report.spec.kind == TripleKind::wave ? "wave" : "euler"},
      {"q", exponent_json(report.spec.q)},
      {"r", exponent_json(report.spec.r)},
      {"gamma", report.spec.gamma},
      {"d", report.spec.d},
      {"kappa", report.spec.kappa}};
  doc["s"] = report.s;
  doc["admissibility"] = {
      {"wave_admissible", report.admissibility.wave_admissible},
      {"sharp", report.admissibility.sharp},
      {"triple_consistent", report.admissibility.triple_consistent},
      {"admissible", report.admissibility.admissible},
      {"gamma_wave", report.admissibility.gamma_wave},
      {"gamma_euler", report.admissibility.gamma_euler},
      {"diagnostics", report.admissibility.diagnostics}};
  const auto& p = report.prediction;
  doc["prediction"] = {
      {"data_norm_slope", p.data_norm_slope},
      {"surrogate_slope", p.surrogate_slope},
      {"solution_slope", p.solution_slope},
      {"second_derivative_slope", p.second_derivative_slope},
      {"alpha_sup", p.alpha_sup},
      {"alpha_sup_statement", p.alpha_sup_statement},
      {"two_k0", p.two_k0},
      {"statement_proof_discrepancy", p.statement_proof_discrepancy}};
  doc["points"] = nlohmann::json::array();
  for (const auto& point : report.points)
    doc["points"].push_back({{"j", point.j},
                             {"solution_norm", point.solution_norm},
                             {"hessian_norm", point.hessian_norm},
                             {"data_h", point.data_h},
                             {"surrogate", point.surrogate},
                             {"ratio", point.ratio}});
  doc["fits"] = {{"solution", fit_json(report.solution_fit)},
                 {"hessian", fit_json(report.hessian_fit)},
                 {"data", fit_json(report.data_fit)},
                 {"divergence", fit_json(report.divergence_fit)}};
  doc["divergence_statement_predicted_slope"] = 2.0 * p.alpha_sup_statement;
  doc["ratio_monotone"] = report.ratio_monotone;
  doc["pass"] = report.solution_fit.pass && report.hessian_fit.pass &&
                report.data_fit.pass && report.divergence_fit.pass &&
                report.ratio_monotone;
  return doc.dump(2) + "\n";
}

std::string verdict_json(const GalleryLadderReport& report) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["experiment"] = "gallery_strichartz_ladder";
  doc["mode_n"] = report.mode_n;
  doc["kappa"] = report.kappa;
  doc["d"] = report.d;
  doc["q"] = exponent_json(report.q);
  doc["r"] = exponent_json(report.r);
  doc["exponent"] = report.exponent;
  doc["points"] = nlohmann::json::array();
  for (const auto& point : report.points)
    doc["points"].push_back({{"j", point.j},
                             {"mixed_norm", point.mixed_norm},
                             {"data_h", point.data_h},
                             {"ratio", point.ratio}});
  doc["fit"] = fit_json(report.fit);
  doc["ratio_spread"] = report.ratio_spread;
  doc["pass"] = report.bounded;
  return doc.dump(2) + "\n";
}

std::string ladder_csv(const LadderReport& report) {
  std::ostringstream os;
  os << "j,norm_name,value,log2_value\n";
  for (const auto& point : report.points) {
    csv_row(os, point.j, "solution", point.solution_norm);
    csv_row(os, point.j, "hessian", point.hessian_norm);
    csv_row(os, point.j, "data_h", point.data_h);
    csv_row(os, point.j, "surrogate", point.surrogate);
    csv_row(os, point.j, "ratio", point.ratio);
  }
  return os.str();
}

std::string ladder_csv(const GalleryLadderReport& report) {
  std::ostringstream os;
  os << "j,norm_name,value,log2_value\n";
  for (const auto& point : report.points) {
    csv_row(os, point.j, "mixed", point.mixed_norm);
    csv_row(os, point.j, "data_h", point.data_h);
    csv_row(os, point.j, "ratio", point.ratio);
  }
  return os.str();
}

}  // namespace acwave::experiments
