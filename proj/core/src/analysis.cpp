#include "cvconc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cvconc/cavity.hpp"
#include "cvconc/errors.hpp"
#include "cvconc/fock.hpp"
#include "cvconc/io.hpp"
#include "cvconc/teleport.hpp"
#include "json.hpp"

namespace cvconc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double cavity_objective(double lambda, double phi, double phi0) {
  try {
    return cavity_teleport_fidelity_analytic(lambda, phi, phi0);
  } catch (const ZeroProbabilityError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

const std::vector<double>& SweepResult::column(std::string_view name) const {
  for (const auto& s : series) {
    if (s.name == name) return s.values;
  }
  throw std::out_of_range("no series named " + std::string(name));
}

std::string sweep_to_csv(const SweepResult& sweep, std::span<const std::string> columns) {
  std::vector<const Series*> picked;
  if (columns.empty()) {
    for (const auto& s : sweep.series) picked.push_back(&s);
  } else {
    for (const auto& name : columns) {
      auto it = std::find_if(sweep.series.begin(), sweep.series.end(),
                             [&](const Series& s) { return s.name == name; });
      if (it == sweep.series.end()) throw std::out_of_range("no series named " + name);
      picked.push_back(&*it);
    }
  }
  std::ostringstream out;
  out << sweep.axis_name;
  for (const auto* s : picked) out << ',' << s->name;
  out << '\n';
  for (std::size_t i = 0; i < sweep.axis_values.size(); ++i) {
    out << format_double(sweep.axis_values[i]);
    for (const auto* s : picked) out << ',' << format_double(s->values[i]);
    out << '\n';
  }
  return out.str();
}

std::string sweep_to_json(const SweepResult& sweep) {
  using ordered_json = nlohmann::ordered_json;
  auto number_or_null = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); };
  ordered_json j;
  j["axis"] = sweep.axis_name;
  j["values"] = ordered_json::array();
  for (double v : sweep.axis_values) j["values"].push_back(number_or_null(v));
  j["series"] = ordered_json::object();
  for (const auto& s : sweep.series) {
    auto& arr = j["series"][s.name] = ordered_json::array();
    for (double v : s.values) arr.push_back(number_or_null(v));
  }
  j["terminated_at"] = sweep.terminated_at ? ordered_json(*sweep.terminated_at) : ordered_json();
  j["warnings"] = sweep.warnings;
  return j.dump(2);
}

SweepResult sweep_cavity_phi0(double lambda, double phi, double lo, double hi, int steps,
                              const Parallelism& par) {
  if (steps < 2) throw DomainError("a sweep needs at least 2 steps");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("sweep range must be finite");
  CavityParams(lambda, phi, lo);  // validates lambda and phi up front

  SweepResult sweep;
  sweep.axis_name = "phi0";
  sweep.axis_values.resize(steps);
  std::vector<double> prob(steps), entropy(steps), fidelity(steps);
  const double h = (hi - lo) / (steps - 1);
  for (int i = 0; i < steps; ++i) sweep.axis_values[i] = lo + i * h;

  parallel_for(static_cast<std::size_t>(steps), par, [&](std::size_t i) {
    const CavityParams params(lambda, phi, sweep.axis_values[i]);
    prob[i] = cavity_success_prob_analytic(params);
    try {
      entropy[i] = von_neumann_entropy(cavity_schmidt(params).state);
      fidelity[i] = cavity_teleport_fidelity_analytic(lambda, phi, sweep.axis_values[i]);
    } catch (const ZeroProbabilityError&) {
      entropy[i] = kNaN;
      fidelity[i] = kNaN;
    }
  });

  const auto gaps = std::count_if(entropy.begin(), entropy.end(), [](double v) { return std::isnan(v); });
  if (gaps > 0) {
    sweep.warnings.push_back(std::to_string(gaps) + " zero-probability phi0 point(s) recorded as gaps");
  }
  sweep.series = {{"P", std::move(prob)}, {"S", std::move(entropy)}, {"F", std::move(fidelity)}};
  return sweep;
}

GoldenSectionResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                            double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int evaluations = 2;
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evaluations;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), evaluations + 1};
}

OptimumReport optimize_phi0(double lambda, double phi, double scan_spacing, double tolerance) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("phi0 optimization needs 0 < lambda < 1");
  }
  if (!(scan_spacing > 0.0) || !(tolerance > 0.0)) {
    throw DomainError("scan spacing and tolerance must be positive");
  }
  const int count = static_cast<int>(std::ceil(2.0 * kPi / scan_spacing));
  OptimumReport report;
  double best_x = kPi, best_f = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= count; ++k) {
    const double x = -kPi + k * (2.0 * kPi / count);
    const double fx = cavity_objective(lambda, phi, x);
    ++report.evaluations;
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  if (!std::isfinite(best_f)) throw ZeroProbabilityError("cavity scheme never succeeds");

  const double h = 2.0 * kPi / count;
  const auto refined = golden_section_maximize(
      [&](double x) { return cavity_objective(lambda, phi, x); }, best_x - h, best_x + h,
      tolerance);
  report.evaluations += refined.evaluations;

  const double star = refined.value >= best_f ? refined.x : best_x;
  report.phi0_star = reduce_angle(star);
  report.fidelity_star = cavity_teleport_fidelity_analytic(lambda, phi, report.phi0_star);
  report.probability_at_star =
      cavity_success_prob_analytic(CavityParams(lambda, phi, report.phi0_star));
  return report;
}

SweepResult sweep_kerr_threshold(const GridScan& scan, double baseline,
                                 std::span<const double> delta_f_values) {
  if (delta_f_values.empty()) throw DomainError("delta_F list is empty");
  if (!std::is_sorted(delta_f_values.begin(), delta_f_values.end())) {
    throw DomainError("delta_F values must be sorted ascending");
  }
  SweepResult sweep;
  sweep.axis_name = "delta_F";
  std::vector<double> p_omega, avg_f, avg_tele, n_points;
  const double w = scan.grid.weight();
  for (double delta_f : delta_f_values) {
    if (!(delta_f >= 0.0)) throw DomainError("delta_F must be non-negative");
    const double threshold = baseline + delta_f;
    double mass = 0.0, merit = 0.0, tele = 0.0;
    std::size_t count = 0;
    for (const auto& pt : scan.points) {
      if (!meets_threshold(pt.merit, threshold)) continue;
      const double qw = pt.q * w;
      mass += qw;
      merit += qw * pt.merit;
      tele += qw * pt.teleport;
      ++count;
    }
    if (count == 0) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& pt : scan.points) {
        if (!std::isnan(pt.merit)) best = std::max(best, pt.merit);
      }
      sweep.terminated_at = delta_f;
      sweep.warnings.push_back("empty acceptance region at delta_F = " + format_double(delta_f) +
                               " (max F = " + format_double(best) + "); sweep truncated");
      break;
    }
    sweep.axis_values.push_back(delta_f);
    p_omega.push_back(mass);
    avg_f.push_back(merit / mass);
    avg_tele.push_back(tele / mass);
    n_points.push_back(static_cast<double>(count));
  }
  sweep.series = {{"P_omega", std::move(p_omega)},
                  {"avg_F", std::move(avg_f)},
                  {"avg_F_teleport", std::move(avg_tele)},
                  {"n_points", std::move(n_points)}};
  return sweep;
}

SweepResult sweep_kerr_threshold(const KerrParams& params, const GridSpec& grid,
                                 std::span<const double> delta_f_values, const Parallelism& par) {
  const auto scan = scan_grid(params, grid, ScanFields::kWithTeleport, par);
  return sweep_kerr_threshold(scan, baseline_merit(params), delta_f_values);
}

}  // namespace cvconc
