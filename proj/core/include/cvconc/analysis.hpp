#ifndef CVCONC_ANALYSIS_HPP
#define CVCONC_ANALYSIS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvconc/angles.hpp"
#include "cvconc/kerr.hpp"
#include "cvconc/parallel.hpp"

namespace cvconc {

struct Series {
  std::string name;
  std::vector<double> values;
};

/// Tabulated figures of merit along one parameter axis. Missing values (zero-probability
/// points) are NaN.
struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  std::vector<Series> series;
  /// Set when a threshold sweep stopped early: the first delta_F with an empty region.
  std::optional<double> terminated_at;
  std::vector<std::string> warnings;

  /// Throws std::out_of_range for unknown names.
  const std::vector<double>& column(std::string_view name) const;
};

/// CSV with the axis first, then the named series (all series when `columns` is empty).
std::string sweep_to_csv(const SweepResult& sweep, std::span<const std::string> columns = {});

/// {"axis": ..., "values": [...], "series": {...}, "terminated_at": ..., "warnings": [...]}
/// NaN is written as null.
std::string sweep_to_json(const SweepResult& sweep);

/// Success probability P, output entropy S and teleportation fidelity F of the cavity
/// scheme for `steps` equally spaced phi0 in [lo, hi].
SweepResult sweep_cavity_phi0(double lambda, double phi, double lo, double hi, int steps,
                              const Parallelism& par = {});

struct OptimumReport {
  double phi0_star = 0.0;
  double fidelity_star = 0.0;
  double probability_at_star = 0.0;
  int evaluations = 0;
};

struct GoldenSectionResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Maximizes a unimodal f on [lo, hi] until the bracket is narrower than tol.
GoldenSectionResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                            double hi, double tol);

/// Phase phi0 maximizing the cavity channel's teleportation fidelity: a scan over
/// (-pi, pi] with the given spacing, then golden-section refinement of the best bracket.
OptimumReport optimize_phi0(double lambda, double phi, double scan_spacing = kPi / 200.0,
                            double tolerance = 1e-6);

/// P_omega, <F> and the averaged teleportation fidelity for ascending thresholds. An empty
/// region truncates the sweep and sets terminated_at.
SweepResult sweep_kerr_threshold(const KerrParams& params, const GridSpec& grid,
                                 std::span<const double> delta_f_values,
                                 const Parallelism& par = {});

/// Same, reusing a scan taken with ScanFields::kWithTeleport.
SweepResult sweep_kerr_threshold(const GridScan& scan, double baseline,
                                 std::span<const double> delta_f_values);

}  // namespace cvconc

#endif  // CVCONC_ANALYSIS_HPP
