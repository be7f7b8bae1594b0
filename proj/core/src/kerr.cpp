#include "cvconc/kerr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cvconc/angles.hpp"
#include "cvconc/errors.hpp"
#include "cvconc/teleport.hpp"

namespace cvconc {

namespace {

const double kLogTiny = std::log(1e-300);

SchmidtState make_input(double lambda, int n_max) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw DomainError("lambda must lie in [0, 1), got " + std::to_string(lambda));
  }
  return tmsv_state(lambda, n_max < 0 ? default_n_max(lambda) : n_max);
}

void require_region(const PhaseRegion& region) {
  if (region.points.empty()) throw DomainError("acceptance region is empty");
}

// Q-weighted average of value(beta) over the region; the reduction runs in point order.
template <typename Value>
double region_average(const PhaseRegion& region, const KerrParams& params,
                      const Parallelism& par, Value value) {
  require_region(region);
  std::vector<double> q(region.points.size());
  std::vector<double> v(region.points.size());
  parallel_for(region.points.size(), par, [&](std::size_t i) {
    const auto beta = region.points[i].beta;
    q[i] = q_function(beta, params);
    v[i] = value(conditional_state(beta, params));
  });
  double mass = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double w = q[i] * region.points[i].weight;
    mass += w;
    acc += w * v[i];
  }
  return acc / mass;
}

}  // namespace

KerrParams::KerrParams(double lambda, double alpha, double phi, int fock_cut_n, int n_max)
    : lambda_(lambda),
      alpha_(alpha),
      phi_(phi),
      fock_cut_n_(fock_cut_n),
      input_(make_input(lambda, n_max)) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("auxiliary amplitude alpha must be positive and finite");
  }
  if (!std::isfinite(phi)) throw DomainError("Kerr phase phi must be finite");
  if (fock_cut_n < 0 || fock_cut_n > input_.n_max()) {
    throw DomainError("fock_cut_N must lie in [0, n_max = " + std::to_string(input_.n_max()) +
                      "], got " + std::to_string(fock_cut_n));
  }
}

double Outcome::phi0() const {
  const double a = std::arg(beta);
  return a <= -kPi ? kPi : a;
}

void GridSpec::validate() const {
  if (!(half_width >= 4.0) || !std::isfinite(half_width)) {
    throw DomainError("grid half_width must be at least 4");
  }
  if (!(step > 0.0 && step <= 0.2)) throw DomainError("grid step must lie in (0, 0.2]");
}

int GridSpec::points_per_axis() const {
  return static_cast<int>(std::lround(2.0 * half_width / step)) + 1;
}

double GridSpec::coordinate(int i) const { return -half_width + i * step; }

Amplitude LogAmplitude::value() const { return std::polar(std::exp(log_magnitude), phase); }

double LogAmplitude::magnitude() const { return std::exp(log_magnitude); }

LogAmplitude coherent_overlap(Amplitude beta, Amplitude alpha) {
  const Amplitude exponent = -0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(beta) * alpha;
  return {exponent.real(), reduce_angle(exponent.imag())};
}

double q_function(Amplitude beta, const KerrParams& params) {
  const auto& c = params.input();
  double q = 0.0;
  for (int n = 0; n <= c.n_max(); ++n) {
    const double p = std::norm(c[n]);
    if (p == 0.0) continue;
    const Amplitude shifted = std::polar(params.alpha(), n * params.phi());
    q += p * std::exp(-std::norm(shifted - beta));
  }
  return q / kPi;
}

SchmidtState conditional_state(Amplitude beta, const KerrParams& params) {
  const auto& c = params.input();
  const std::size_t size = c.size();
  const double alpha = params.alpha();
  const double common = -0.5 * alpha * alpha - 0.5 * std::norm(beta);
  const double feedforward = params.phi() * alpha * beta.real();

  std::vector<double> log_mag(size, -std::numeric_limits<double>::infinity());
  std::vector<double> phase(size, 0.0);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < size; ++n) {
    const double mag = std::abs(c[n]);
    if (mag == 0.0) continue;
    const double nd = static_cast<double>(n);
    const Amplitude z = alpha * std::conj(beta) * std::polar(1.0, nd * params.phi());
    log_mag[n] = std::log(mag) + z.real() + common;
    phase[n] = z.imag() - nd * feedforward;
    top = std::max(top, log_mag[n]);
  }

  double scaled_mass = 0.0;
  std::vector<Amplitude> d(size, 0.0);
  for (std::size_t n = 0; n < size; ++n) {
    if (!std::isfinite(log_mag[n])) continue;
    const double mag = std::exp(log_mag[n] - top);
    scaled_mass += mag * mag;
    d[n] = std::polar(mag, phase[n]);
  }
  // pi Q(beta) = exp(2 top) * scaled_mass
  const double log_q = 2.0 * top + std::log(scaled_mass) - std::log(kPi);
  if (!(log_q >= kLogTiny)) {
    throw ZeroProbabilityError("Q(beta) underflows for this outcome");
  }
  return SchmidtState::normalized(std::move(d), c.tail_mass());
}

double effective_lambda(Amplitude beta, const KerrParams& params) {
  // |alpha beta| sin(phi0) = alpha Im(beta) for real alpha
  return params.lambda() * std::exp(params.phi() * params.alpha() * beta.imag());
}

double LinearizationReport::validity_at(int n) const { return alpha * n * std::abs(phi); }

LinearizationReport linearization_diagnostics(Amplitude beta, const KerrParams& params) {
  LinearizationReport r;
  r.alpha = params.alpha();
  r.phi = params.phi();
  const double amp = params.alpha() * std::abs(beta);
  const double phi0 = Outcome{beta}.phi0();
  const int n_max = params.n_max();

  for (int n = 0; n <= n_max; ++n) {
    const double shift = n * params.phi();
    r.q_exact.push_back(amp * std::cos(shift - phi0));
    r.phase_exact.push_back(amp * std::sin(shift - phi0));
    r.q_linear.push_back(amp * std::cos(phi0) + shift * amp * std::sin(phi0));
    r.phase_linear.push_back(-amp * std::sin(phi0) + shift * amp * std::cos(phi0));
  }

  r.n_eff = params.lambda() > 0.0 ? -1.0 / (2.0 * std::log(params.lambda())) : 0.0;
  r.validity = r.alpha * r.n_eff * std::abs(r.phi);
  r.n_checked = std::min(n_max, static_cast<int>(std::floor(5.0 * r.n_eff)));
  for (int n = 0; n <= r.n_checked; ++n) {
    r.max_q_error = std::max(r.max_q_error, std::abs(r.q_exact[n] - r.q_linear[n]));
    r.max_phase_error =
        std::max(r.max_phase_error, std::abs(r.phase_exact[n] - r.phase_linear[n]));
  }
  return r;
}

double fidelity_to_phi_n(const SchmidtState& state, int n) {
  if (n < 0 || n > state.n_max()) {
    throw DomainError("N = " + std::to_string(n) + " outside the ladder 0.." +
                      std::to_string(state.n_max()));
  }
  Amplitude sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += state[k];
  return std::norm(sum) / (n + 1);
}

double baseline_merit(const KerrParams& params) {
  return fidelity_to_phi_n(params.input(), params.fock_cut_n());
}

GridScan scan_grid(const KerrParams& params, const GridSpec& grid, ScanFields fields,
                   const Parallelism& par) {
  grid.validate();
  const int side = grid.points_per_axis();
  GridScan scan{grid, std::vector<ScanPoint>(static_cast<std::size_t>(side) * side)};
  parallel_for(scan.points.size(), par, [&](std::size_t i) {
    ScanPoint& pt = scan.points[i];
    pt.x = grid.coordinate(static_cast<int>(i / side));
    pt.y = grid.coordinate(static_cast<int>(i % side));
    pt.beta = Amplitude(params.alpha() + pt.x, pt.y);
    pt.q = q_function(pt.beta, params);
    try {
      const auto state = conditional_state(pt.beta, params);
      pt.merit = fidelity_to_phi_n(state, params.fock_cut_n());
      pt.teleport = fields == ScanFields::kWithTeleport
                        ? teleport_fidelity(state).fidelity
                        : std::numeric_limits<double>::quiet_NaN();
    } catch (const ZeroProbabilityError&) {
      pt.merit = std::numeric_limits<double>::quiet_NaN();
      pt.teleport = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return scan;
}

bool meets_threshold(double merit, double threshold) {
  return merit >= threshold - 1e-12;
}

PhaseRegion select_region(const GridScan& scan, double baseline, double delta_f) {
  if (!(delta_f >= 0.0)) throw DomainError("delta_F must be non-negative");
  PhaseRegion region;
  region.delta_f = delta_f;
  region.threshold = baseline + delta_f;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& pt : scan.points) {
    if (std::isnan(pt.merit)) continue;
    best = std::max(best, pt.merit);
    if (meets_threshold(pt.merit, region.threshold)) region.points.push_back({pt.beta, scan.grid.weight()});
  }
  if (region.points.empty()) {
    throw EmptyRegionError("no outcome reaches F >= " + std::to_string(region.threshold) +
                               " (best " + std::to_string(best) + ")",
                           best);
  }
  return region;
}

PhaseRegion build_region(const KerrParams& params, const GridSpec& grid, double delta_f,
                         const Parallelism& par) {
  if (!(delta_f >= 0.0)) throw DomainError("delta_F must be non-negative");
  const auto scan = scan_grid(params, grid, ScanFields::kMeritOnly, par);
  return select_region(scan, baseline_merit(params), delta_f);
}

double success_probability(const PhaseRegion& region, const KerrParams& params,
                           const Parallelism& par) {
  require_region(region);
  std::vector<double> q(region.points.size());
  parallel_for(q.size(), par,
               [&](std::size_t i) { q[i] = q_function(region.points[i].beta, params); });
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) total += q[i] * region.points[i].weight;
  return total;
}

double average_fidelity(const PhaseRegion& region, const KerrParams& params,
                        const Parallelism& par) {
  const int n = params.fock_cut_n();
  return region_average(region, params, par,
                        [n](const SchmidtState& s) { return fidelity_to_phi_n(s, n); });
}

double average_teleport_fidelity(const PhaseRegion& region, const KerrParams& params,
                                 const Parallelism& par) {
  return region_average(region, params, par,
                        [](const SchmidtState& s) { return teleport_fidelity(s).fidelity; });
}

}  // namespace cvconc
