#include "cvconc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cvconc/angles.hpp"
#include "cvconc/errors.hpp"

namespace cvconc {

namespace {

constexpr double kZeroProbability = 1e-300;

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw DomainError("squeezing parameter lambda must lie in [0, 1), got " +
                      std::to_string(lambda));
  }
}

// Reduces to (-pi/2, pi/2].
double reduce_half_turn(double theta) {
  double r = theta - kPi * std::round(theta / kPi);
  if (r <= -kPi / 2) r += kPi;
  return r;
}

double arg_in_half_open(Amplitude z) {
  double a = std::arg(z);
  return a <= -kPi ? kPi : a;
}

struct WeightedLine {
  double offset = 0.0;
  double slope = 0.0;
};

// Least-squares line through (n, y_n) with weights w_n.
WeightedLine fit_line(std::span<const double> y, std::span<const double> w) {
  double sw = 0.0, sn = 0.0, sy = 0.0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    sw += w[n];
    sn += w[n] * static_cast<double>(n);
    sy += w[n] * y[n];
  }
  if (sw <= 0.0) return {};
  const double n_bar = sn / sw;
  const double y_bar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    const double dn = static_cast<double>(n) - n_bar;
    sxx += w[n] * dn * dn;
    sxy += w[n] * dn * (y[n] - y_bar);
  }
  WeightedLine line;
  line.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  line.offset = y_bar - line.slope * n_bar;
  return line;
}

std::vector<Amplitude> remove_ramp(std::span<const Amplitude> d, const PhaseRamp& ramp) {
  std::vector<Amplitude> out(d.size());
  for (std::size_t n = 0; n < d.size(); ++n) {
    out[n] = d[n] * std::polar(1.0, -(ramp.offset + ramp.slope * static_cast<double>(n)));
  }
  return out;
}

}  // namespace

void Tolerance::validate() const {
  if (!(tail_mass > 0.0 && tail_mass < 1.0) || !(norm_tol > 0.0 && norm_tol < 1.0)) {
    throw DomainError("tolerances must lie strictly between 0 and 1");
  }
}

SchmidtState SchmidtState::normalized(std::vector<Amplitude> raw, double tail_mass) {
  if (raw.empty()) throw DomainError("Schmidt state needs at least one coefficient");
  double norm2 = 0.0;
  for (const auto& d : raw) norm2 += std::norm(d);
  if (!std::isfinite(norm2)) throw NumericalError("non-finite Schmidt coefficients");
  if (norm2 < kZeroProbability) {
    throw ZeroProbabilityError("Schmidt coefficients vanish on the truncated ladder");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& d : raw) d *= inv;
  return SchmidtState(std::move(raw), tail_mass);
}

SchmidtState SchmidtState::from_coefficients(std::vector<Amplitude> coeffs,
                                             const Tolerance& tol) {
  if (coeffs.empty()) throw DomainError("Schmidt state needs at least one coefficient");
  double norm2 = 0.0;
  for (const auto& d : coeffs) norm2 += std::norm(d);
  if (!(std::abs(norm2 - 1.0) <= tol.norm_tol)) {
    throw DomainError("Schmidt coefficients are not normalized: sum |d_n|^2 = " +
                      std::to_string(norm2));
  }
  return SchmidtState(std::move(coeffs), 0.0);
}

SchmidtState SchmidtState::with_lambda_meta(std::optional<double> lambda) const {
  SchmidtState copy = *this;
  copy.lambda_meta_ = lambda;
  return copy;
}

std::vector<double> SchmidtState::populations() const {
  std::vector<double> p(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), p.begin(),
                 [](const Amplitude& d) { return std::norm(d); });
  return p;
}

double SchmidtState::norm_squared() const {
  double s = 0.0;
  for (const auto& d : coeffs_) s += std::norm(d);
  return s;
}

DiagonalFilter::DiagonalFilter(std::vector<Amplitude> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("filter needs at least one eigenvalue");
  for (const auto& a : values_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw DomainError("filter eigenvalues must be finite");
    }
  }
}

DiagonalFilter DiagonalFilter::identity(int n_max) {
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  return DiagonalFilter(std::vector<Amplitude>(static_cast<std::size_t>(n_max) + 1, 1.0));
}

double DiagonalFilter::max_magnitude() const {
  double m = 0.0;
  for (const auto& a : values_) m = std::max(m, std::abs(a));
  return m;
}

int default_n_max(double lambda, double tail_mass) {
  require_lambda(lambda);
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) {
    throw DomainError("tail mass must lie in (0, 1)");
  }
  if (lambda == 0.0) return 0;
  const double log_l2 = 2.0 * std::log(lambda);
  int n = std::max(0, static_cast<int>(std::ceil(std::log(tail_mass) / log_l2)) - 1);
  // The closed form can be off by one either way after rounding.
  while (std::pow(lambda, 2.0 * (n + 1)) > tail_mass) ++n;
  while (n > 0 && std::pow(lambda, 2.0 * n) <= tail_mass) --n;
  return n;
}

SchmidtState tmsv_state(double lambda, int n_max, const Tolerance& tol) {
  require_lambda(lambda);
  tol.validate();
  if (n_max < 0) throw DomainError("n_max must be non-negative");

  const double tail = lambda == 0.0 ? 0.0 : std::pow(lambda, 2.0 * (n_max + 1));
  if (tail > tol.tail_mass) {
    const int suggested = default_n_max(lambda, tol.tail_mass);
    throw TruncationError("n_max = " + std::to_string(n_max) + " discards " +
                              std::to_string(tail) + " of the TMSV population; use n_max >= " +
                              std::to_string(suggested),
                          tail, suggested);
  }

  std::vector<Amplitude> c(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double prefactor = std::sqrt(1.0 - lambda * lambda);
  for (int n = 0; n <= n_max; ++n) {
    c[n] = prefactor * (n == 0 ? 1.0 : std::pow(lambda, n));
  }
  return SchmidtState::normalized(std::move(c), tail).with_lambda_meta(lambda);
}

FilterOutcome apply_filter(const SchmidtState& state, const DiagonalFilter& filter) {
  if (state.size() != filter.size()) {
    throw DomainError("filter has " + std::to_string(filter.size()) +
                      " eigenvalues but the state has " + std::to_string(state.size()) +
                      " coefficients");
  }
  const double peak = filter.max_magnitude();
  const double scale = peak > 1.0 ? 1.0 / peak : 1.0;

  std::vector<Amplitude> out(state.size());
  double prob = 0.0;
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = scale * filter.values()[n] * state[n];
    prob += std::norm(out[n]);
  }
  if (!(prob >= kZeroProbability)) {
    throw ZeroProbabilityError("filter annihilates the state (success probability " +
                               std::to_string(prob) + ")");
  }
  auto result = SchmidtState::normalized(std::move(out), state.tail_mass() / prob);
  return {std::move(result), std::min(prob, 1.0)};
}

double von_neumann_entropy(const SchmidtState& state) {
  double s = 0.0;
  for (const auto& d : state.coeffs()) {
    const double p = std::norm(d);
    // A population within rounding of 1 is a product state; its -p ln p is pure noise.
    if (p > 0.0 && p < 1.0 - 4 * std::numeric_limits<double>::epsilon()) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

double tmsv_entropy_analytic(double lambda) {
  require_lambda(lambda);
  if (lambda == 0.0) return 0.0;
  const double l2 = lambda * lambda;
  return -std::log1p(-l2) - l2 / (1.0 - l2) * std::log(l2);
}

PhaseRamp fit_phase_ramp(const SchmidtState& state) {
  const auto d = state.coeffs();
  const auto p = state.populations();
  const double p_max = *std::max_element(p.begin(), p.end());

  // Slope and offset from doubled angles, so that sign flips (phase jumps of pi)
  // do not count as nonlinear phase.
  Amplitude pair_sum = 0.0;
  for (std::size_t n = 0; n + 1 < d.size(); ++n) {
    const double mag = std::abs(d[n]) * std::abs(d[n + 1]);
    if (mag > 0.0) pair_sum += d[n + 1] * d[n + 1] * std::conj(d[n] * d[n]) / mag;
  }
  PhaseRamp ramp;
  ramp.slope = std::abs(pair_sum) > 0.0 ? arg_in_half_open(pair_sum) / 2.0 : 0.0;

  Amplitude square_sum = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    const Amplitude w = d[n] * std::polar(1.0, -ramp.slope * static_cast<double>(n));
    square_sum += w * w;
  }
  ramp.offset = std::abs(square_sum) > 0.0 ? arg_in_half_open(square_sum) / 2.0 : 0.0;

  std::vector<double> residual(d.size(), 0.0);
  bool linear_mod_pi = true;
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (p[n] == 0.0) continue;
    const double theta = std::arg(d[n]) - ramp.offset - ramp.slope * static_cast<double>(n);
    residual[n] = reduce_half_turn(theta);
    if (p[n] > 1e-12 * p_max && std::abs(residual[n]) > 1e-8) linear_mod_pi = false;
  }

  if (linear_mod_pi) {
    const auto correction = fit_line(residual, p);
    ramp.offset += correction.offset;
    ramp.slope += correction.slope;
    // Fix the overall sign by the largest coefficient; near-ties resolve to the first.
    const auto aligned = remove_ramp(d, ramp);
    for (std::size_t n = 0; n < aligned.size(); ++n) {
      if (p[n] >= (1.0 - 1e-9) * p_max) {
        if (aligned[n].real() < 0.0) ramp.offset += kPi;
        break;
      }
    }
  } else {
    // Genuinely nonlinear phases: weighted fit through the unwrapped arg(d_n).
    std::vector<double> phase(d.size(), 0.0);
    bool started = false;
    double previous = 0.0;
    for (std::size_t n = 0; n < d.size(); ++n) {
      if (p[n] == 0.0) continue;
      const double a = std::arg(d[n]);
      phase[n] = started ? previous + reduce_angle(a - previous) : a;
      previous = phase[n];
      started = true;
    }
    const auto line = fit_line(phase, p);
    ramp.offset = line.offset;
    ramp.slope = line.slope;
  }
  ramp.offset = reduce_angle(ramp.offset);
  return ramp;
}

SchmidtState canonicalize_phase(const SchmidtState& state) {
  const auto ramp = fit_phase_ramp(state);
  return SchmidtState::normalized(remove_ramp(state.coeffs(), ramp), state.tail_mass())
      .with_lambda_meta(state.lambda_meta());
}

}  // namespace cvconc
