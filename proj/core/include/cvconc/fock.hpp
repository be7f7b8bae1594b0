#ifndef CVCONC_FOCK_HPP
#define CVCONC_FOCK_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cvconc {

using Amplitude = std::complex<double>;

/// Numerical tolerances for the truncated Fock ladder.
struct Tolerance {
  /// Largest probability the truncation may discard.
  double tail_mass = 1e-20;
  /// Allowed deviation of sum |d_n|^2 from one.
  double norm_tol = 1e-12;

  /// Throws DomainError unless both values lie in (0, 1).
  void validate() const;
};

/// Schmidt coefficients d_n of a state sum_n d_n |n, n> on the ladder n = 0..n_max.
///
/// Always normalized. Instances are immutable; every operation returns a new state.
class SchmidtState {
 public:
  /// Rescales `raw` to unit norm. Throws ZeroProbabilityError if `raw` is numerically zero.
  static SchmidtState normalized(std::vector<Amplitude> raw, double tail_mass = 0.0);

  /// Adopts already-normalized coefficients; throws DomainError if the norm is off by
  /// more than `tol.norm_tol`.
  static SchmidtState from_coefficients(std::vector<Amplitude> coeffs,
                                        const Tolerance& tol = {});

  std::span<const Amplitude> coeffs() const { return coeffs_; }
  const Amplitude& operator[](std::size_t n) const { return coeffs_[n]; }
  std::size_t size() const { return coeffs_.size(); }
  int n_max() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Probability discarded when the ladder was truncated (zero if unknown).
  double tail_mass() const { return tail_mass_; }

  /// Squeezing parameter the state was generated from, when it is a TMSV.
  std::optional<double> lambda_meta() const { return lambda_meta_; }
  SchmidtState with_lambda_meta(std::optional<double> lambda) const;

  /// |d_n|^2 for every n.
  std::vector<double> populations() const;
  double norm_squared() const;

 private:
  SchmidtState(std::vector<Amplitude> coeffs, double tail_mass)
      : coeffs_(std::move(coeffs)), tail_mass_(tail_mass) {}

  std::vector<Amplitude> coeffs_;
  double tail_mass_ = 0.0;
  std::optional<double> lambda_meta_;
};

/// Diagonal local operation A = sum_n A_n |n><n| acting on Alice's mode.
class DiagonalFilter {
 public:
  explicit DiagonalFilter(std::vector<Amplitude> values);

  static DiagonalFilter identity(int n_max);

  std::span<const Amplitude> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double max_magnitude() const;

 private:
  std::vector<Amplitude> values_;
};

struct FilterOutcome {
  SchmidtState state;
  double success_prob;
};

/// Two-mode squeezed vacuum, c_n = sqrt(1 - lambda^2) lambda^n, renormalized on n <= n_max.
///
/// Throws DomainError for lambda outside [0, 1) or negative n_max, and TruncationError
/// (carrying the smallest admissible n_max) when lambda^(2(n_max+1)) > tol.tail_mass.
SchmidtState tmsv_state(double lambda, int n_max, const Tolerance& tol = {});

/// Smallest N with lambda^(2(N+1)) <= tail_mass. Returns 0 for lambda == 0.
int default_n_max(double lambda, double tail_mass = Tolerance{}.tail_mass);

/// Applies A (x) 1 to the state and renormalizes.
///
/// Filters with max|A_n| > 1 are first divided by max|A_n| so the map is physical; the
/// reported probability then refers to the rescaled filter.
FilterOutcome apply_filter(const SchmidtState& state, const DiagonalFilter& filter);

/// Entanglement entropy -sum |d_n|^2 ln |d_n|^2 in nats, with 0 ln 0 = 0.
double von_neumann_entropy(const SchmidtState& state);

/// Closed-form TMSV entropy -ln(1 - lambda^2) - lambda^2/(1 - lambda^2) ln lambda^2.
double tmsv_entropy_analytic(double lambda);

/// Linear phase profile offset + slope * n.
struct PhaseRamp {
  double offset = 0.0;
  double slope = 0.0;
};

/// Global phase and linear ramp that canonicalize_phase() removes.
PhaseRamp fit_phase_ramp(const SchmidtState& state);

/// Removes a global phase and a linear phase ramp.
///
/// When arg(d_n) is linear in n modulo pi the result is real, with the largest
/// coefficient positive; sign changes along the ladder are kept. Otherwise the
/// |d_n|^2-weighted best-fit ramp is removed and the nonlinear residual stays.
SchmidtState canonicalize_phase(const SchmidtState& state);

}  // namespace cvconc

#endif  // CVCONC_FOCK_HPP
