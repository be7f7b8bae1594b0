#ifndef CVCONC_KERR_HPP
#define CVCONC_KERR_HPP

#include <vector>

#include "cvconc/fock.hpp"
#include "cvconc/parallel.hpp"

namespace cvconc {

/// Parameters of the cross-Kerr scheme with an auxiliary coherent state |alpha>,
/// alpha real and positive, followed by eight-port homodyne detection.
class KerrParams {
 public:
  /// n_max < 0 selects default_n_max(lambda). Throws DomainError unless lambda is in
  /// [0, 1), alpha > 0, phi finite and 0 <= fock_cut_n <= n_max; TruncationError if
  /// n_max is too small for lambda.
  KerrParams(double lambda, double alpha, double phi, int fock_cut_n = 10, int n_max = -1);

  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  /// Cross-phase per photon in Alice's mode.
  double phi() const { return phi_; }
  int n_max() const { return input_.n_max(); }
  /// N of the target maximally entangled state on N + 1 levels.
  int fock_cut_n() const { return fock_cut_n_; }

  /// Input two-mode squeezed vacuum on the truncated ladder.
  const SchmidtState& input() const { return input_; }

 private:
  double lambda_;
  double alpha_;
  double phi_;
  int fock_cut_n_;
  SchmidtState input_;
};

/// Eight-port homodyne outcome beta = |beta| e^{i phi0}.
struct Outcome {
  Amplitude beta;

  /// arg(beta) in (-pi, pi].
  double phi0() const;
};

/// Square integration window centred on alpha, in x + iy = beta - alpha.
struct GridSpec {
  double half_width = 5.0;
  double step = 0.1;

  /// Throws DomainError unless half_width >= 4 and 0 < step <= 0.2.
  void validate() const;
  int points_per_axis() const;
  double coordinate(int i) const;
  double weight() const { return step * step; }
};

/// A complex number stored as log-magnitude and phase.
struct LogAmplitude {
  double log_magnitude = 0.0;
  double phase = 0.0;

  Amplitude value() const;
  double magnitude() const;
};

/// <beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta) alpha), kept in log form.
LogAmplitude coherent_overlap(Amplitude beta, Amplitude alpha);

/// Husimi function of the auxiliary mode after the Kerr interaction:
/// Q(beta) = (1 - lambda^2)/pi sum_n lambda^{2n} exp(-|alpha e^{i n phi} - beta|^2).
double q_function(Amplitude beta, const KerrParams& params);

/// Normalized Schmidt coefficients after detecting beta, including the feedforward
/// phase exp(-i n phi alpha Re(beta)). Evaluated in log space.
/// Throws ZeroProbabilityError when Q(beta) underflows.
SchmidtState conditional_state(Amplitude beta, const KerrParams& params);

/// Effective squeezing lambda exp(phi |alpha beta| sin phi0) of the linearized model.
double effective_lambda(Amplitude beta, const KerrParams& params);

struct LinearizationReport {
  /// Amplitude exponent q_n and phase phi_n, exact and to first order in n phi.
  std::vector<double> q_exact;
  std::vector<double> phase_exact;
  std::vector<double> q_linear;
  std::vector<double> phase_linear;
  /// -1/(2 ln lambda), the scale of the occupied ladder (0 for lambda = 0).
  double n_eff = 0.0;
  /// |alpha| n_eff |phi|; the linear model needs this well below one.
  double validity = 0.0;
  /// Largest n included in the error maxima: floor(5 n_eff).
  int n_checked = 0;
  double max_q_error = 0.0;
  double max_phase_error = 0.0;
  double alpha = 0.0;
  double phi = 0.0;

  /// |alpha| n |phi|.
  double validity_at(int n) const;
};

LinearizationReport linearization_diagnostics(Amplitude beta, const KerrParams& params);

/// |sum_{n<=N} d_n|^2 / (N + 1): overlap with the maximally entangled state on N + 1 levels.
double fidelity_to_phi_n(const SchmidtState& state, int n);

/// Figure of merit of the unconcentrated input, fidelity_to_phi_n(input, fock_cut_n).
double baseline_merit(const KerrParams& params);

/// One evaluated outcome of a grid scan.
struct ScanPoint {
  double x = 0.0;
  double y = 0.0;
  Amplitude beta;
  double q = 0.0;
  double merit = 0.0;
  /// Teleportation fidelity of the conditional state; NaN if the scan skipped it.
  double teleport = 0.0;
};

enum class ScanFields { kMeritOnly, kWithTeleport };

/// Every outcome of the window, in row-major order (x outer, y inner, both ascending).
struct GridScan {
  GridSpec grid;
  std::vector<ScanPoint> points;
};

GridScan scan_grid(const KerrParams& params, const GridSpec& grid,
                   ScanFields fields = ScanFields::kWithTeleport, const Parallelism& par = {});

struct RegionPoint {
  Amplitude beta;
  double weight = 0.0;
};

/// Acceptance predicate F >= threshold. Comparisons allow 1e-12 of rounding slack, so
/// outcomes whose merit equals the threshold mathematically are always accepted.
bool meets_threshold(double merit, double threshold);

/// Accepted outcomes: every grid point with F(beta) >= F0 + delta_F.
struct PhaseRegion {
  std::vector<RegionPoint> points;
  double delta_f = 0.0;
  double threshold = 0.0;
};

/// Throws DomainError for negative delta_f and EmptyRegionError when nothing passes.
PhaseRegion build_region(const KerrParams& params, const GridSpec& grid, double delta_f,
                         const Parallelism& par = {});

/// Same selection from an existing scan.
PhaseRegion select_region(const GridScan& scan, double baseline, double delta_f);

/// sum Q(beta) w over the region.
double success_probability(const PhaseRegion& region, const KerrParams& params,
                           const Parallelism& par = {});

/// Q-weighted mean of F(beta) over the region.
double average_fidelity(const PhaseRegion& region, const KerrParams& params,
                        const Parallelism& par = {});

/// Q-weighted mean teleportation fidelity over the region.
double average_teleport_fidelity(const PhaseRegion& region, const KerrParams& params,
                                 const Parallelism& par = {});

}  // namespace cvconc

#endif  // CVCONC_KERR_HPP
