#ifndef CVCONC_CAVITY_HPP
#define CVCONC_CAVITY_HPP

#include <vector>

#include "cvconc/fock.hpp"

namespace cvconc {

/// Parameters of the Ramsey-interferometer scheme: a Rydberg atom dispersively
/// coupled to Alice's cavity mode.
class CavityParams {
 public:
  /// Throws DomainError unless lambda is in [0, 1) and both angles are finite.
  /// Angles are stored reduced to (-pi, pi].
  CavityParams(double lambda, double phi, double phi0);

  double lambda() const { return lambda_; }
  /// Single-photon phase shift of the |e> branch.
  double phi() const { return phi_; }
  /// Ramsey preparation phase.
  double phi0() const { return phi0_; }

 private:
  double lambda_;
  double phi_;
  double phi0_;
};

/// Joint atom-field amplitudes after the second Ramsey zone, indexed by photon number.
struct AtomFieldState {
  std::vector<Amplitude> g_branch;
  std::vector<Amplitude> e_branch;

  double norm_squared() const;
  /// Probability that the atom is detected in |g>.
  double g_probability() const;
};

/// A_n = sin((n phi - phi0) / 2), n = 0..n_max.
DiagonalFilter cavity_filter(const CavityParams& params, int n_max);

/// Output channel conditioned on detecting |g>, with the phases of the raw amplitudes
/// compensated so the coefficients are real (signs kept). Uses default_n_max() when
/// n_max is negative.
FilterOutcome cavity_schmidt(const CavityParams& params, int n_max = -1);

/// Closed-form success probability.
double cavity_success_prob_analytic(const CavityParams& params);

/// First-principles evolution: Ramsey preparation, dispersive phase e^{-i n phi} on |e>,
/// pi/2 rotation. Uses default_n_max() when n_max is negative.
AtomFieldState evolve_atom_field(const CavityParams& params, int n_max = -1);

/// Photon number (pi + phi0) / phi up to which the filter eigenvalues grow.
double cavity_peak_index(const CavityParams& params);

}  // namespace cvconc

#endif  // CVCONC_CAVITY_HPP
