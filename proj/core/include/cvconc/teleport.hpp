#ifndef CVCONC_TELEPORT_HPP
#define CVCONC_TELEPORT_HPP

#include "cvconc/fock.hpp"

namespace cvconc {

/// Coherent-state teleportation fidelity through a Schmidt-diagonal channel.
struct FidelityResult {
  double fidelity = 0.0;
  /// |Im| of the double sum; zero up to rounding because the sum is Hermitian.
  double imag_residual = 0.0;
  /// Number of (m, n) pairs that contributed.
  long long terms_used = 0;
};

/// F = 1/2 sum_{m,n} C(m+n, n) d_m conj(d_n) / 2^(m+n) over the truncated ladder.
///
/// Every term is assembled in log space, so n_max in the thousands does not overflow.
/// Terms are accumulated along diagonals s = m + n in ascending order, n ascending
/// within a diagonal; the result is bit-reproducible.
FidelityResult teleport_fidelity(const SchmidtState& state);

/// Closed-form fidelity of the cavity scheme's output channel. Angles are reduced to
/// (-pi, pi] first. Throws ZeroProbabilityError when the success probability vanishes.
double cavity_teleport_fidelity_analytic(double lambda, double phi, double phi0);

}  // namespace cvconc

#endif  // CVCONC_TELEPORT_HPP
