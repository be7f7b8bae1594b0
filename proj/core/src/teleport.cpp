#include "cvconc/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cvconc/cavity.hpp"
#include "cvconc/errors.hpp"

namespace cvconc {

FidelityResult teleport_fidelity(const SchmidtState& state) {
  const auto d = state.coeffs();
  const int size = static_cast<int>(d.size());

  std::vector<double> log_factorial(2 * static_cast<std::size_t>(size) + 1);
  for (std::size_t k = 0; k < log_factorial.size(); ++k) {
    log_factorial[k] = std::lgamma(static_cast<double>(k) + 1.0);
  }

  std::vector<double> log_mag(size);
  std::vector<Amplitude> unit(size);
  std::vector<bool> present(size);
  for (int n = 0; n < size; ++n) {
    const double mag = std::abs(d[n]);
    present[n] = mag > 0.0;
    log_mag[n] = present[n] ? std::log(mag) : 0.0;
    unit[n] = present[n] ? d[n] / mag : Amplitude(0.0);
  }

  const double ln2 = std::numbers::ln2;
  Amplitude sum = 0.0;
  long long terms = 0;
  for (int s = 0; s <= 2 * (size - 1); ++s) {
    const int n_lo = std::max(0, s - (size - 1));
    const int n_hi = std::min(s, size - 1);
    for (int n = n_lo; n <= n_hi; ++n) {
      const int m = s - n;
      if (!present[m] || !present[n]) continue;
      const double log_term = log_factorial[s] - log_factorial[m] - log_factorial[n] -
                              s * ln2 + log_mag[m] + log_mag[n];
      const double mag = std::exp(log_term);
      if (!std::isfinite(mag)) {
        throw NumericalError("teleportation sum overflowed at m = " + std::to_string(m) +
                             ", n = " + std::to_string(n));
      }
      sum += mag * unit[m] * std::conj(unit[n]);
      ++terms;
    }
  }
  return {0.5 * sum.real(), 0.5 * std::abs(sum.imag()), terms};
}

double cavity_teleport_fidelity_analytic(double lambda, double phi, double phi0) {
  const CavityParams params(lambda, phi, phi0);
  const double prob = cavity_success_prob_analytic(params);
  if (!(prob >= 1e-300)) {
    throw ZeroProbabilityError("cavity scheme never succeeds for these phases");
  }
  const double l = params.lambda();
  const double c_half = std::cos(params.phi() / 2.0);
  const double p0 = params.phi0();
  const double bracket =
      1.0 / (1.0 - l * c_half) -
      (std::cos(p0) - l * std::cos(params.phi() / 2.0 + p0)) / (1.0 - 2.0 * l * c_half + l * l);
  return (1.0 - l * l) / (4.0 * prob) * bracket;
}

}  // namespace cvconc
