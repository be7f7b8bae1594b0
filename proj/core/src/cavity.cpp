#include "cvconc/cavity.hpp"

#include <array>
#include <cmath>
#include <string>

#include "cvconc/angles.hpp"
#include "cvconc/errors.hpp"

namespace cvconc {

namespace {

// Atom amplitudes in the basis (|g>, |e>).
using AtomSpinor = std::array<Amplitude, 2>;
using AtomMatrix = std::array<std::array<Amplitude, 2>, 2>;

AtomSpinor apply(const AtomMatrix& m, const AtomSpinor& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

int resolve_n_max(const CavityParams& params, int n_max) {
  return n_max < 0 ? default_n_max(params.lambda()) : n_max;
}

}  // namespace

CavityParams::CavityParams(double lambda, double phi, double phi0) : lambda_(lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw DomainError("lambda must lie in [0, 1), got " + std::to_string(lambda));
  }
  if (!std::isfinite(phi) || !std::isfinite(phi0)) {
    throw DomainError("cavity phases must be finite");
  }
  phi_ = reduce_angle(phi);
  phi0_ = reduce_angle(phi0);
}

double AtomFieldState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : g_branch) s += std::norm(a);
  for (const auto& a : e_branch) s += std::norm(a);
  return s;
}

double AtomFieldState::g_probability() const {
  double s = 0.0;
  for (const auto& a : g_branch) s += std::norm(a);
  return s;
}

DiagonalFilter cavity_filter(const CavityParams& params, int n_max) {
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  std::vector<Amplitude> a(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    a[n] = std::sin((n * params.phi() - params.phi0()) / 2.0);
  }
  return DiagonalFilter(std::move(a));
}

FilterOutcome cavity_schmidt(const CavityParams& params, int n_max) {
  n_max = resolve_n_max(params, n_max);
  const auto input = tmsv_state(params.lambda(), n_max);
  std::vector<Amplitude> d(input.size());
  double prob = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    d[n] = input[n].real() * std::sin((n * params.phi() - params.phi0()) / 2.0);
    prob += std::norm(d[n]);
  }
  if (!(prob >= 1e-300)) {
    throw ZeroProbabilityError("atom is never detected in |g> for these phases");
  }
  auto state = SchmidtState::normalized(std::move(d), input.tail_mass() / prob);
  return {std::move(state), prob};
}

double cavity_success_prob_analytic(const CavityParams& params) {
  const double l2 = params.lambda() * params.lambda();
  const double phi = params.phi();
  const double phi0 = params.phi0();
  return 0.5 - (1.0 - l2) / 2.0 * (std::cos(phi0) - l2 * std::cos(phi + phi0)) /
                   (1.0 - 2.0 * l2 * std::cos(phi) + l2 * l2);
}

AtomFieldState evolve_atom_field(const CavityParams& params, int n_max) {
  n_max = resolve_n_max(params, n_max);
  const auto input = tmsv_state(params.lambda(), n_max);
  const double r = 1.0 / std::sqrt(2.0);

  const AtomSpinor prepared = {r, r * std::polar(1.0, params.phi0())};
  // pi/2 rotation: |g> -> (|g> + |e>)/sqrt2, |e> -> (|e> - |g>)/sqrt2; columns are images.
  const AtomMatrix rotation = {{{r, -r}, {r, r}}};

  AtomFieldState out;
  out.g_branch.resize(input.size());
  out.e_branch.resize(input.size());
  for (int n = 0; n <= n_max; ++n) {
    const AtomMatrix dispersive = {{{1.0, 0.0}, {0.0, std::polar(1.0, -n * params.phi())}}};
    const AtomSpinor atom = apply(rotation, apply(dispersive, prepared));
    out.g_branch[n] = input[n] * atom[0];
    out.e_branch[n] = input[n] * atom[1];
  }
  return out;
}

double cavity_peak_index(const CavityParams& params) {
  if (params.phi() == 0.0) throw DomainError("peak index undefined for phi = 0");
  return (kPi + params.phi0()) / params.phi();
}

}  // namespace cvconc
