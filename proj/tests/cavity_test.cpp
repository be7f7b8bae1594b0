#include "cvconc/cavity.hpp"

#include <gtest/gtest.h>

#include "cvconc/angles.hpp"
#include "cvconc/errors.hpp"
#include "cvconc/teleport.hpp"
#include "support/oracles.hpp"

namespace cvconc {
namespace {

double grid_angle(int i) { return -kPi + (i + 0.5) * 2 * kPi / 20; }

double max_diff(const SchmidtState& a, const SchmidtState& b) {
  double m = 0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

TEST(CavityParams, ReducesAngles) {
  const CavityParams p(0.5, 3 * kPi, -kPi);
  EXPECT_NEAR(p.phi(), kPi, 1e-15);
  EXPECT_NEAR(p.phi0(), kPi, 1e-15);
  EXPECT_THROW(CavityParams(1.0, 0.1, 0.1), DomainError);
  EXPECT_THROW(CavityParams(0.5, NAN, 0.1), DomainError);
}

TEST(CavityFilter, UniformAtZeroPhi) {
  const auto f = cavity_filter(CavityParams(0.5, 0.0, kPi), 20);
  for (const auto& a : f.values()) EXPECT_NEAR(a.real(), -1.0, 1e-15);
}

TEST(CavityFilter, TenthLevelAtFullSwing) {
  const auto f = cavity_filter(CavityParams(0.5, kPi / 10, 0.0), 20);
  EXPECT_NEAR(f.values()[10].real(), 1.0, 1e-15);
  EXPECT_LE(f.max_magnitude(), 1.0);
}

TEST(CavityFilter, PeakIndex) {
  const CavityParams p(0.5, kPi / 10, -kPi / 10);
  EXPECT_NEAR(cavity_peak_index(p), 9.0, 1e-12);
  // Eigenvalues grow up to the peak.
  const auto f = cavity_filter(p, 20);
  for (int n = 0; n < 9; ++n) EXPECT_LT(f.values()[n].real(), f.values()[n + 1].real());
  EXPECT_NEAR(f.values()[9].real(), 1.0, 1e-15);
}

TEST(CavitySchmidt, HeadlineOperatingPoint) {
  const auto out = cavity_schmidt(CavityParams(0.5, kPi / 10, -kPi / 10));
  EXPECT_GT(von_neumann_entropy(out.state), 0.75);
  EXPECT_NEAR(out.success_prob, 0.05, 5e-3);
}

TEST(CavitySchmidt, VacuumInput) {
  for (double phi0 : {0.3, -1.2, 2.5}) {
    const auto out = cavity_schmidt(CavityParams(0.0, 0.7, phi0));
    EXPECT_NEAR(std::abs(out.state[0]), 1.0, 1e-15);
    EXPECT_NEAR(out.success_prob, std::pow(std::sin(phi0 / 2), 2), 1e-15);
  }
  EXPECT_THROW(cavity_schmidt(CavityParams(0.0, 0.7, 0.0)), ZeroProbabilityError);
}

TEST(CavitySuccessProb, ZeroPhiReducesToSineSquared) {
  for (double phi0 : {-2.0, -0.5, 0.4, 1.9}) {
    const double expected = oracle::cavity_prob_sum(0.5, 0.0, phi0, 200);
    EXPECT_NEAR(cavity_success_prob_analytic(CavityParams(0.5, 0.0, phi0)), expected, 1e-14);
    EXPECT_NEAR(expected, std::pow(std::sin(phi0 / 2), 2), 1e-14);
  }
}

TEST(CavitySuccessProb, HeadlineAndVacuum) {
  EXPECT_NEAR(cavity_success_prob_analytic(CavityParams(0.5, kPi / 10, -kPi / 10)), 0.05, 5e-3);
  EXPECT_NEAR(cavity_success_prob_analytic(CavityParams(0.0, 1.0, 0.8)),
              std::pow(std::sin(0.4), 2), 1e-15);
}

TEST(CavitySuccessProb, AnalyticMatchesNumericOnGrid) {
  for (double lambda : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const CavityParams p(lambda, grid_angle(i), grid_angle(j));
        const double numeric =
            oracle::cavity_prob_sum(lambda, p.phi(), p.phi0(), default_n_max(lambda));
        EXPECT_NEAR(cavity_success_prob_analytic(p), numeric, 1e-10);
        EXPECT_NEAR(cavity_schmidt(p).success_prob, numeric, 1e-10);
      }
    }
  }
}

TEST(EvolveAtomField, NoPhasesMeansAtomAlwaysExcited) {
  const auto s = evolve_atom_field(CavityParams(0.5, 0.0, 0.0));
  for (const auto& g : s.g_branch) EXPECT_EQ(std::abs(g), 0.0);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(EvolveAtomField, GroundBranchMatchesClosedForm) {
  const CavityParams p(0.5, kPi / 10, 0.7);
  const auto s = evolve_atom_field(p, 40);
  const auto c = tmsv_state(0.5, 40);
  for (int n = 0; n <= 40; ++n) {
    const Amplitude expected = 0.5 * c[n] * (1.0 - std::polar(1.0, p.phi0() - n * p.phi()));
    EXPECT_NEAR(std::abs(s.g_branch[n] - expected), 0.0, 1e-15);
  }
  EXPECT_NEAR(s.g_probability(), cavity_success_prob_analytic(p), 1e-12);
}

// evolve -> project |g>, cavity_filter + apply_filter and the closed form agree
// pairwise after phase canonicalization.
TEST(CavityConsistency, TriangleOnGrid) {
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const CavityParams p(0.5, grid_angle(i), grid_angle(j));
      const int n_max = default_n_max(0.5);
      const auto evolved = evolve_atom_field(p, n_max);
      const auto projected = SchmidtState::normalized(evolved.g_branch);
      const auto filtered = apply_filter(tmsv_state(0.5, n_max), cavity_filter(p, n_max));
      const auto closed = cavity_schmidt(p, n_max);

      const auto a = canonicalize_phase(projected);
      const auto b = canonicalize_phase(filtered.state);
      const auto c = canonicalize_phase(closed.state);
      EXPECT_LE(max_diff(a, b), 1e-12) << "phi=" << p.phi() << " phi0=" << p.phi0();
      EXPECT_LE(max_diff(b, c), 1e-12);
      EXPECT_LE(max_diff(a, c), 1e-12);
      EXPECT_NEAR(evolved.g_probability(), cavity_success_prob_analytic(p), 1e-12);
      EXPECT_NEAR(filtered.success_prob, closed.success_prob, 1e-14);
    }
  }
}

TEST(CavityProperties, Periodicity) {
  for (int j = 0; j < 20; ++j) {
    const double phi0 = grid_angle(j);
    const auto base = cavity_schmidt(CavityParams(0.5, 0.4, phi0));
    const auto shifted = cavity_schmidt(CavityParams(0.5, 0.4, phi0 + 2 * kPi));
    const auto full = cavity_schmidt(CavityParams(0.5, 0.4, phi0 + 4 * kPi));
    EXPECT_NEAR(base.success_prob, shifted.success_prob, 1e-12);
    for (std::size_t n = 0; n < base.state.size(); ++n) {
      EXPECT_NEAR(std::abs(base.state[n]), std::abs(shifted.state[n]), 1e-12);
      EXPECT_NEAR(std::abs(base.state[n] - full.state[n]), 0.0, 1e-12);
    }
  }
}

TEST(CavityProperties, ImprovementExists) {
  bool entropy_up = false, fidelity_up = false;
  for (int k = -200; k <= 200; ++k) {
    const CavityParams p(0.5, kPi / 10, k * kPi / 200);
    try {
      entropy_up |= von_neumann_entropy(cavity_schmidt(p).state) > 0.75;
      fidelity_up |= cavity_teleport_fidelity_analytic(0.5, kPi / 10, p.phi0()) >= 0.83;
    } catch (const ZeroProbabilityError&) {
    }
  }
  EXPECT_TRUE(entropy_up);
  EXPECT_TRUE(fidelity_up);
}

}  // namespace
}  // namespace cvconc
