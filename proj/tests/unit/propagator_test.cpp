#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pairprod/error.hpp"
#include "pairprod/propagator.hpp"
#include "pairprod/scattering.hpp"
#include "support.hpp"

using namespace pairprod;
using pairprod::testing::random_case;
using pairprod::testing::rel_diff;

namespace {

double pseudo_unitarity_defect(const Matrix2C& m) { return max_abs(m.adjoint() * pauli::z * m - pauli::z); }

}  // namespace

TEST(StepOperator, IdentityForVanishingStep) {
  const FieldConfig f(0.2, 10.0);
  for (double h : {1e-3, 1e-5, 1e-7}) {
    const Matrix2C u = step_operator(5.0, 1.0, 1.0 - h, f);
    EXPECT_LT(max_abs(u - Matrix2C::identity()), 20.0 * h);
  }
  EXPECT_EQ(max_abs(step_operator(5.0, 1.0, 1.0, f) - Matrix2C::identity()), 0.0);
}

TEST(StepOperator, FreeMassiveStepAtZeroEnergy) {
  const FieldConfig f(0.0, 1.0);
  const StepCoefficients s = step_coefficients(0.0, 0.05, -0.05, f);
  EXPECT_EQ(s.b, 0.0);
  EXPECT_NEAR(s.cc, 0.1, 1e-16);
  EXPECT_EQ(s.branch, StepCoefficients::Branch::Hyperbolic);
  const Matrix2C expected = Complex{std::cosh(0.1)} * Matrix2C::identity() - Complex{std::sinh(0.1)} * pauli::y;
  EXPECT_LT(max_abs(step_operator(0.0, 0.05, -0.05, f) - expected), 1e-15);
}

TEST(StepOperator, BranchSelection) {
  const FieldConfig f(0.2, 10.0);
  EXPECT_EQ(step_coefficients(5.0, 1.0, 0.9, f).branch, StepCoefficients::Branch::Oscillatory);
  // b vanishes where E = F (L - xbar)
  EXPECT_EQ(step_coefficients(0.2 * 0.05, 10.0, 9.9, f).branch, StepCoefficients::Branch::Hyperbolic);
}

TEST(StepOperator, RejectsWrongDirectionAndOutsidePoints) {
  const FieldConfig f(0.2, 10.0);
  EXPECT_THROW(step_operator(5.0, 0.0, 0.1, f), DomainError);
  EXPECT_THROW(step_operator(5.0, 10.5, 0.1, f), DomainError);
}

TEST(StepOperator, DeterminantAndPseudoUnitarity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FieldConfig f(0.3, 20.0);
  for (int i = 0; i < 2000; ++i) {
    const double x_from = -20.0 + 40.0 * u(rng);
    const double x_to = std::max(-20.0, x_from - 0.5 * u(rng));
    const double e = -5.0 + 20.0 * u(rng);
    const Matrix2C m = step_operator(e, x_from, x_to, f);
    EXPECT_LE(std::abs(m.det() - 1.0), 1e-14);
    EXPECT_LE(pseudo_unitarity_defect(m), 1e-12);
  }
}

TEST(StepOperator, BranchesAgreeNearZeroD) {
  // At |D| = 1e-6 the series and the closed forms must coincide.
  for (double sign : {1.0, -1.0}) {
    const double cc = 0.01;
    const double b = std::sqrt(cc * cc + sign * 1e-12);
    double cosine = 0;
    double sinc = 0;
    detail::evolution_factors(b, cc, cosine, sinc);
    const double d = 1e-6;
    const double cos_ref = sign > 0 ? std::cos(d) : std::cosh(d);
    const double sinc_ref = sign > 0 ? std::sin(d) / d : std::sinh(d) / d;
    EXPECT_NEAR(cosine, cos_ref, 1e-12);
    EXPECT_NEAR(sinc, sinc_ref, 1e-12);
  }
  // Both sides of the series threshold.
  for (double d2 : {0.99e-8, 1.01e-8, -0.99e-8, -1.01e-8}) {
    double c1 = 0;
    double s1 = 0;
    detail::evolution_factors(std::sqrt(1.0 + d2), 1.0, c1, s1);
    EXPECT_NEAR(c1, 1.0 - d2 / 2.0, 1e-15);
    EXPECT_NEAR(s1, 1.0 - d2 / 6.0, 1e-15);
  }
}

TEST(BuildGrid, UniformPartition) {
  const FieldConfig f(0.2, 10.0);
  const PropagationGrid g = build_grid(f, NucleiConfig(), 1.0);
  EXPECT_EQ(g.node_count(), 21u);
  EXPECT_EQ(g.node(0), 10.0);
  EXPECT_EQ(g.node(20), -10.0);
  EXPECT_EQ(g.dx(), 1.0);
  const auto nodes = g.nodes();
  for (std::size_t j = 1; j < nodes.size(); ++j) EXPECT_LT(nodes[j], nodes[j - 1]);
}

TEST(BuildGrid, StepNeverExceedsTarget) {
  const FieldConfig f(0.2, 98.4);
  for (double target : {1e-2, 3e-3, 7.7e-4}) {
    const PropagationGrid g = build_grid(f, NucleiConfig(), target);
    EXPECT_LE(g.dx(), target);
    EXPECT_GT(g.dx(), target * (1.0 - 1.0 / static_cast<double>(g.intervals())) - 1e-15);
  }
}

TEST(BuildGrid, SnapsWellsToNearestNode) {
  const FieldConfig f(0.2, 10.0);
  const PropagationGrid g = build_grid(f, NucleiConfig(0.8, {0.3}), 1.0);
  ASSERT_EQ(g.well_node_indices().size(), 1u);
  const std::size_t j = g.well_node_indices()[0];
  EXPECT_EQ(g.node(j), 0.0);
  EXPECT_LE(std::abs(g.snap_displacements()[0]), 0.5);
  EXPECT_NEAR(g.snap_displacements()[0], -0.3, 1e-15);
  EXPECT_TRUE(g.is_well_node(j));
  EXPECT_FALSE(g.is_well_node(j + 1));
}

TEST(BuildGrid, CollidingWellsRaiseResolutionError) {
  const FieldConfig f(0.2, 10.0);
  EXPECT_THROW(build_grid(f, NucleiConfig(0.8, {0.1, 0.2}), 1.0), ResolutionError);
  EXPECT_NO_THROW(build_grid(f, NucleiConfig(0.8, {0.1, 0.2}), 0.05));
  EXPECT_THROW(build_grid(f, NucleiConfig(0.8, {9.9}), 1.0), ResolutionError);
  EXPECT_THROW(build_grid(f, NucleiConfig(), 0.0), DomainError);
}

TEST(ComposePropagator, MatchesExplicitProductOfFactors) {
  const FieldConfig f(0.3, 5.0);
  const NucleiConfig n(0.8, {-1.0, 1.5});
  const PropagationGrid g = build_grid(f, n, 0.05);
  const double e = 1.7;
  Matrix2C expected = Matrix2C::identity();
  const Matrix2C g_inv = transfer_matrix(0.8).unimodular_inverse();
  for (std::size_t j = 0; j < g.intervals(); ++j) {
    expected = step_operator(e, g.node(j), g.node(j + 1), f) * expected;
    if (g.is_well_node(j + 1)) expected = g_inv * expected;
  }
  for (auto acc : {Accumulation::Extended, Accumulation::Compensated}) {
    const CompositePropagator c = compose_propagator(e, g, f, n, acc);
    EXPECT_LT(max_abs(c.matrix - expected), 1e-12 * std::max(1.0, max_abs(expected)));
    EXPECT_EQ(c.steps, g.intervals());
    EXPECT_EQ(c.wells, 2u);
  }
}

TEST(ComposePropagator, PseudoUnitaryWithoutWells) {
  const FieldConfig f(0.2, 98.4);
  const PropagationGrid g = build_grid(f, NucleiConfig(), 1e-3);
  const CompositePropagator c = compose_propagator(19.68, g, f, NucleiConfig(), Accumulation::Compensated);
  EXPECT_LE(c.sigma_z_defect, 1e-10);
  EXPECT_LE(std::abs(c.determinant - 1.0), 1e-10);
}

TEST(ComposePropagator, UnitDeterminantWithOneWell) {
  const FieldConfig f(0.2, 30.0);
  const NucleiConfig n = nuclei_preset(1, 1.0, 0.8);
  const PropagationGrid g = build_grid(f, n, 1e-3);
  const CompositePropagator exact = compose_propagator(4.0, g, f, n, Accumulation::Compensated);
  EXPECT_LE(std::abs(exact.determinant - 1.0), 1e-12);
  // Extended drift grows with the squared amplification of the tunnelling region.
  const CompositePropagator fast = compose_propagator(4.0, g, f, n, Accumulation::Extended);
  EXPECT_LE(std::abs(fast.determinant - 1.0), 1e-9);
}

TEST(ComposePropagator, ReversibleByInverseFactors) {
  const FieldConfig f(0.4, 8.0);
  const NucleiConfig n = nuclei_preset(3, 2.5, 1.1);
  const PropagationGrid g = build_grid(f, n, 2e-3);
  const double e = 3.3;
  const Matrix2C m = compose_propagator(e, g, f, n).matrix;
  Matrix2C back = m;
  const Matrix2C g_mat = transfer_matrix(1.1);
  for (std::size_t j = g.intervals(); j-- > 0;) {
    if (g.is_well_node(j + 1)) back = g_mat * back;
    back = step_operator(e, g.node(j), g.node(j + 1), f).unimodular_inverse() * back;
  }
  EXPECT_LE(max_abs(back - Matrix2C::identity()), 1e-10);
}

TEST(ComposePropagator, AccumulationModesAgree) {
  const FieldConfig f(0.2, 98.4);
  const NucleiConfig n = nuclei_preset(2, 10.0, 0.8);
  const PropagationGrid g = build_grid(f, n, 2e-3);
  const Matrix2C a = compose_propagator(20.0, g, f, n, Accumulation::Extended).matrix;
  const Matrix2C b = compose_propagator(20.0, g, f, n, Accumulation::Compensated).matrix;
  EXPECT_LE(max_abs(a - b), 1e-9 * max_abs(b));
}

TEST(PropagateSamples, LastSampleEqualsComposite) {
  const FieldConfig f(0.2, 98.4);
  const NucleiConfig n = nuclei_preset(2, 10.0, 0.8);
  const PropagationGrid g = build_grid(f, n, 2e-3);
  const AsymptoticState s = asymptotic_state(20.0, f);
  const Spinor init = initial_condition(s, f);
  for (auto acc : {Accumulation::Extended, Accumulation::Compensated}) {
    const auto samples = propagate_samples(20.0, g, f, n, init, acc);
    ASSERT_EQ(samples.size(), g.node_count());
    EXPECT_EQ(samples.front().x, 98.4);
    EXPECT_EQ(samples.back().x, -98.4);
    const Spinor last = compose_propagator(20.0, g, f, n, acc).matrix * init;
    EXPECT_EQ(samples.back().psi.up, last.up);
    EXPECT_EQ(samples.back().psi.down, last.down);
    const Spinor direct = propagate_to_left_edge(20.0, g, f, n, init, acc);
    EXPECT_LE(rel_diff(direct, last), 1e-9);
  }
}

TEST(PropagateSamples, CurrentConstantAlongGrid) {
  const FieldConfig f(0.2, 98.4);
  const NucleiConfig n = nuclei_preset(3, 6.0, 0.8);
  const PropagationGrid g = build_grid(f, n, 1e-3);
  const AsymptoticState s = asymptotic_state(12.0, f);
  const auto samples = propagate_samples(12.0, g, f, n, initial_condition(s, f), Accumulation::Compensated);
  const double j0 = samples.front().current;
  EXPECT_NEAR(j0, s.k / s.energy, 1e-14);
  double worst = 0.0;
  for (const auto& p : samples) worst = std::max(worst, std::abs(p.current - j0) / std::abs(j0));
  EXPECT_LE(worst, 1e-10);
}

TEST(PropagateSamples, FreePlaneWaveKeepsModuli) {
  const FieldConfig f(0.0, 10.0);
  const PropagationGrid g = build_grid(f, NucleiConfig(), 1e-3);
  const double e = 3.0;
  const double k = std::sqrt(e * e - 1.0);
  const Spinor u{Complex{std::sqrt((e + k) / (2 * e))}, Complex{std::sqrt((e - k) / (2 * e))}};
  const Spinor init = std::exp(Complex{0.0, k * 10.0}) * u;
  const auto samples = propagate_samples(e, g, f, NucleiConfig(), init);
  for (const auto& p : samples) {
    EXPECT_NEAR(std::abs(p.psi.up), std::abs(init.up), 1e-12);
    EXPECT_NEAR(std::abs(p.psi.down), std::abs(init.down), 1e-12);
  }
}

TEST(PropagateSamples, RejectsMismatchedGrid) {
  const FieldConfig f(0.2, 20.0);
  const PropagationGrid g = build_grid(f, NucleiConfig(), 1e-2);
  const NucleiConfig n = nuclei_preset(1, 1.0, 0.8);
  EXPECT_THROW(compose_propagator(5.0, g, f, n), DomainError);
  EXPECT_THROW(compose_propagator(5.0, g, FieldConfig(0.2, 21.0), NucleiConfig()), DomainError);
}

TEST(ComposePropagator, InvariantsOnRandomConfigurations) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 40; ++i) {
    const auto c = random_case(rng);
    const PropagationGrid g = build_grid(c.field, c.nuclei, 5e-3);
    const CompositePropagator p = compose_propagator(c.energy, g, c.field, c.nuclei, Accumulation::Compensated);
    EXPECT_LE(std::abs(p.determinant - 1.0), 1e-12);
    EXPECT_LE(p.sigma_z_defect, 1e-12 * std::max(1.0, max_abs(p.matrix) * max_abs(p.matrix)));
  }
}
