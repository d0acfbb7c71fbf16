#include <gtest/gtest.h>

#include <random>

#include "geminal/errors.hpp"
#include "geminal/model.hpp"
#include "support.hpp"

using namespace geminal;
using geminal::testing::two_site;

TEST(Model, FiniteDifferenceStencil) {
  ModelDescription d = two_site();
  d.kinetic = KineticForm::finite_difference;
  const LatticeModel m(d);
  EXPECT_DOUBLE_EQ(m.hopping(), 0.5);
  const RMatrix& h = m.one_body();
  ASSERT_EQ(h.rows(), 4);
  // Spin up block: orbitals 1 and 3.
  EXPECT_DOUBLE_EQ(h(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(h(0, 2), -0.5);
  EXPECT_DOUBLE_EQ(h(2, 0), -0.5);
  EXPECT_DOUBLE_EQ(h(2, 2), 1.0);
  // No spin mixing.
  EXPECT_DOUBLE_EQ(h(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(h(0, 3), 0.0);
}

TEST(Model, TightBindingDropsTheDiagonal) {
  const LatticeModel m(two_site());
  EXPECT_DOUBLE_EQ(m.one_body()(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(m.one_body()(0, 2), -0.5);
}

TEST(Model, SitesAreCentred) {
  ModelDescription d = two_site();
  d.n_sites = 5;
  d.spacing = 0.5;
  const LatticeModel m(d);
  EXPECT_DOUBLE_EQ(m.site_positions()[0], -1.0);
  EXPECT_DOUBLE_EQ(m.site_positions()[2], 0.0);
  EXPECT_DOUBLE_EQ(m.site_positions()[4], 1.0);
}

TEST(Model, PerturbationIsSeededUniform) {
  ModelDescription d = geminal::testing::load("default").description();
  const LatticeModel a(d), b(d);
  EXPECT_EQ(a.perturbation(), b.perturbation());
  EXPECT_LE(a.perturbation().cwiseAbs().maxCoeff(), 1.0);
  d.perturbation_seed += 1;
  const LatticeModel c(d);
  EXPECT_NE(a.perturbation(), c.perturbation());
}

TEST(Model, SeededUniformIsReproducible) {
  const RVector x = seeded_uniform(42, 1000);
  EXPECT_EQ(x, seeded_uniform(42, 1000));
  EXPECT_GE(x.minCoeff(), -1.0);
  EXPECT_LT(x.maxCoeff(), 1.0);
  EXPECT_NEAR(x.mean(), 0.0, 0.1);
}

TEST(Model, HubbardInteractionIsOnSite) {
  ModelDescription d = two_site(InteractionKind::hubbard, 1.0);
  d.n_sites = 3;
  const LatticeModel m(d);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_DOUBLE_EQ(m.site_interaction()(i, j), i == j ? 1.0 : 0.0);
}

TEST(Model, SoftCoulombInteraction) {
  ModelDescription d = two_site(InteractionKind::soft_coulomb, 2.0);
  d.softening = 0.5;
  const LatticeModel m(d);
  EXPECT_DOUBLE_EQ(m.site_interaction()(0, 1), 2.0 / std::sqrt(1.0 + 0.25));
  EXPECT_DOUBLE_EQ(m.site_interaction()(1, 1), 2.0 / 0.5);
}

TEST(Model, ValidationErrors) {
  ModelDescription d = two_site();
  d.n_sites = 1;
  EXPECT_THROW(LatticeModel{d}, InputError);
  d = two_site();
  d.spacing = 0.0;
  EXPECT_THROW(LatticeModel{d}, InputError);
  d = two_site(InteractionKind::soft_coulomb, 1.0);
  d.softening = 0.0;
  EXPECT_THROW(LatticeModel{d}, InputError);
  d = two_site();
  d.nuclei.push_back({1.0, 0.0, true, -1.0});
  EXPECT_THROW(LatticeModel{d}, InputError);
}

TEST(GeminalHamiltonian, NonInteractingTwoSiteGround) {
  const LatticeModel m(two_site());
  const auto h = geminal_hamiltonian(m, 2, 0.0, 0.0);
  const RVector e = hermitian_eigen(h.matrix).values;
  EXPECT_NEAR(e[0], -1.0, 1e-12);
  // Every eigenvalue is a sum of two distinct one-body eigenvalues.
  const RVector orb = one_body_orbitals(m, 0.0).values;
  std::vector<double> sums;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) sums.push_back(orb[i] + orb[j]);
  std::sort(sums.begin(), sums.end());
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(e[i], sums[i], 1e-12);
}

TEST(GeminalHamiltonian, TwoSiteHubbardGround) {
  const LatticeModel m(two_site(InteractionKind::hubbard, 1.0));
  const auto h = geminal_hamiltonian(m, 2, 0.0, 1.0);
  const double expected = (1.0 - std::sqrt(1.0 + 16.0 * 0.25)) / 2.0;
  EXPECT_NEAR(hermitian_eigen(h.matrix).values[0], expected, 1e-10);
  EXPECT_NEAR(expected, -0.6180339887, 1e-10);
}

TEST(GeminalHamiltonian, IsHermitianAndLinear) {
  const LatticeModel m = geminal::testing::load("default");
  const auto parts = geminal_hamiltonian_parts(m, 3);
  const CMatrix h = parts.at(0.3, 0.7);
  EXPECT_EQ((h - h.adjoint()).norm(), 0.0);
  const CMatrix mid = parts.at(0.15, 0.35);
  const CMatrix zero = parts.at(0.0, 0.0);
  EXPECT_LE((0.5 * (h + zero) - mid).norm(), 1e-13);
}

TEST(GeminalHamiltonian, OneBodyPartIsDividedByNMinusOne) {
  const LatticeModel m = geminal::testing::load("default");
  const CMatrix h2 = geminal_hamiltonian_parts(m, 2).base;
  const CMatrix h4 = geminal_hamiltonian_parts(m, 4).base;
  EXPECT_LE((h2 / 3.0 - h4).norm(), 1e-13);
  const auto p3 = geminal_hamiltonian_parts(m, 3);
  EXPECT_LE((p3.interaction - geminal_hamiltonian_parts(m, 5).interaction).norm(), 0.0);
}

TEST(GeminalHamiltonian, PromoteDiagonalMatchesDensePromotion) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  RVector a(10);
  for (auto& x : a) x = u(rng);
  const CMatrix dense = promote_one_body(a.cast<cplx>().asDiagonal().toDenseMatrix(), 3);
  const RVector diag = promote_diagonal(a, 3);
  EXPECT_LE((dense.diagonal().real() - diag).norm(), 1e-15);
  EXPECT_LE((CMatrix(dense.diagonal().asDiagonal()) - dense).norm(), 0.0);
}

TEST(GeminalHamiltonian, SimpleSpectrumAtPositiveEpsilon) {
  for (const char* name : {"default", "crossing"}) {
    const LatticeModel m = geminal::testing::load(name);
    const RVector e = hermitian_eigen(geminal_hamiltonian(m, 3, 0.05, 0.0).matrix).values;
    double gap = 1e300;
    for (Eigen::Index i = 1; i < e.size(); ++i) gap = std::min(gap, e[i] - e[i - 1]);
    EXPECT_GT(gap, 1e-6) << name;
  }
}

TEST(HeliumScaling, Examples) {
  auto s = helium_scaling(2.0, 2);
  EXPECT_DOUBLE_EQ(s.scale, 1.0);
  EXPECT_DOUBLE_EQ(s.lambda, 1.0);
  EXPECT_DOUBLE_EQ(s.prefactor, 1.0);

  s = helium_scaling(3.0, 3);
  EXPECT_DOUBLE_EQ(s.scale, 1.5);
  EXPECT_DOUBLE_EQ(s.lambda, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.prefactor, 9.0 / 8.0);

  for (int n = 2; n <= 20; ++n) {
    const double l = helium_scaling(n, n).lambda;
    EXPECT_GT(l, 0.0);
    EXPECT_LT(l, 2.0);
  }
  EXPECT_THROW(helium_scaling(0.0, 2), InputError);
  EXPECT_THROW(helium_scaling(2.0, 1), InputError);
}

TEST(HeliumScaling, IdentityOnRandomOperators) {
  std::mt19937_64 rng(108);
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix t = geminal::testing::random_hermitian(6, rng);
    const CMatrix u = geminal::testing::random_hermitian(6, rng);
    const CMatrix w = geminal::testing::random_hermitian(6, rng);
    EXPECT_LE(verify_scaling_identity(t, u, w, 3.0, 3), 1e-12);
    EXPECT_LE(verify_scaling_identity(t, u, w, 8.0, 6), 1e-12);
    EXPECT_EQ(verify_scaling_identity(t, u, w, 2.0, 2), 0.0);
  }
}
