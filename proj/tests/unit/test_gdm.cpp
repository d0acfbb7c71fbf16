#include <gtest/gtest.h>

#include <random>

#include "geminal/errors.hpp"
#include "geminal/gdm.hpp"
#include "geminal/model.hpp"
#include "support.hpp"

using namespace geminal;
using geminal::testing::brute_force_pair_matrix;
using geminal::testing::random_ci;

namespace {

using Space = std::shared_ptr<const ConfigurationSpace>;

Space space(int k, int n) { return std::make_shared<const ConfigurationSpace>(k, n); }

GDM diagonal_gdm(int k, int n, std::initializer_list<int> ones) {
  const int g = pair_count(k);
  CMatrix d = CMatrix::Zero(g, g);
  for (int flat : ones) d(flat - 1, flat - 1) = 1.0;
  return GDM(d, n);
}

}  // namespace

TEST(GdmFromCi, SingleDeterminant) {
  const GDM d = gdm_from_ci(CIVector::determinant(space(6, 3), Configuration({1, 2, 3})));
  CMatrix expected = CMatrix::Zero(15, 15);
  expected(0, 0) = expected(1, 1) = expected(2, 2) = 1.0;
  EXPECT_LE((d.matrix() - expected).norm(), 1e-15);
}

// With two electrons both determinants reduce to the vacuum after removing a
// pair, so the coherence between pairs 1 and 6 survives and D stays pure.
TEST(GdmFromCi, DisjointSuperpositionOfPairs) {
  const Space s = space(4, 2);
  CVector c = CVector::Zero(6);
  c[0] = c[5] = 1.0 / std::sqrt(2.0);  // <1,2> and <3,4>
  const CIVector psi(s, c);
  const GDM d = gdm_from_ci(psi);
  EXPECT_NEAR(d.matrix()(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(d.matrix()(5, 5).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(d.matrix()(0, 5)), 0.5, 1e-15);
  EXPECT_NEAR(d.trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(d.trace_squared(), 1.0, 1e-12);
  const CMatrix brute = brute_force_pair_matrix(psi);
  EXPECT_NEAR(d.trace_squared(), (brute * brute).trace().real(), 1e-12);
}

// For M determinants sharing no pair, Tr[D^2] = N(N-1)/(2M).
TEST(GdmFromCi, DisjointSuperpositionPurityFormula) {
  const Space s = space(12, 3);
  for (int m = 1; m <= 4; ++m) {
    CVector c = CVector::Zero(static_cast<Eigen::Index>(s->size()));
    for (int k = 0; k < m; ++k) {
      const Configuration cfg({3 * k + 1, 3 * k + 2, 3 * k + 3});
      c[static_cast<Eigen::Index>(*s->index_of(cfg.mask()))] = 1.0 / std::sqrt(m);
    }
    const GDM d = gdm_from_ci(CIVector(s, c));
    EXPECT_NEAR(d.trace_squared(), 3.0 / m, 1e-12) << m;
  }
}

TEST(GdmFromCi, MatchesSecondQuantizedOracle) {
  std::mt19937_64 rng(11);
  for (auto [k, n] : {std::pair{4, 2}, {6, 3}, {7, 3}, {8, 4}, {8, 2}}) {
    const CIVector psi = random_ci(space(k, n), rng);
    const GDM d = gdm_from_ci(psi);
    EXPECT_LE((d.matrix() - brute_force_pair_matrix(psi)).cwiseAbs().maxCoeff(), 1e-13)
        << "K=" << k << " N=" << n;
  }
}

TEST(GdmFromCi, RejectsUnnormalizedVectors) {
  const Space s = space(4, 2);
  EXPECT_THROW(gdm_from_ci(CIVector(s, CVector::Ones(6))), InputError);
}

TEST(GdmFromCi, PairOccupationsAreTheDiagonal) {
  std::mt19937_64 rng(5);
  const CIVector psi = random_ci(space(8, 3), rng);
  EXPECT_LE((pair_occupations(psi) - gdm_from_ci(psi).matrix().diagonal().real()).norm(),
            1e-14);
}

TEST(GdmInvariants, SlaterDeterminantsAreIdempotent) {
  for (int k = 3; k <= 8; ++k)
    for (int n = 2; n <= std::min(k, 4); ++n) {
      const Space s = space(k, n);
      for (const Configuration& c : s->configurations()) {
        const CMatrix d = gdm_from_ci(CIVector::determinant(s, c)).matrix();
        EXPECT_LE((d * d - d).norm(), 1e-12);
      }
    }
}

TEST(GdmInvariants, RandomStatesTraceAndPositivity) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const GDM d = gdm_from_ci(random_ci(space(8, 4), rng));
    EXPECT_NEAR(d.trace().real(), 6.0, 1e-12);
    EXPECT_LE(hermiticity_residual(d.matrix()), 1e-14);
    const RVector w = hermitian_eigen(d.matrix()).values;
    EXPECT_GE(w.minCoeff(), -1e-12);
    EXPECT_LE(w.maxCoeff(), 1.0 + 1e-12);
    EXPECT_LE(d.trace_squared(), 6.0 + 1e-12);
    EXPECT_NEAR(gdm_density(d).sum(), 4.0, 1e-12);
  }
}

TEST(NRep, DeterminantPassesEveryRule) {
  const GDM d = gdm_from_ci(CIVector::determinant(space(6, 3), Configuration({1, 2, 3})));
  const NRepReport r = check_nrep(d, {1e-10, true});
  EXPECT_TRUE(r.passed);
  for (const char* name :
       {"hermitian", "occupation", "trace", "trace_squared", "exclusion", "generability"}) {
    ASSERT_NE(r.find(name), nullptr) << name;
    EXPECT_TRUE(r.find(name)->passed) << name;
  }
}

TEST(NRep, RandomStatesPassCheapRules) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const NRepReport r = check_nrep(gdm_from_ci(random_ci(space(8, 3), rng)), {1e-10, true});
    EXPECT_TRUE(r.passed);
  }
}

TEST(NRep, CounterexamplePassesCheapRulesOnly) {
  const GDM d = diagonal_gdm(6, 3, {1, 2, 4});
  const NRepReport cheap = check_nrep(d);
  EXPECT_TRUE(cheap.passed);
  EXPECT_EQ(cheap.find("generability"), nullptr);

  const NRepReport full = check_nrep(d, {1e-10, true});
  EXPECT_FALSE(full.passed);
  ASSERT_NE(full.find("generability"), nullptr);
  EXPECT_FALSE(full.find("generability")->passed);
  for (const RuleResult& rule : full.rules)
    if (rule.name != "generability") EXPECT_TRUE(rule.passed) << rule.name;
}

TEST(NRep, ExclusionViolation) {
  GDM base = diagonal_gdm(6, 3, {1, 2, 3});
  CMatrix d = base.matrix();
  d(0, 4) = d(4, 0) = 0.1;
  const NRepReport r = check_nrep(GDM(d, 3));
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.find("exclusion")->passed);
}

TEST(NRep, TraceAndOccupationViolations) {
  const NRepReport r = check_nrep(diagonal_gdm(6, 3, {1, 2}));
  EXPECT_FALSE(r.find("trace")->passed);
  CMatrix d = diagonal_gdm(6, 3, {1, 2, 3}).matrix();
  d(0, 0) = 1.5;
  d(1, 1) = 0.5;
  EXPECT_FALSE(check_nrep(GDM(d, 3)).find("occupation")->passed);
}

TEST(NRep, GeneratingConfiguration) {
  const auto c = generating_configuration(Configuration({1, 2, 4}).pairs(), 3);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, Configuration({1, 2, 4}));
  EXPECT_FALSE(generating_configuration({{1, 2}, {1, 3}, {1, 4}}, 3).has_value());
  EXPECT_FALSE(generating_configuration({{1, 2}, {1, 3}}, 3).has_value());
}

TEST(Expectation, IdentityGivesPairCount) {
  std::mt19937_64 rng(17);
  const GDM d = gdm_from_ci(random_ci(space(8, 4), rng));
  const GeminalOperator id{CMatrix::Identity(28, 28)};
  EXPECT_NEAR(expectation(d, id).real(), 6.0, 1e-12);
}

TEST(Expectation, DensityOperatorsSumToN) {
  std::mt19937_64 rng(19);
  const CIVector psi = random_ci(space(8, 3), rng);
  const GDM d = gdm_from_ci(psi);
  double total = 0.0;
  for (int x = 1; x <= 8; ++x) {
    const GeminalOperator rho = density_operator(8, 3, x);
    const cplx v = expectation(d, rho);
    EXPECT_NEAR(v.imag(), 0.0, 1e-14);
    EXPECT_NEAR(v.real(), gdm_density(d)[x - 1], 1e-14);
    total += v.real();
  }
  EXPECT_NEAR(total, 3.0, 1e-12);
}

TEST(Expectation, BasisMismatchThrows) {
  const GDM d = diagonal_gdm(4, 2, {1});
  const GeminalOperator a{CMatrix::Identity(6, 6), BasisTag::eigenbasis(0.1, 1.0)};
  EXPECT_THROW(expectation(d, a), BasisTagError);
}

TEST(Expectation, CommutatorTraceIdentity) {
  std::mt19937_64 rng(23);
  const GDM d = gdm_from_ci(random_ci(space(6, 3), rng));
  const CMatrix h = geminal::testing::random_hermitian(15, rng);
  const CMatrix a = geminal::testing::random_hermitian(15, rng);
  const CMatrix& dm = d.matrix();
  const cplx lhs = (dm * (h * a - a * h)).trace();
  const cplx rhs = ((dm * h - h * dm) * a).trace();
  EXPECT_LE(std::abs(lhs - rhs), 1e-11);
}

TEST(ChangeBasis, IdentityRoundTripAndInvariance) {
  std::mt19937_64 rng(29);
  const GDM d = gdm_from_ci(random_ci(space(6, 3), rng));
  const GDM same = change_basis(d, CMatrix::Identity(15, 15), BasisTag::slater_pair());
  EXPECT_EQ(same.matrix(), d.matrix());

  const LatticeModel m = geminal::testing::load("default");
  ModelDescription small = m.description();
  small.n_sites = 3;
  const CMatrix h = geminal_hamiltonian(LatticeModel(small), 3, 0.05, 1.0).matrix;
  const CMatrix u = hermitian_eigen(h).vectors.adjoint();
  const GDM rotated = change_basis(d, u, BasisTag::eigenbasis(0.05, 1.0));
  EXPECT_EQ(rotated.basis(), BasisTag::eigenbasis(0.05, 1.0));
  EXPECT_NEAR(rotated.trace_squared(), d.trace_squared(), 1e-10);
  const GDM back = change_basis(rotated, u.adjoint(), BasisTag::slater_pair());
  EXPECT_LE((back.matrix() - d.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BasisTags, EigenbasisNamesRoundTrip) {
  EXPECT_EQ(BasisTag::slater_pair().str(), "slater_pair");
  EXPECT_EQ(BasisTag::eigenbasis(0.05, 1.0), BasisTag::eigenbasis(0.05, 1.0));
  EXPECT_NE(BasisTag::eigenbasis(0.05, 1.0), BasisTag::eigenbasis(0.05, 0.5));
}

TEST(SlaterGdm, CanonicalOrbitalsMatchDeterminant) {
  const CMatrix id = CMatrix::Identity(8, 8);
  for (const Configuration& c : enumerate_configurations(8, 3)) {
    const GDM a = slater_gdm(id, c);
    const GDM b = gdm_from_ci(CIVector::determinant(space(8, 3), c));
    EXPECT_LE((a.matrix() - b.matrix()).norm(), 1e-14);
  }
}

TEST(SlaterGdm, RotatedOrbitalsStayIdempotent) {
  const LatticeModel m = geminal::testing::load("default");
  const CMatrix orbitals = one_body_orbitals(m, 0.05).vectors;
  const GDM d = slater_gdm(orbitals, Configuration({1, 4, 7}));
  EXPECT_NEAR(d.trace().real(), 3.0, 1e-12);
  EXPECT_LE((d.matrix() * d.matrix() - d.matrix()).norm(), 1e-12);
  EXPECT_TRUE(check_nrep(d).passed);
}

TEST(PairDeterminants, AreOrthonormal) {
  const LatticeModel m = geminal::testing::load("default");
  const CMatrix w = pair_determinants(one_body_orbitals(m, 0.05).vectors);
  EXPECT_LE((w.adjoint() * w - CMatrix::Identity(66, 66)).norm(), 1e-12);
}
