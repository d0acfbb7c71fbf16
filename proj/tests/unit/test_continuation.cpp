#include <gtest/gtest.h>

#include <set>

#include "geminal/continuation.hpp"
#include "geminal/errors.hpp"
#include "geminal/io.hpp"
#include "support.hpp"

using namespace geminal;

namespace {

std::vector<double> slopes(const AdiabaticSolution& s) {
  std::vector<double> out;
  for (std::size_t k = 1; k < s.energy_lambda.size(); ++k)
    out.push_back((s.energy_lambda[k].second - s.energy_lambda[k - 1].second) /
                  (s.energy_lambda[k].first - s.energy_lambda[k - 1].first));
  return out;
}

}  // namespace

TEST(Scan, SinglePointGivesPairSums) {
  const LatticeModel m = geminal::testing::load("default");
  const EigenCurveSet c = scan_curves(m, 3, 0.05, {0.0}, 66);
  ASSERT_EQ(c.energies.rows(), 1);
  for (int curve = 0; curve < 66; ++curve) {
    const OrbitalPair p = c.labels[curve];
    const double expected =
        (c.orbitals.values[p.first - 1] + c.orbitals.values[p.second - 1]) / 2.0;
    EXPECT_NEAR(c.energies(0, curve), expected, 1e-12);
  }
  for (int curve = 1; curve < 66; ++curve) EXPECT_LE(c.energies(0, curve - 1), c.energies(0, curve));
}

TEST(Scan, NoInteractionMeansFlatCurves) {
  ModelDescription d = load_model(geminal::testing::model_path("default"));
  d.interaction.kind = InteractionKind::none;
  const EigenCurveSet c = scan_curves(LatticeModel(d), 3, 0.05, uniform_grid(21), 30);
  EXPECT_TRUE(c.crossings.empty());
  for (int curve = 0; curve < 30; ++curve)
    EXPECT_LE((c.energies.col(curve).array() - c.energies(0, curve)).abs().maxCoeff(), 1e-12);
}

TEST(Scan, EigenpairsPermutationsAndContinuity) {
  const LatticeModel m = geminal::testing::load("default");
  const auto parts = geminal_hamiltonian_parts(m, 3);
  const auto grid = uniform_grid(51);
  const EigenCurveSet c = scan_curves(m, 3, 0.05, grid, 20);
  const double lipschitz = hermitian_eigen(parts.interaction).values.cwiseAbs().maxCoeff();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const CMatrix h = parts.at(0.05, grid[p]);
    for (int curve = 0; curve < 20; ++curve) {
      const CVector v = c.vectors[p].col(curve);
      EXPECT_LE((h * v - c.energies(p, curve) * v).norm(), 1e-9);
    }
    const std::set<int> ranks(c.eigen_index[p].begin(), c.eigen_index[p].end());
    EXPECT_EQ(ranks.size(), 20u);
    if (p > 0)
      for (int curve = 0; curve < 20; ++curve)
        EXPECT_LE(std::abs(c.energies(p, curve) - c.energies(p - 1, curve)),
                  lipschitz * (grid[p] - grid[p - 1]) + 1e-12);
  }
}

TEST(Scan, DoublingTheGridKeepsTheTracking) {
  const LatticeModel m = geminal::testing::load("default");
  const EigenCurveSet coarse = scan_curves(m, 3, 0.05, uniform_grid(51), 20);
  const EigenCurveSet fine = scan_curves(m, 3, 0.05, uniform_grid(101), 20);
  for (std::size_t p = 0; p < coarse.lambda_grid.size(); ++p)
    for (int curve = 0; curve < 20; ++curve)
      EXPECT_NEAR(coarse.energies(p, curve), fine.energies(2 * p, curve), 1e-10);
}

TEST(Scan, InputValidation) {
  const LatticeModel m = geminal::testing::load("default");
  EXPECT_THROW(scan_curves(m, 3, 0.05, {0.0, 0.5, 0.4}, 10), InputError);
  EXPECT_THROW(scan_curves(m, 3, 0.05, {0.0, 1.5}, 10), InputError);
  EXPECT_THROW(scan_curves(m, 3, 0.05, uniform_grid(5), 2), InputError);
  EXPECT_THROW(scan_curves(m, 3, 0.05, uniform_grid(5), 67), InputError);
}

TEST(Scan, UnresolvableGridRaises) {
  const LatticeModel m = geminal::testing::load("default");
  ScanOptions strict;
  strict.ambiguity_threshold = 0.9999;
  strict.max_refinement_depth = 0;
  EXPECT_THROW(scan_curves(m, 3, 0.05, uniform_grid(3), 20, strict), GridResolutionError);
}

TEST(Adiabatic, NonInteractingLimitIsOrbitalSum) {
  const LatticeModel m = geminal::testing::load("default");
  const EigenCurveSet c = scan_curves(m, 3, 0.05, uniform_grid(11), 40);
  for (const Configuration& a : {Configuration({1, 2, 3}), Configuration({1, 2, 5})}) {
    const AdiabaticSolution s = adiabatic_energy(c, a);
    double sum = 0.0;
    for (int i : a.orbitals()) sum += c.orbitals.values[i - 1];
    EXPECT_NEAR(s.energy_lambda.front().second, sum, 1e-12);
    EXPECT_EQ(s.occupied_curves.size(), 3u);
    double pop = 0.0;
    for (double p : s.populations) pop += p;
    EXPECT_NEAR(pop, 3.0, 1e-12);
    EXPECT_TRUE(s.representable);
  }
}

TEST(Adiabatic, MissingCurvesRaiseCoverageError) {
  const LatticeModel m = geminal::testing::load("default");
  const EigenCurveSet c = scan_curves(m, 3, 0.05, uniform_grid(5), 3);
  EXPECT_THROW(adiabatic_energy(c, Configuration({1, 2, 9})), CoverageError);
  EXPECT_THROW(adiabatic_energy(c, Configuration({1, 2})), InputError);
}

// The third and fourth curves cross. Following the curves of <1,2,3> stays
// valid, while the three lowest curves at lambda = 1 are not the pairs of any
// single configuration.
TEST(Adiabatic, CrossingScenario) {
  const LatticeModel m = geminal::testing::load("crossing");
  const EigenCurveSet c = scan_curves(m, 3, 0.5, uniform_grid(101), 12);
  const auto crossing = std::find_if(c.crossings.begin(), c.crossings.end(),
                                     [](const Crossing& x) { return x.a == 2 && x.b == 3; });
  ASSERT_NE(crossing, c.crossings.end());

  const AdiabaticSolution occupied = adiabatic_energy(c, Configuration({1, 2, 3}));
  EXPECT_EQ(occupied.occupied_curves, (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(occupied.representable);

  const AdiabaticSolution lowest = lowest_block_solution(c);
  std::vector<int> curves = lowest.occupied_curves;
  std::sort(curves.begin(), curves.end());
  EXPECT_EQ(curves, (std::vector<int>{0, 1, 3}));
  EXPECT_FALSE(lowest.representable);
  EXPECT_LT(lowest.final_energy, occupied.final_energy);

  // The frozen-occupation energy has no kink at the crossing, unlike the
  // sum of the three lowest eigenvalues.
  const std::vector<double> s = slopes(occupied);
  const int lo = static_cast<int>(std::lround(crossing->lambda_lo * 100));
  double smooth_jump = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (std::abs(static_cast<int>(k) - lo) > 2)
      smooth_jump = std::max(smooth_jump, std::abs(s[k] - s[k - 1]));
  for (int k = lo; k <= lo + 1; ++k)
    EXPECT_LE(std::abs(s[k] - s[k - 1]), 3.0 * smooth_jump);
}

TEST(Search, NonInteractingWinnerIsAufbau) {
  ModelDescription d = load_model(geminal::testing::model_path("default"));
  d.interaction.kind = InteractionKind::none;
  const EigenCurveSet c = scan_curves(LatticeModel(d), 3, 0.05, uniform_grid(11), 66);
  const SearchResult r = ground_state_search(c, 50);
  ASSERT_TRUE(r.ground.has_value());
  const AdiabaticSolution& g = r.solutions[*r.ground];
  EXPECT_EQ(g.initial_configuration, Configuration({1, 2, 3}));
  EXPECT_NEAR(g.final_energy, c.orbitals.values.head(3).sum(), 1e-12);
  EXPECT_EQ(r.skipped, 0);
}

TEST(Search, CandidatesStartWithAufbauAndAreOrdered) {
  const RVector e = one_body_orbitals(geminal::testing::load("default"), 0.05).values;
  const auto list = lowest_configurations(e, 3, 100);
  ASSERT_EQ(list.size(), 100u);
  EXPECT_EQ(list.front(), Configuration({1, 2, 3}));
  auto energy = [&](const Configuration& c) {
    double s = 0.0;
    for (int i : c.orbitals()) s += e[i - 1];
    return s;
  };
  for (std::size_t i = 1; i < list.size(); ++i) EXPECT_LE(energy(list[i - 1]), energy(list[i]) + 1e-15);
  // Same set as a brute-force sort of all configurations.
  auto all = enumerate_configurations(12, 3);
  std::stable_sort(all.begin(), all.end(),
                   [&](const Configuration& a, const Configuration& b) { return energy(a) < energy(b); });
  EXPECT_NEAR(energy(all[99]), energy(list[99]), 1e-15);
  EXPECT_THROW(lowest_configurations(e, 13, 5), InputError);
}

TEST(Search, FciDeviationIsReported) {
  const LatticeModel m = geminal::testing::load("default");
  const auto grid = uniform_grid(51);
  const EigenCurveSet c = scan_curves(m, 3, 0.05, grid, 20);
  const FciReference ref = fci_reference(m, 3, 0.05, grid);
  const SearchResult r = ground_state_search(c, 40, &ref);
  ASSERT_FALSE(r.solutions.empty());
  for (const AdiabaticSolution& s : r.solutions) {
    ASSERT_TRUE(s.deviation.has_value());
    ASSERT_TRUE(s.initial_deviation.has_value());
    EXPECT_LE(std::abs(*s.initial_deviation), 1e-10);
    EXPECT_TRUE(std::isfinite(*s.deviation));
  }
  EXPECT_LE(ref.ground_energy, r.solutions.front().final_energy + 1.0);
}

TEST(Search, EpsilonSequenceIsCauchy) {
  const LatticeModel m = geminal::testing::load("default");
  const double vp = m.perturbation().cwiseAbs().maxCoeff();
  std::vector<double> e;
  const std::vector<double> eps{0.1, 0.01, 0.001};
  for (double x : eps) {
    const EigenCurveSet c = scan_curves(m, 3, x, uniform_grid(101), 20);
    e.push_back(adiabatic_energy(c, Configuration({1, 2, 3})).final_energy);
  }
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    EXPECT_LE(std::abs(e[i] - e[i + 1]), 10.0 * eps[i] * vp);
}
