#include <gtest/gtest.h>

#include <set>

#include "geminal/basis.hpp"
#include "geminal/errors.hpp"

using namespace geminal;

TEST(PairIndex, TableValues) {
  EXPECT_EQ(pair_index(1, 2), 1);
  EXPECT_EQ(pair_index(1, 3), 2);
  EXPECT_EQ(pair_index(2, 3), 3);
  EXPECT_EQ(pair_index(1, 4), 4);
  EXPECT_EQ(pair_index(3, 4), 6);
}

TEST(PairIndex, RoundTrip) {
  EXPECT_EQ(pair_from_index(pair_index(2, 4)), (OrbitalPair{2, 4}));
  for (int j = 2; j <= 40; ++j)
    for (int i = 1; i < j; ++i) {
      const int m = pair_index(i, j);
      EXPECT_EQ(pair_from_index(m), (OrbitalPair{i, j}));
    }
}

TEST(PairIndex, IsABijectionOntoOneToG) {
  const int k = 12;
  std::set<int> seen;
  for (int j = 2; j <= k; ++j)
    for (int i = 1; i < j; ++i) seen.insert(pair_index(i, j));
  EXPECT_EQ(static_cast<int>(seen.size()), pair_count(k));
  EXPECT_EQ(*seen.begin(), 1);
  EXPECT_EQ(*seen.rbegin(), 66);
}

TEST(PairIndex, RejectsBadPairs) {
  EXPECT_THROW(pair_index(2, 2), InputError);
  EXPECT_THROW(pair_index(3, 1), InputError);
  EXPECT_THROW(pair_index(0, 1), InputError);
  EXPECT_THROW(pair_from_index(0), InputError);
}

TEST(SpinOrbitals, SiteAndSpinConvention) {
  const SpinOrbitalBasis basis(3, 1.0);
  EXPECT_EQ(basis.n_orbitals(), 6);
  EXPECT_EQ(basis.site(1), 1);
  EXPECT_EQ(basis.site(2), 1);
  EXPECT_EQ(basis.site(5), 3);
  EXPECT_EQ(basis.spin(1), Spin::up);
  EXPECT_EQ(basis.spin(4), Spin::down);
  EXPECT_EQ(basis.orbital(2, Spin::up), 3);
  EXPECT_EQ(basis.orbital(2, Spin::down), 4);
}

TEST(ReducedConfiguration, SignExamples) {
  const Configuration a({1, 2, 3});
  auto r = reduced_configuration(a, {1, 2});
  EXPECT_EQ(r.rest, Configuration({3}));
  EXPECT_EQ(r.sign, 1);

  r = reduced_configuration(a, {1, 3});
  EXPECT_EQ(r.rest, Configuration({2}));
  EXPECT_EQ(r.sign, -1);

  r = reduced_configuration(Configuration({2, 4, 5, 7}), {4, 7});
  EXPECT_EQ(r.rest, Configuration({2, 5}));
  EXPECT_EQ(r.sign, -1);
}

TEST(ReducedConfiguration, MissingPairThrows) {
  EXPECT_THROW(reduced_configuration(Configuration({1, 2, 3}), {1, 4}), PairNotPresentError);
}

// Anticommuting m1 and then m2 to the front of the ordered list gives the
// same sign as the closed formula.
TEST(ReducedConfiguration, SignMatchesExplicitAnticommutation) {
  for (const Configuration& alpha : enumerate_configurations(8, 4)) {
    for (const OrbitalPair& m : alpha.pairs()) {
      std::vector<int> list(alpha.orbitals().begin(), alpha.orbitals().end());
      int sign = 1;
      for (int orbital : {m.first, m.second}) {
        const auto it = std::find(list.begin(), list.end(), orbital);
        if ((it - list.begin()) % 2 == 1) sign = -sign;
        list.erase(it);
      }
      EXPECT_EQ(reduced_configuration(alpha, m).sign, sign);
    }
  }
}

TEST(Enumeration, SmallCases) {
  const auto c32 = enumerate_configurations(3, 2);
  ASSERT_EQ(c32.size(), 3u);
  EXPECT_EQ(c32[0], Configuration({1, 2}));
  EXPECT_EQ(c32[1], Configuration({1, 3}));
  EXPECT_EQ(c32[2], Configuration({2, 3}));

  const auto c44 = enumerate_configurations(4, 4);
  ASSERT_EQ(c44.size(), 1u);
  EXPECT_EQ(c44[0], Configuration({1, 2, 3, 4}));

  EXPECT_EQ(enumerate_configurations(12, 3).size(), 220u);
}

TEST(Enumeration, LexicographicAndUnique) {
  const auto all = enumerate_configurations(10, 4);
  EXPECT_EQ(all.size(), binomial(10, 4));
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1], all[i]);
}

TEST(ConfigurationType, MaskAndPairs) {
  const Configuration c({2, 5, 9});
  EXPECT_EQ(c.mask(), (1u << 1) | (1u << 4) | (1u << 8));
  EXPECT_EQ(Configuration::from_mask(c.mask()), c);
  EXPECT_EQ(c.position(5), 2);
  EXPECT_EQ(c.position(4), 0);
  const auto pairs = c.pairs();
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0], (OrbitalPair{2, 5}));
  EXPECT_EQ(pairs[1], (OrbitalPair{2, 9}));
  EXPECT_EQ(pairs[2], (OrbitalPair{5, 9}));
  EXPECT_THROW(Configuration({3, 2}), InputError);
  EXPECT_THROW(Configuration({0}), InputError);
}

TEST(GeminalBasisType, RowsFollowPairIndex) {
  const GeminalBasis b(6);
  EXPECT_EQ(b.size(), 15);
  for (int r = 0; r < b.size(); ++r) EXPECT_EQ(b.row(b.pair(r)), r);
  EXPECT_EQ(b.row(1, 4), 3);
}
