#include <gtest/gtest.h>

#include <random>

#include "geminal/kernels.hpp"
#include "geminal/model.hpp"
#include "support.hpp"

using namespace geminal;

TEST(Kernels, GdmContractionAgrees) {
  std::mt19937_64 rng(31);
  for (auto [k, n] : {std::pair{6, 2}, {8, 3}, {10, 4}, {12, 3}}) {
    const auto s = std::make_shared<const ConfigurationSpace>(k, n);
    const CIVector psi = geminal::testing::random_ci(s, rng);
    const CMatrix a = kernels::serial::gdm_contraction(psi);
    const CMatrix b = kernels::omp::gdm_contraction(psi);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-14) << k << "," << n;
  }
}

TEST(Kernels, ManyBodyHamiltonianAgrees) {
  const LatticeModel m = geminal::testing::load("default");
  kernels::ManyBodyTerms terms;
  terms.one_body = (m.one_body() + 0.05 * RMatrix(m.perturbation().asDiagonal())).cast<cplx>();
  terms.pair_diag = RMatrix::Zero(12, 12);
  for (int p = 1; p <= 12; ++p)
    for (int q = 1; q <= 12; ++q)
      if (p != q) terms.pair_diag(p - 1, q - 1) = 0.7 * m.interaction(p, q);
  for (int n : {2, 3, 4}) {
    const ConfigurationSpace s(12, n);
    const CMatrix a = CMatrix(kernels::serial::many_body_hamiltonian(s, terms));
    const CMatrix b = CMatrix(kernels::omp::many_body_hamiltonian(s, terms));
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-14) << n;
    EXPECT_LE((a - a.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Kernels, DensitySeriesAgrees) {
  std::mt19937_64 rng(37);
  kernels::DensityTerms terms;
  for (int x = 0; x < 5; ++x) terms.weights.push_back(geminal::testing::random_hermitian(9, rng));
  std::uniform_real_distribution<double> u(-2, 2);
  terms.frequencies.resize(9);
  for (auto& w : terms.frequencies) w = u(rng);
  std::vector<double> times;
  for (int i = 0; i < 50; ++i) times.push_back(0.37 * i);
  const RMatrix a = kernels::serial::density_series(terms, times);
  const RMatrix b = kernels::omp::density_series(terms, times);
  ASSERT_EQ(a.rows(), 50);
  ASSERT_EQ(a.cols(), 5);
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12);
  // At tau = 0 every phase is one.
  for (int x = 0; x < 5; ++x) EXPECT_NEAR(a(0, x), terms.weights[x].sum().real(), 1e-12);
}

TEST(Kernels, ThreadCountIsPositive) { EXPECT_GE(kernels::available_threads(), 1); }
