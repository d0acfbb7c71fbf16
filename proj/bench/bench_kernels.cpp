// Serial reference kernels against their OpenMP counterparts on the sizes the
// library actually meets. Run with --benchmark_counters_tabular=true to see
// the problem dimensions next to the timings.

#include <benchmark/benchmark.h>

#include <random>

#include "geminal/io.hpp"
#include "geminal/kernels.hpp"
#include "geminal/model.hpp"

using namespace geminal;

namespace {

CIVector random_state(int k, int n) {
  auto space = std::make_shared<const ConfigurationSpace>(k, n);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  CVector c(static_cast<Eigen::Index>(space->size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = cplx(gauss(rng), gauss(rng));
  c.normalize();
  return CIVector(std::move(space), c);
}

kernels::ManyBodyTerms chain_terms(int sites) {
  ModelDescription d = load_model(std::string(GEMINAL_MODELS_DIR) + "/default.json");
  d.n_sites = sites;
  const LatticeModel m(d);
  const int k = m.n_orbitals();
  kernels::ManyBodyTerms terms;
  terms.one_body = (m.one_body() + 0.05 * RMatrix(m.perturbation().asDiagonal())).cast<cplx>();
  terms.pair_diag = RMatrix::Zero(k, k);
  for (int p = 1; p <= k; ++p)
    for (int q = 1; q <= k; ++q)
      if (p != q) terms.pair_diag(p - 1, q - 1) = m.interaction(p, q);
  return terms;
}

kernels::DensityTerms density_terms(int g, int orbitals) {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> gauss;
  kernels::DensityTerms terms;
  for (int x = 0; x < orbitals; ++x) {
    CMatrix a(g, g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
    terms.weights.push_back((a + a.adjoint()) / 2.0);
  }
  terms.frequencies = RVector::Random(g);
  return terms;
}

template <CMatrix (*Kernel)(const CIVector&)>
void BM_GdmContraction(benchmark::State& state) {
  const CIVector psi = random_state(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(psi));
  state.counters["determinants"] = static_cast<double>(psi.space().size());
}

template <kernels::SparseCMatrix (*Kernel)(const ConfigurationSpace&, const kernels::ManyBodyTerms&)>
void BM_ManyBodyHamiltonian(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  const ConfigurationSpace space(2 * sites, static_cast<int>(state.range(1)));
  const kernels::ManyBodyTerms terms = chain_terms(sites);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(space, terms));
  state.counters["determinants"] = static_cast<double>(space.size());
}

template <RMatrix (*Kernel)(const kernels::DensityTerms&, std::span<const double>)>
void BM_DensitySeries(benchmark::State& state) {
  const kernels::DensityTerms terms = density_terms(66, 12);
  std::vector<double> times(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = 0.5 * static_cast<double>(i);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(terms, times));
  state.counters["samples"] = static_cast<double>(times.size());
}

}  // namespace

BENCHMARK(BM_GdmContraction<kernels::serial::gdm_contraction>)
    ->Name("gdm_contraction/serial")
    ->Args({12, 3})
    ->Args({16, 4})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GdmContraction<kernels::omp::gdm_contraction>)
    ->Name("gdm_contraction/omp")
    ->Args({12, 3})
    ->Args({16, 4})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK(BM_ManyBodyHamiltonian<kernels::serial::many_body_hamiltonian>)
    ->Name("many_body_hamiltonian/serial")
    ->Args({6, 3})
    ->Args({8, 4})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ManyBodyHamiltonian<kernels::omp::many_body_hamiltonian>)
    ->Name("many_body_hamiltonian/omp")
    ->Args({6, 3})
    ->Args({8, 4})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK(BM_DensitySeries<kernels::serial::density_series>)
    ->Name("density_series/serial")
    ->Arg(200)
    ->Arg(2000)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DensitySeries<kernels::omp::density_series>)
    ->Name("density_series/omp")
    ->Arg(200)
    ->Arg(2000)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
