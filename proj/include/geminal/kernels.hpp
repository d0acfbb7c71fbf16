#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP implementation used by
// the library and a serial reference kept for tests and benchmarks; the serial
// versions deliberately take the most literal route.

#include <Eigen/SparseCore>
#include <span>

#include "geminal/gdm.hpp"
#include "geminal/linalg.hpp"

namespace geminal::kernels {

using SparseCMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Inputs of an N-electron Hamiltonian with a position-diagonal interaction:
///   H = sum_pq h_pq a+_p a_q + sum_{p<q} v_pq n_p n_q
struct ManyBodyTerms {
  CMatrix one_body;   // K x K Hermitian
  RMatrix pair_diag;  // K x K symmetric, already scaled by lambda
};

/// Oscillating density terms for the sudden-switch analysis:
///   rho(x, tau) = Re sum_mn P_mn(x) exp(-i (w_m - w_n) tau)
struct DensityTerms {
  std::vector<CMatrix> weights;  // P(x), one G x G matrix per spin-orbital
  RVector frequencies;           // w, one per geminal eigenstate
};

namespace serial {

/// Literal double sum over configuration pairs (alpha, beta) whose reduced
/// configurations agree.
CMatrix gdm_contraction(const CIVector& psi);

/// All configuration pairs, classified by excitation degree.
SparseCMatrix many_body_hamiltonian(const ConfigurationSpace& space,
                                    const ManyBodyTerms& terms);

/// rows: time samples, columns: spin-orbitals.
RMatrix density_series(const DensityTerms& terms, std::span<const double> times);

}  // namespace serial

namespace omp {

/// Theta overlap matrix (G x C(K, N-2)) followed by D = Theta Theta^dagger.
CMatrix gdm_contraction(const CIVector& psi);

/// Row-parallel single-excitation generation from bit masks.
SparseCMatrix many_body_hamiltonian(const ConfigurationSpace& space,
                                    const ManyBodyTerms& terms);

RMatrix density_series(const DensityTerms& terms, std::span<const double> times);

}  // namespace omp

/// Number of OpenMP threads available to the parallel kernels.
int available_threads();

}  // namespace geminal::kernels
