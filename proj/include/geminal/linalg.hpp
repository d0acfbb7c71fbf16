#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace geminal {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Eigenpairs of a Hermitian matrix, ascending eigenvalues.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

/// Dispatches to a real symmetric solver when the imaginary part vanishes
/// exactly; all lattice Hamiltonians here are real. The eigenvectors are
/// re-orthonormalized to near machine precision.
HermitianEigen hermitian_eigen(const CMatrix& h);

bool is_real(const CMatrix& m);

/// exp(-i h t) for Hermitian h, built from the eigendecomposition so the
/// result is unitary to rounding.
CMatrix unitary_exponential(const CMatrix& h, double t);

/// U d U^dagger with U = exp(-i h t), given the eigendecomposition of h.
/// U is never formed; real eigenvectors use real GEMMs only.
CMatrix conjugate_by_exponential(const HermitianEigen& eig, const CMatrix& d,
                                 double t);

double hermiticity_residual(const CMatrix& m);
double unitarity_residual(const CMatrix& u);

/// max |a_ij|
double max_abs(const CMatrix& m);

struct OverlapMatch {
  std::vector<int> assignment;  // reference column i <-> candidate column assignment[i]
  std::vector<double> overlap;  // |<ref_i | cand_assignment[i]>|
  double min_overlap = 1.0;
};

/// Greedy maximal-overlap assignment of candidate columns to reference
/// columns: the largest |<r_i|c_j>| is fixed first, then the next largest
/// among unassigned rows and columns, and so on.
OverlapMatch match_by_overlap(const CMatrix& reference, const CMatrix& candidates);

}  // namespace geminal
