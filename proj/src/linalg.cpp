#include "geminal/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

namespace geminal {

bool is_real(const CMatrix& m) { return m.imag().isZero(0.0); }

namespace {

// One Newton-Schulz step towards the nearest unitary. The solver's vectors
// are orthonormal only to ~1e-14 and the error has a consistent sign, which
// makes V X V^dagger drift in trace over long propagations.
template <typename Matrix>
Matrix polish_unitary(const Matrix& v) {
  const Matrix gram = v.adjoint() * v;
  return v * (1.5 * Matrix::Identity(v.cols(), v.cols()) - 0.5 * gram);
}

}  // namespace

HermitianEigen hermitian_eigen(const CMatrix& h) {
  if (is_real(h)) {
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(h.real());
    return {solver.eigenvalues(), polish_unitary<RMatrix>(solver.eigenvectors()).cast<cplx>()};
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  return {solver.eigenvalues(), polish_unitary<CMatrix>(solver.eigenvectors())};
}

CMatrix unitary_exponential(const CMatrix& h, double t) {
  const HermitianEigen eig = hermitian_eigen(h);
  CVector phases(eig.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases[i] = std::polar(1.0, -eig.values[i] * t);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

CMatrix conjugate_by_exponential(const HermitianEigen& eig, const CMatrix& d,
                                 double t) {
  const Eigen::Index n = eig.values.size();
  // d' = V^dagger d V is rotated into the eigenbasis, phased elementwise by
  // exp(-i (e_m - e_n) t), then rotated back.
  CMatrix rotated;
  if (eig.vectors.imag().isZero(0.0)) {
    const RMatrix v = eig.vectors.real();
    const RMatrix re = v.transpose() * d.real() * v;
    const RMatrix im = v.transpose() * d.imag() * v;
    rotated.resize(n, n);
    rotated.real() = re;
    rotated.imag() = im;
  } else {
    rotated = eig.vectors.adjoint() * d * eig.vectors;
  }
  CVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i)
    phases[i] = std::polar(1.0, -eig.values[i] * t);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      rotated(r, c) *= phases[r] * std::conj(phases[c]);
  if (eig.vectors.imag().isZero(0.0)) {
    const RMatrix v = eig.vectors.real();
    CMatrix out(n, n);
    out.real() = v * rotated.real() * v.transpose();
    out.imag() = v * rotated.imag() * v.transpose();
    return out;
  }
  return eig.vectors * rotated * eig.vectors.adjoint();
}

double hermiticity_residual(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const CMatrix& u) {
  return (u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

OverlapMatch match_by_overlap(const CMatrix& reference, const CMatrix& candidates) {
  const Eigen::Index rows = reference.cols(), cols = candidates.cols();
  const RMatrix overlap = (reference.adjoint() * candidates).cwiseAbs();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rows * cols));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return overlap(a % rows, a / rows) > overlap(b % rows, b / rows);
  });

  OverlapMatch match;
  match.assignment.assign(static_cast<std::size_t>(rows), -1);
  match.overlap.assign(static_cast<std::size_t>(rows), 0.0);
  std::vector<bool> taken(static_cast<std::size_t>(cols), false);
  Eigen::Index assigned = 0;
  for (const Eigen::Index flat : order) {
    if (assigned == std::min(rows, cols)) break;
    const Eigen::Index r = flat % rows, c = flat / rows;
    if (match.assignment[r] >= 0 || taken[c]) continue;
    match.assignment[r] = static_cast<int>(c);
    match.overlap[r] = overlap(r, c);
    taken[c] = true;
    ++assigned;
  }
  match.min_overlap = match.overlap.empty()
                          ? 1.0
                          : *std::min_element(match.overlap.begin(), match.overlap.end());
  return match;
}

}  // namespace geminal
