#include "geminal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "geminal/errors.hpp"

namespace geminal {

namespace {

using kernels::SparseCMatrix;

kernels::ManyBodyTerms empty_terms(int k) {
  return {CMatrix::Zero(k, k), RMatrix::Zero(k, k)};
}

// Orthogonalizes v against the first `count` columns of basis, twice.
void orthogonalize(CVector& v, const CMatrix& basis, Eigen::Index count) {
  if (count == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const CVector coefficients = basis.leftCols(count).adjoint() * v;
    v.noalias() -= basis.leftCols(count) * coefficients;
  }
}

CVector random_unit(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(engine);
  return v.normalized();
}

// Thick-restart Lanczos with full reorthogonalization for the k lowest
// eigenpairs of a Hermitian sparse matrix.
HermitianEigen lanczos_lowest(const SparseCMatrix& h, int k, const FCIOptions& options) {
  const Eigen::Index n = h.rows();
  const Eigen::Index m = std::min<Eigen::Index>(n, std::max(2 * k + 20, 60));
  const Eigen::Index keep = std::min<Eigen::Index>(m - 1, k + (m - k) / 3);

  CMatrix v = CMatrix::Zero(n, m);
  CMatrix w = CMatrix::Zero(n, m);
  Eigen::Index filled = 0;
  CVector next = random_unit(n, 0x5eed);
  std::uint64_t reseed = 1;

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    for (Eigen::Index j = filled; j < m; ++j) {
      orthogonalize(next, v, j);
      double norm = next.norm();
      while (norm < 1e-10) {
        next = random_unit(n, 0x5eed + reseed++);
        orthogonalize(next, v, j);
        norm = next.norm();
      }
      v.col(j) = next / norm;
      w.col(j) = h * v.col(j);
      next = w.col(j);
    }

    CMatrix projected = v.adjoint() * w;
    projected = 0.5 * (projected + projected.adjoint()).eval();
    const HermitianEigen ritz = hermitian_eigen(projected);

    const CMatrix x = v * ritz.vectors.leftCols(keep);
    const CMatrix hx = w * ritz.vectors.leftCols(keep);
    Eigen::Index first_unconverged = -1;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double residual = (hx.col(i) - ritz.values[i] * x.col(i)).norm();
      if (residual > options.residual_tolerance * 0.1 && first_unconverged < 0)
        first_unconverged = i;
    }
    if (first_unconverged < 0 || m == n) {
      return {ritz.values.head(k), x.leftCols(k)};
    }
    next = hx.col(first_unconverged) - ritz.values[first_unconverged] * x.col(first_unconverged);
    v.leftCols(keep) = x;
    w.leftCols(keep) = hx;
    filled = keep;
  }
  throw ResourceError("Lanczos did not converge within the restart limit");
}

// exp(-i h t) v in a Krylov subspace. The step is halved until the
// a-posteriori error estimate falls below tolerance.
CVector krylov_exponential(const SparseCMatrix& h, const CVector& v0, double t,
                           double tolerance = 1e-13, int depth = 0) {
  const Eigen::Index n = h.rows();
  const Eigen::Index m_max = std::min<Eigen::Index>(n, 40);
  const double beta0 = v0.norm();
  if (beta0 == 0.0) return v0;

  CMatrix basis(n, m_max);
  RVector alpha = RVector::Zero(m_max);
  RVector beta = RVector::Zero(m_max);
  basis.col(0) = v0 / beta0;

  for (Eigen::Index j = 0; j < m_max; ++j) {
    CVector r = h * basis.col(j);
    alpha[j] = basis.col(j).dot(r).real();
    orthogonalize(r, basis, j + 1);
    beta[j] = r.norm();

    const Eigen::Index size = j + 1;
    RMatrix tri = RMatrix::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < size) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(tri);
    CVector phases(size);
    for (Eigen::Index i = 0; i < size; ++i)
      phases[i] = std::polar(1.0, -eig.eigenvalues()[i] * t) * eig.eigenvectors()(0, i);
    const CVector coefficients = eig.eigenvectors().cast<cplx>() * phases;

    const bool breakdown = beta[j] < 1e-12 * std::max(1.0, std::abs(alpha[j]));
    const double estimate = beta[j] * std::abs(coefficients[size - 1]);
    if (breakdown || estimate < tolerance || size == n) {
      return beta0 * (basis.leftCols(size) * coefficients);
    }
    if (j + 1 < m_max) basis.col(j + 1) = r / beta[j];
  }
  if (depth > 30) throw ResourceError("Krylov exponential failed to converge");
  const CVector half = krylov_exponential(h, v0, 0.5 * t, tolerance, depth + 1);
  return krylov_exponential(h, half, 0.5 * t, tolerance, depth + 1);
}

}  // namespace

FCIOperatorSet::FCIOperatorSet(const LatticeModel& model, int n_electrons,
                               const FCIOptions& options) {
  const int k = model.n_orbitals();
  if (n_electrons < 1 || n_electrons > k)
    throw InputError("electron count must lie in 1..K");
  if (binomial(k, n_electrons) > options.dimension_limit)
    throw ResourceError("FCI dimension C(" + std::to_string(k) + "," +
                        std::to_string(n_electrons) + ") exceeds the limit of " +
                        std::to_string(options.dimension_limit));
  space_ = std::make_shared<ConfigurationSpace>(k, n_electrons);

  kernels::ManyBodyTerms terms = empty_terms(k);
  terms.one_body = model.one_body().cast<cplx>();
  base_ = kernels::omp::many_body_hamiltonian(*space_, terms);

  terms = empty_terms(k);
  terms.one_body = model.perturbation().cast<cplx>().asDiagonal();
  perturbation_ = kernels::omp::many_body_hamiltonian(*space_, terms);

  terms = empty_terms(k);
  for (int p = 1; p <= k; ++p)
    for (int q = 1; q <= k; ++q)
      if (p != q) terms.pair_diag(p - 1, q - 1) = model.interaction(p, q);
  interaction_ = kernels::omp::many_body_hamiltonian(*space_, terms);
}

SparseCMatrix FCIOperatorSet::at(double epsilon, double lambda) const {
  SparseCMatrix h = base_;
  if (epsilon != 0.0) h += epsilon * perturbation_;
  if (lambda != 0.0) h += lambda * interaction_;
  return h;
}

std::vector<FCIEigenpair> fci_solve(const FCIOperatorSet& ops, double epsilon,
                                    double lambda, int k, const FCIOptions& options) {
  const auto dim = static_cast<Eigen::Index>(ops.dimension());
  if (k < 1 || k > dim) throw InputError("state count must lie in 1..dimension");
  const SparseCMatrix h = ops.at(epsilon, lambda);

  HermitianEigen eig;
  if (ops.dimension() <= options.dense_limit) {
    eig = hermitian_eigen(CMatrix(h));
  } else {
    eig = lanczos_lowest(h, k, options);
  }

  std::vector<FCIEigenpair> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    CVector c = eig.vectors.col(i).normalized();
    const double residual = (h * c - eig.values[i] * c).norm();
    if (residual > options.residual_tolerance)
      throw ResourceError("FCI eigenpair residual " + std::to_string(residual) +
                          " above tolerance");
    out.push_back({eig.values[i], CIVector(ops.space_ptr(), std::move(c)), residual});
  }
  return out;
}

std::vector<FCIEigenpair> fci_solve(const LatticeModel& model, int n_electrons,
                                    double epsilon, double lambda, int k,
                                    const FCIOptions& options) {
  return fci_solve(FCIOperatorSet(model, n_electrons, options), epsilon, lambda, k,
                   options);
}

std::vector<FCISample> fci_propagate(const CIVector& psi0, const FCIOperatorSet& ops,
                                     const Schedule& schedule, int sample_stride) {
  schedule.validate();
  if (sample_stride < 1) throw InputError("sample stride must be >= 1");
  if (psi0.space().size() != ops.dimension() ||
      psi0.n_electrons() != ops.n_electrons())
    throw InputError("initial state does not match the FCI space");

  const long steps = schedule.steps();
  const double dt = schedule.dt;
  std::vector<FCISample> out;
  CVector c = psi0.coefficients();
  out.push_back({0.0, psi0});

  SparseCMatrix h;
  double cached_eps = std::nan(""), cached_lambda = std::nan("");
  for (long s = 0; s < steps; ++s) {
    const double mid = (static_cast<double>(s) + 0.5) * dt;
    const double eps = schedule.eps(mid), lam = schedule.lambda(mid);
    if (eps != cached_eps || lam != cached_lambda) {
      h = ops.at(eps, lam);
      cached_eps = eps;
      cached_lambda = lam;
    }
    c = krylov_exponential(h, c, dt);
    if ((s + 1) % sample_stride == 0 || s + 1 == steps)
      out.push_back({static_cast<double>(s + 1) * dt, CIVector(ops.space_ptr(), c)});
  }
  return out;
}

Observable Observable::parse(const std::string& text) {
  if (text == "energy") return {ObservableKind::energy, 0};
  const std::string prefix = "density:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const int orbital = std::stoi(text.substr(prefix.size()), &used);
      if (used == text.size() - prefix.size()) return {ObservableKind::density, orbital};
    } catch (const std::exception&) {
    }
  }
  throw InputError("unknown observable '" + text + "'");
}

double wavefunction_energy(const CIVector& psi, const SparseCMatrix& h) {
  if (h.rows() != psi.coefficients().size())
    throw InputError("Hamiltonian does not match the CI vector");
  return psi.coefficients().dot(h * psi.coefficients()).real();
}

RVector wavefunction_density(const CIVector& psi) {
  const ConfigurationSpace& space = psi.space();
  RVector rho = RVector::Zero(space.n_orbitals());
  for (std::size_t a = 0; a < space.size(); ++a) {
    const double weight = std::norm(psi.coefficients()[static_cast<Eigen::Index>(a)]);
    for (const int p : space[a].orbitals()) rho[p - 1] += weight;
  }
  return rho;
}

double wavefunction_expectation(const CIVector& psi, const FCIOperatorSet& ops,
                                double epsilon, double lambda, const Observable& o) {
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw InputError("CI vector is not normalized");
  switch (o.kind) {
    case ObservableKind::energy:
      return wavefunction_energy(psi, ops.at(epsilon, lambda));
    case ObservableKind::density:
      if (o.orbital < 1 || o.orbital > psi.n_orbitals())
        throw InputError("density orbital out of range");
      return wavefunction_density(psi)[o.orbital - 1];
  }
  throw InputError("unknown observable");
}

CIVector ci_from_orbitals(std::shared_ptr<const ConfigurationSpace> space,
                          const CMatrix& orbitals, const Configuration& occupied) {
  const int n = space->n_electrons();
  if (orbitals.rows() != space->n_orbitals() || occupied.size() != n ||
      occupied.max_orbital() > orbitals.cols())
    throw InputError("orbital determinant does not fit the configuration space");
  CVector c(static_cast<Eigen::Index>(space->size()));
  CMatrix minor(n, n);
  for (std::size_t a = 0; a < space->size(); ++a) {
    const Configuration& alpha = (*space)[a];
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col)
        minor(r, col) = orbitals(alpha[r] - 1, occupied[col] - 1);
    c[static_cast<Eigen::Index>(a)] = minor.determinant();
  }
  return CIVector(std::move(space), std::move(c));
}

}  // namespace geminal
