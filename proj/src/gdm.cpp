#include "geminal/gdm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "geminal/errors.hpp"
#include "geminal/kernels.hpp"

namespace geminal {

namespace {

std::string format_parameter(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double pair_total(int n_electrons) {
  return 0.5 * n_electrons * (n_electrons - 1);
}

}  // namespace

BasisTag BasisTag::slater_pair() { return BasisTag("slater_pair"); }

BasisTag BasisTag::eigenbasis(double epsilon, double lambda) {
  return BasisTag("eigen(epsilon=" + format_parameter(epsilon) +
                  ",lambda=" + format_parameter(lambda) + ")");
}

ConfigurationSpace::ConfigurationSpace(int n_orbitals, int n_electrons)
    : n_orbitals_(n_orbitals),
      n_electrons_(n_electrons),
      configurations_(enumerate_configurations(n_orbitals, n_electrons)) {
  masks_.reserve(configurations_.size());
  lookup_.reserve(configurations_.size());
  for (std::size_t i = 0; i < configurations_.size(); ++i) {
    masks_.push_back(configurations_[i].mask());
    lookup_.emplace(masks_.back(), i);
  }
}

std::optional<std::size_t> ConfigurationSpace::index_of(std::uint64_t mask) const {
  const auto it = lookup_.find(mask);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

CIVector::CIVector(std::shared_ptr<const ConfigurationSpace> space,
                   CVector coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients)) {
  if (!space_) throw InputError("CI vector needs a configuration space");
  if (static_cast<std::size_t>(coefficients_.size()) != space_->size())
    throw InputError("CI coefficient count does not match the configuration space");
}

CIVector CIVector::determinant(std::shared_ptr<const ConfigurationSpace> space,
                               const Configuration& occupied) {
  if (occupied.size() != space->n_electrons() ||
      occupied.max_orbital() > space->n_orbitals())
    throw InputError("determinant does not fit the configuration space");
  CVector c = CVector::Zero(static_cast<Eigen::Index>(space->size()));
  c[static_cast<Eigen::Index>(*space->index_of(occupied.mask()))] = 1.0;
  return CIVector(std::move(space), std::move(c));
}

GDM::GDM(CMatrix matrix, int n_electrons, BasisTag basis)
    : matrix_(std::move(matrix)), n_electrons_(n_electrons), basis_(std::move(basis)) {
  if (matrix_.rows() != matrix_.cols()) throw InputError("a GDM must be square");
  if (n_electrons < 2) throw InputError("a GDM needs at least two electrons");
}

int GDM::n_orbitals() const {
  for (int k = 2; k * (k - 1) / 2 <= size(); ++k)
    if (k * (k - 1) / 2 == size()) return k;
  return 0;
}

double GDM::trace_squared() const {
  // Tr[D^2] = sum_mn D_mn D_nm = sum_mn |D_mn|^2 for Hermitian D; the general
  // form is kept so the rule also sees non-Hermitian input honestly.
  return (matrix_.cwiseProduct(matrix_.transpose())).sum().real();
}

GDM gdm_from_ci(const CIVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-12)
    throw InputError("CI vector is not normalized (norm " +
                     format_parameter(psi.norm()) + ")");
  if (psi.n_electrons() < 2) throw InputError("a GDM needs at least two electrons");
  return GDM(kernels::omp::gdm_contraction(psi), psi.n_electrons());
}

RVector pair_occupations(const CIVector& psi) {
  const GeminalBasis basis(psi.n_orbitals());
  RVector occ = RVector::Zero(basis.size());
  const ConfigurationSpace& space = psi.space();
  for (std::size_t a = 0; a < space.size(); ++a) {
    const double weight = std::norm(psi.coefficients()[static_cast<Eigen::Index>(a)]);
    for (const OrbitalPair p : space[a].pairs()) occ[basis.row(p)] += weight;
  }
  return occ;
}

const RuleResult* NRepReport::find(const std::string& name) const {
  for (const RuleResult& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

std::optional<Configuration> generating_configuration(
    const std::vector<OrbitalPair>& pairs, int n_electrons) {
  std::set<int> orbitals;
  std::set<OrbitalPair> unique(pairs.begin(), pairs.end());
  for (const OrbitalPair p : unique) {
    orbitals.insert(p.first);
    orbitals.insert(p.second);
  }
  if (static_cast<int>(orbitals.size()) != n_electrons) return std::nullopt;
  const Configuration alpha(std::vector<int>(orbitals.begin(), orbitals.end()));
  const std::vector<OrbitalPair> expected = alpha.pairs();
  if (unique != std::set<OrbitalPair>(expected.begin(), expected.end()))
    return std::nullopt;
  return alpha;
}

NRepReport check_nrep(const GDM& d, const NRepOptions& options) {
  const CMatrix& m = d.matrix();
  const double tol = options.tolerance;
  const double pairs = pair_total(d.n_electrons());
  NRepReport report;

  const double herm = hermiticity_residual(m);
  report.rules.push_back({"hermitian", herm, herm <= tol, "max |D - D^dagger|"});

  double occ_violation = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const cplx v = m(i, i);
    occ_violation = std::max({occ_violation, -v.real(), v.real() - 1.0, std::abs(v.imag())});
  }
  report.rules.push_back({"occupation", std::max(occ_violation, 0.0),
                          occ_violation <= tol, "0 <= D_nn <= 1"});

  const double trace_residual = std::abs(d.trace() - cplx(pairs));
  report.rules.push_back({"trace", trace_residual, trace_residual <= tol,
                          "Tr[D] = N(N-1)/2"});

  const double tr2 = d.trace_squared();
  const double tr2_violation = std::max(-tr2, tr2 - pairs);
  report.rules.push_back({"trace_squared", std::max(tr2_violation, 0.0),
                          tr2_violation <= tol, "0 <= Tr[D^2] <= N(N-1)/2"});

  // A unit diagonal forces its row and column to vanish. With D_nn >= 1 - tol
  // the off-diagonal entries are bounded by sqrt(tol * D_mm) <= sqrt(tol).
  double exclusion = 0.0;
  for (Eigen::Index n = 0; n < m.rows(); ++n) {
    if (std::abs(m(n, n) - cplx(1.0)) > tol) continue;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      if (k == n) continue;
      exclusion = std::max({exclusion, std::abs(m(k, n)), std::abs(m(n, k))});
    }
  }
  report.rules.push_back({"exclusion", exclusion, exclusion <= std::sqrt(tol),
                          "D_nn = 1 => row and column n vanish"});

  if (options.generability_check) {
    RuleResult rule{"generability", 0.0, true, ""};
    const int k = d.n_orbitals();
    bool zero_one_diagonal = d.basis() == BasisTag::slater_pair() && k > 0;
    std::vector<OrbitalPair> occupied;
    if (zero_one_diagonal) {
      const GeminalBasis basis(k);
      for (Eigen::Index r = 0; r < m.rows() && zero_one_diagonal; ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          if (r != c && std::abs(m(r, c)) > tol) zero_one_diagonal = false;
        const double v = m(r, r).real();
        if (std::abs(v - 1.0) <= tol)
          occupied.push_back(basis.pair(static_cast<int>(r)));
        else if (std::abs(v) > tol)
          zero_one_diagonal = false;
      }
    }
    if (!zero_one_diagonal) {
      rule.detail = "not applicable: needs a 0/1 diagonal matrix in the Slater-pair basis";
    } else if (const auto alpha = generating_configuration(occupied, d.n_electrons())) {
      rule.detail = "occupied pairs are generated by one configuration";
    } else {
      rule.passed = false;
      rule.residual = 1.0;
      rule.detail = "occupied pairs are not the pairs of any single " +
                    std::to_string(d.n_electrons()) + "-orbital configuration";
    }
    report.rules.push_back(rule);
  }

  report.passed = std::all_of(report.rules.begin(), report.rules.end(),
                              [](const RuleResult& r) { return r.passed; });
  return report;
}

cplx expectation(const GDM& d, const GeminalOperator& a) {
  if (!(d.basis() == a.basis))
    throw BasisTagError("GDM basis '" + d.basis().str() +
                        "' does not match operator basis '" + a.basis.str() + "'");
  if (a.matrix.rows() != d.size() || a.matrix.cols() != d.size())
    throw BasisTagError("operator dimension does not match the GDM");
  return (d.matrix().cwiseProduct(a.matrix.transpose())).sum();
}

GDM change_basis(const GDM& d, const CMatrix& u, BasisTag new_basis) {
  if (u.rows() != d.size() || u.cols() != d.size())
    throw InputError("basis change matrix has the wrong dimension");
  if (unitarity_residual(u) > 1e-10)
    throw InputError("basis change matrix is not unitary");
  return GDM(u * d.matrix() * u.adjoint(), d.n_electrons(), std::move(new_basis));
}

GeminalOperator density_operator(int n_orbitals, int n_electrons, int orbital) {
  if (orbital < 1 || orbital > n_orbitals)
    throw InputError("density orbital out of range");
  if (n_electrons < 2) throw InputError("pair promotion needs N >= 2");
  const GeminalBasis basis(n_orbitals);
  CMatrix a = CMatrix::Zero(basis.size(), basis.size());
  for (int r = 0; r < basis.size(); ++r) {
    const OrbitalPair p = basis.pair(r);
    if (p.first == orbital || p.second == orbital) a(r, r) = 1.0 / (n_electrons - 1);
  }
  return {a, BasisTag::slater_pair()};
}

RVector gdm_density(const GDM& d) {
  if (!(d.basis() == BasisTag::slater_pair()))
    throw BasisTagError("density needs a GDM in the Slater-pair basis");
  const int k = d.n_orbitals();
  const GeminalBasis basis(k);
  const double scale = 1.0 / static_cast<double>(d.n_electrons() - 1);
  RVector rho = RVector::Zero(k);
  for (int r = 0; r < basis.size(); ++r) {
    const double occ = d.matrix()(r, r).real();
    const OrbitalPair p = basis.pair(r);
    rho[p.first - 1] += occ * scale;
    rho[p.second - 1] += occ * scale;
  }
  return rho;
}

CMatrix pair_determinants(const CMatrix& orbitals) {
  if (orbitals.rows() != orbitals.cols())
    throw InputError("orbital matrix must be square");
  const GeminalBasis basis(static_cast<int>(orbitals.rows()));
  const int g = basis.size();
  CMatrix w(g, g);
  for (int c = 0; c < g; ++c) {
    const OrbitalPair ij = basis.pair(c);
    const int i = ij.first - 1, j = ij.second - 1;
    for (int r = 0; r < g; ++r) {
      const OrbitalPair a = basis.pair(r);
      const int a1 = a.first - 1, a2 = a.second - 1;
      w(r, c) = orbitals(a1, i) * orbitals(a2, j) - orbitals(a2, i) * orbitals(a1, j);
    }
  }
  return w;
}

GDM slater_gdm(const CMatrix& orbitals, const Configuration& occupied) {
  if (occupied.size() < 2 || occupied.max_orbital() > orbitals.cols())
    throw InputError("occupied orbitals do not fit the orbital matrix");
  const GeminalBasis basis(static_cast<int>(orbitals.rows()));
  const CMatrix w = pair_determinants(orbitals);
  CMatrix d = CMatrix::Zero(basis.size(), basis.size());
  for (const OrbitalPair p : occupied.pairs()) {
    const auto col = w.col(basis.row(p));
    d.noalias() += col * col.adjoint();
  }
  return GDM(std::move(d), occupied.size());
}

}  // namespace geminal
