#include "geminal/model.hpp"

#include <cmath>
#include <random>

#include "geminal/errors.hpp"

namespace geminal {

namespace {

double soft_inverse_distance(double dx, double softening) {
  return 1.0 / std::sqrt(dx * dx + softening * softening);
}

void validate(const ModelDescription& d) {
  if (d.n_sites < 2) throw InputError("n_sites must be >= 2");
  if (!(d.spacing > 0.0)) throw InputError("spacing must be positive");
  const bool needs_softening =
      d.interaction.kind == InteractionKind::soft_coulomb || !d.nuclei.empty();
  if (needs_softening && !(d.softening > 0.0))
    throw InputError("softening must be positive");
  for (const Nucleus& n : d.nuclei) {
    if (!std::isfinite(n.charge) || !std::isfinite(n.position))
      throw InputError("nucleus charge and position must be finite");
    if (!(n.mass > 0.0)) throw InputError("nuclear mass must be positive");
  }
}

}  // namespace

RVector seeded_uniform(std::uint64_t seed, int count) {
  std::mt19937_64 engine(seed);
  RVector out(count);
  for (int i = 0; i < count; ++i) {
    const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    out[i] = 2.0 * unit - 1.0;
  }
  return out;
}

LatticeModel::LatticeModel(ModelDescription description)
    : description_((validate(description), std::move(description))),
      basis_(description_.n_sites, description_.spacing) {
  const int n = description_.n_sites;
  const double d = description_.spacing;
  const double s = description_.softening;

  positions_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    positions_[i] = (static_cast<double>(i) - 0.5 * (n - 1)) * d;

  RMatrix site_h = RMatrix::Zero(n, n);
  const double t = 1.0 / (2.0 * d * d);
  for (int i = 0; i < n; ++i) {
    if (description_.kinetic == KineticForm::finite_difference)
      site_h(i, i) = 2.0 * t;
    if (i + 1 < n) site_h(i, i + 1) = site_h(i + 1, i) = -t;
    for (const Nucleus& nuc : description_.nuclei)
      site_h(i, i) -= nuc.charge *
                      soft_inverse_distance(positions_[i] - nuc.position, s);
  }

  const int k = basis_.n_orbitals();
  one_body_ = RMatrix::Zero(k, k);
  for (int p = 1; p <= k; ++p)
    for (int q = 1; q <= k; ++q)
      if (basis_.spin(p) == basis_.spin(q))
        one_body_(p - 1, q - 1) = site_h(basis_.site(p) - 1, basis_.site(q) - 1);

  perturbation_ = seeded_uniform(description_.perturbation_seed, k);

  site_interaction_ = RMatrix::Zero(n, n);
  const Interaction& ia = description_.interaction;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      switch (ia.kind) {
        case InteractionKind::soft_coulomb:
          site_interaction_(i, j) =
              ia.strength * soft_inverse_distance(positions_[i] - positions_[j], s);
          break;
        case InteractionKind::hubbard:
          site_interaction_(i, j) = i == j ? ia.strength : 0.0;
          break;
        case InteractionKind::none:
          break;
      }
    }
  }
}

double LatticeModel::hopping() const {
  return 1.0 / (2.0 * description_.spacing * description_.spacing);
}

double LatticeModel::interaction(int orbital_p, int orbital_q) const {
  return site_interaction_(basis_.site(orbital_p) - 1,
                           basis_.site(orbital_q) - 1);
}

RVector LatticeModel::attraction() const {
  RVector out = RVector::Zero(n_orbitals());
  for (int p = 1; p <= n_orbitals(); ++p) {
    const double x = positions_[basis_.site(p) - 1];
    for (const Nucleus& nuc : description_.nuclei)
      out[p - 1] -=
          nuc.charge * soft_inverse_distance(x - nuc.position, description_.softening);
  }
  return out;
}

RVector LatticeModel::attraction_gradient(int nucleus) const {
  if (nucleus < 0 || nucleus >= static_cast<int>(description_.nuclei.size()))
    throw InputError("nucleus index out of range");
  const Nucleus& nuc = description_.nuclei[nucleus];
  const double s2 = description_.softening * description_.softening;
  RVector out(n_orbitals());
  for (int p = 1; p <= n_orbitals(); ++p) {
    const double dx = positions_[basis_.site(p) - 1] - nuc.position;
    // d/dR [-Z ((x-R)^2 + s^2)^{-1/2}] = -Z (x-R) ((x-R)^2 + s^2)^{-3/2}
    out[p - 1] = -nuc.charge * dx / std::pow(dx * dx + s2, 1.5);
  }
  return out;
}

double LatticeModel::nuclear_repulsion() const {
  const auto& nuclei = description_.nuclei;
  double e = 0.0;
  for (std::size_t i = 0; i < nuclei.size(); ++i)
    for (std::size_t j = i + 1; j < nuclei.size(); ++j)
      e += nuclei[i].charge * nuclei[j].charge *
           soft_inverse_distance(nuclei[i].position - nuclei[j].position,
                                 description_.softening);
  return e;
}

double LatticeModel::nuclear_repulsion_gradient(int nucleus) const {
  const auto& nuclei = description_.nuclei;
  if (nucleus < 0 || nucleus >= static_cast<int>(nuclei.size()))
    throw InputError("nucleus index out of range");
  const double s2 = description_.softening * description_.softening;
  double g = 0.0;
  for (std::size_t j = 0; j < nuclei.size(); ++j) {
    if (static_cast<int>(j) == nucleus) continue;
    const double dx = nuclei[nucleus].position - nuclei[j].position;
    g -= nuclei[nucleus].charge * nuclei[j].charge * dx / std::pow(dx * dx + s2, 1.5);
  }
  return g;
}

LatticeModel LatticeModel::with_nuclear_positions(
    std::span<const double> positions) const {
  if (positions.size() != description_.nuclei.size())
    throw InputError("nuclear position count mismatch");
  ModelDescription moved = description_;
  for (std::size_t i = 0; i < positions.size(); ++i)
    moved.nuclei[i].position = positions[i];
  return LatticeModel(std::move(moved));
}

LatticeModel build_model(const ModelDescription& description) {
  return LatticeModel(description);
}

HermitianEigen one_body_orbitals(const LatticeModel& model, double epsilon) {
  RMatrix h = model.one_body();
  h.diagonal() += epsilon * model.perturbation();
  return hermitian_eigen(h.cast<cplx>());
}

CMatrix promote_one_body(const CMatrix& a, int n_electrons) {
  if (n_electrons < 2)
    throw InputError("pair promotion needs N >= 2 (1/(N-1) prefactor)");
  if (a.rows() != a.cols()) throw InputError("one-body operator must be square");
  const GeminalBasis basis(static_cast<int>(a.rows()));
  const int g = basis.size();
  const double scale = 1.0 / static_cast<double>(n_electrons - 1);
  CMatrix out = CMatrix::Zero(g, g);
  for (int r = 0; r < g; ++r) {
    const OrbitalPair x = basis.pair(r);
    const int x1 = x.first - 1, x2 = x.second - 1;
    for (int c = 0; c < g; ++c) {
      const OrbitalPair y = basis.pair(c);
      const int y1 = y.first - 1, y2 = y.second - 1;
      cplx v = 0.0;
      if (x2 == y2) v += a(x1, y1);
      if (x2 == y1) v -= a(x1, y2);
      if (x1 == y2) v -= a(x2, y1);
      if (x1 == y1) v += a(x2, y2);
      out(r, c) = v * scale;
    }
  }
  return out;
}

RVector promote_diagonal(const RVector& a, int n_electrons) {
  if (n_electrons < 2)
    throw InputError("pair promotion needs N >= 2 (1/(N-1) prefactor)");
  const GeminalBasis basis(static_cast<int>(a.size()));
  const double scale = 1.0 / static_cast<double>(n_electrons - 1);
  RVector out(basis.size());
  for (int r = 0; r < basis.size(); ++r) {
    const OrbitalPair x = basis.pair(r);
    out[r] = (a[x.first - 1] + a[x.second - 1]) * scale;
  }
  return out;
}

CMatrix pair_interaction(const LatticeModel& model) {
  const GeminalBasis basis(model.n_orbitals());
  CMatrix out = CMatrix::Zero(basis.size(), basis.size());
  for (int r = 0; r < basis.size(); ++r) {
    const OrbitalPair p = basis.pair(r);
    out(r, r) = model.interaction(p.first, p.second);
  }
  return out;
}

CMatrix GeminalHamiltonianParts::at(double epsilon, double lambda) const {
  return base + epsilon * perturbation + lambda * interaction;
}

GeminalHamiltonianParts geminal_hamiltonian_parts(const LatticeModel& model,
                                                  int n_electrons) {
  if (n_electrons < 2)
    throw InputError("the two-electron Hamiltonian needs N >= 2");
  GeminalHamiltonianParts parts;
  parts.n_electrons = n_electrons;
  parts.base = promote_one_body(model.one_body().cast<cplx>(), n_electrons);
  parts.perturbation = promote_one_body(
      model.perturbation().cast<cplx>().asDiagonal().toDenseMatrix(), n_electrons);
  parts.interaction = pair_interaction(model);
  return parts;
}

TwoElectronHamiltonian geminal_hamiltonian(const LatticeModel& model,
                                           int n_electrons, double epsilon,
                                           double lambda) {
  const GeminalHamiltonianParts parts = geminal_hamiltonian_parts(model, n_electrons);
  return {parts.at(epsilon, lambda), n_electrons, epsilon, lambda};
}

HeliumScaling helium_scaling(double charge, int n_electrons) {
  if (!(charge > 0.0)) throw InputError("nuclear charge must be positive");
  if (n_electrons < 2) throw InputError("helium scaling needs N >= 2");
  const double a = charge / 2.0;
  const double n1 = static_cast<double>(n_electrons - 1);
  return {a, 2.0 * n1 / charge, a * a / n1};
}

double verify_scaling_identity(const CMatrix& kinetic, const CMatrix& attraction,
                               const CMatrix& repulsion, double charge,
                               int n_electrons) {
  const Eigen::Index n = kinetic.rows();
  for (const CMatrix* m : {&kinetic, &attraction, &repulsion})
    if (m->rows() != n || m->cols() != n)
      throw InputError("scaling identity needs square matrices of equal size");
  const HeliumScaling s = helium_scaling(charge, n_electrons);
  const double a = s.scale;
  const double n1 = static_cast<double>(n_electrons - 1);

  const CMatrix dilated =
      (a * a * kinetic - charge * a * attraction) / n1 + a * repulsion;
  const CMatrix helium = s.prefactor * ((kinetic - 2.0 * attraction) +
                                        s.lambda * repulsion);
  return (dilated - helium).norm();
}

}  // namespace geminal
