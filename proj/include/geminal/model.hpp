#pragma once

// Finite 1-D lattice models and the effective two-electron Hamiltonian
//
//   H(eps, lambda) = [h + eps v_p](1) + [h + eps v_p](2)   (divided by N-1)
//                    + lambda v(r1, r2)
//
// expressed over antisymmetrized spin-orbital pairs.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geminal/basis.hpp"
#include "geminal/linalg.hpp"

namespace geminal {

enum class InteractionKind { none, soft_coulomb, hubbard };
enum class KineticForm { finite_difference, tight_binding };

struct Interaction {
  InteractionKind kind = InteractionKind::soft_coulomb;
  double strength = 1.0;
};

struct Nucleus {
  double charge = 1.0;
  double position = 0.0;  // bohr
  bool mobile = false;
  double mass = 1836.15267343;  // electron masses
};

struct ModelDescription {
  int n_sites = 2;
  double spacing = 1.0;    // bohr
  double softening = 1.0;  // bohr
  std::vector<Nucleus> nuclei;
  Interaction interaction;
  std::uint64_t perturbation_seed = 0;
  KineticForm kinetic = KineticForm::finite_difference;
};

class LatticeModel {
 public:
  explicit LatticeModel(ModelDescription description);

  const ModelDescription& description() const { return description_; }
  const SpinOrbitalBasis& basis() const { return basis_; }
  int n_sites() const { return basis_.n_sites(); }
  int n_orbitals() const { return basis_.n_orbitals(); }

  /// Site coordinates in bohr, centred on the origin.
  std::span<const double> site_positions() const { return positions_; }
  double hopping() const;

  /// One-body matrix h over spin-orbitals (K x K, real, spin diagonal).
  const RMatrix& one_body() const { return one_body_; }
  /// Diagonal of the symmetry-breaking potential v_p over spin-orbitals.
  const RVector& perturbation() const { return perturbation_; }
  /// v(site_i, site_j), n_sites x n_sites.
  const RMatrix& site_interaction() const { return site_interaction_; }
  double interaction(int orbital_p, int orbital_q) const;

  /// Electron-nucleus attraction on each spin-orbital from all nuclei.
  RVector attraction() const;
  /// d h_pp / d R_i for nucleus i (only the diagonal depends on R).
  RVector attraction_gradient(int nucleus) const;
  double nuclear_repulsion() const;
  double nuclear_repulsion_gradient(int nucleus) const;

  LatticeModel with_nuclear_positions(std::span<const double> positions) const;

 private:
  ModelDescription description_;
  SpinOrbitalBasis basis_;
  std::vector<double> positions_;
  RMatrix one_body_;
  RVector perturbation_;
  RMatrix site_interaction_;
};

LatticeModel build_model(const ModelDescription& description);

/// Eigenpairs of the one-body operator h + eps v_p (ascending); columns are
/// the orbitals used to label configurations in the continuation solver.
HermitianEigen one_body_orbitals(const LatticeModel& model, double epsilon);

/// Uniform [-1, 1] draws from a 64-bit Mersenne twister; bit-reproducible
/// across standard libraries.
RVector seeded_uniform(std::uint64_t seed, int count);

/// Effective two-electron Hamiltonian over the Slater-pair basis.
struct TwoElectronHamiltonian {
  CMatrix matrix;
  int n_electrons = 2;
  double epsilon = 0.0;
  double lambda = 0.0;
};

/// Promotes a one-body operator a (K x K, Hermitian) to pairs:
/// (a(1) + a(2)) / (N - 1) between normalized antisymmetrized pairs.
CMatrix promote_one_body(const CMatrix& a, int n_electrons);

/// Same as promote_one_body for a diagonal operator, returning only the
/// (diagonal) result.
RVector promote_diagonal(const RVector& a, int n_electrons);

/// Diagonal pair matrix of v(site_a1, site_a2).
CMatrix pair_interaction(const LatticeModel& model);

/// H(eps, lambda) = base + eps * perturbation + lambda * interaction.
struct GeminalHamiltonianParts {
  CMatrix base;
  CMatrix perturbation;
  CMatrix interaction;
  int n_electrons = 2;

  CMatrix at(double epsilon, double lambda) const;
};

GeminalHamiltonianParts geminal_hamiltonian_parts(const LatticeModel& model,
                                                  int n_electrons);
TwoElectronHamiltonian geminal_hamiltonian(const LatticeModel& model,
                                           int n_electrons, double epsilon,
                                           double lambda);

struct HeliumScaling {
  double scale = 1.0;      // a = Z/2
  double lambda = 1.0;     // 2(N-1)/Z
  double prefactor = 1.0;  // (Z/2)^2 / (N-1)
};

HeliumScaling helium_scaling(double charge, int n_electrons);

/// Frobenius norm of H_{Z,N} in the dilated basis minus the scaled helium
/// operator: [a^2 T - Z a U]/(N-1) + a W  vs  (Z/2)^2/(N-1) [T - 2U + lambda W].
/// T, U, W are the kinetic, unit-charge attraction and repulsion matrices in
/// the reference basis; their dilated counterparts are a^2 T, a U, a W.
double verify_scaling_identity(const CMatrix& kinetic, const CMatrix& attraction,
                               const CMatrix& repulsion, double charge,
                               int n_electrons);

}  // namespace geminal
