#pragma once

// Geminal density matrices: construction from CI vectors, necessary
// N-representability checks, expectation values and basis changes.
//
// With Theta_m(gamma) = C_alpha * S_alpha[m] for alpha = gamma + m, the GDM
// over Slater pairs is D = Theta Theta^dagger, and <A> = Tr[D A].

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "geminal/basis.hpp"
#include "geminal/linalg.hpp"

namespace geminal {

/// Names the geminal representation a matrix is expressed in.
class BasisTag {
 public:
  BasisTag() = default;
  explicit BasisTag(std::string value) : value_(std::move(value)) {}

  static BasisTag slater_pair();
  /// Eigenbasis of the two-electron Hamiltonian at (epsilon, lambda).
  static BasisTag eigenbasis(double epsilon, double lambda);

  const std::string& str() const { return value_; }
  bool operator==(const BasisTag&) const = default;

 private:
  std::string value_ = "slater_pair";
};

/// Lexicographically ordered determinant basis with O(1) lookup by bit mask.
class ConfigurationSpace {
 public:
  ConfigurationSpace(int n_orbitals, int n_electrons);

  int n_orbitals() const { return n_orbitals_; }
  int n_electrons() const { return n_electrons_; }
  std::size_t size() const { return configurations_.size(); }
  const Configuration& operator[](std::size_t i) const { return configurations_[i]; }
  const std::vector<Configuration>& configurations() const { return configurations_; }
  const std::vector<std::uint64_t>& masks() const { return masks_; }
  std::optional<std::size_t> index_of(std::uint64_t mask) const;

 private:
  int n_orbitals_;
  int n_electrons_;
  std::vector<Configuration> configurations_;
  std::vector<std::uint64_t> masks_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

class CIVector {
 public:
  CIVector(std::shared_ptr<const ConfigurationSpace> space, CVector coefficients);

  static CIVector determinant(std::shared_ptr<const ConfigurationSpace> space,
                              const Configuration& occupied);

  const ConfigurationSpace& space() const { return *space_; }
  std::shared_ptr<const ConfigurationSpace> space_ptr() const { return space_; }
  const CVector& coefficients() const { return coefficients_; }
  int n_electrons() const { return space_->n_electrons(); }
  int n_orbitals() const { return space_->n_orbitals(); }
  double norm() const { return coefficients_.norm(); }

 private:
  std::shared_ptr<const ConfigurationSpace> space_;
  CVector coefficients_;
};

class GDM {
 public:
  GDM(CMatrix matrix, int n_electrons, BasisTag basis = BasisTag::slater_pair());

  const CMatrix& matrix() const { return matrix_; }
  int n_electrons() const { return n_electrons_; }
  const BasisTag& basis() const { return basis_; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  /// K such that K(K-1)/2 == size(); 0 if size() is not triangular.
  int n_orbitals() const;

  cplx trace() const { return matrix_.trace(); }
  double trace_squared() const;

 private:
  CMatrix matrix_;
  int n_electrons_;
  BasisTag basis_;
};

/// A Hermitian operator expressed in a named geminal basis.
struct GeminalOperator {
  CMatrix matrix;
  BasisTag basis = BasisTag::slater_pair();
};

GDM gdm_from_ci(const CIVector& psi);

/// Diagonal of the GDM as a sum of |C_alpha|^2 over configurations that
/// contain each pair.
RVector pair_occupations(const CIVector& psi);

struct RuleResult {
  std::string name;
  double residual = 0.0;
  bool passed = true;
  std::string detail;
};

struct NRepOptions {
  double tolerance = 1e-10;
  /// Generability check for 0/1 diagonal matrices: the occupied pairs must be
  /// exactly the pairs of one N-orbital configuration.
  bool generability_check = false;
};

/// Per-rule verdicts. A passing report is necessary, never sufficient, for
/// N-representability.
struct NRepReport {
  std::vector<RuleResult> rules;
  bool passed = true;

  const RuleResult* find(const std::string& name) const;
};

NRepReport check_nrep(const GDM& d, const NRepOptions& options = {});

/// Whether a set of pairs is exactly the pair set of a single
/// n_electrons-orbital configuration; returns that configuration.
std::optional<Configuration> generating_configuration(
    const std::vector<OrbitalPair>& pairs, int n_electrons);

cplx expectation(const GDM& d, const GeminalOperator& a);

/// D' = U D U^dagger, tagged with the new basis.
GDM change_basis(const GDM& d, const CMatrix& u, BasisTag new_basis);

/// Pair matrix of the density operator at spin-orbital `orbital` (1-based)
/// in the Slater-pair basis: diagonal 1/(N-1) on pairs containing it.
GeminalOperator density_operator(int n_orbitals, int n_electrons, int orbital);

/// Density per spin-orbital from a GDM in the Slater-pair basis.
RVector gdm_density(const GDM& d);

/// Columns are the antisymmetrized pair functions u_i ^ u_j of the orbital
/// columns of u (K x K), ordered by pair_index(i, j), expressed over Slater
/// pairs: W[(a1,a2), (i,j)] = u_a1,i u_a2,j - u_a2,i u_a1,j.
CMatrix pair_determinants(const CMatrix& orbitals);

/// GDM of the determinant occupying the given orbital columns (1-based).
GDM slater_gdm(const CMatrix& orbitals, const Configuration& occupied);

}  // namespace geminal
