#pragma once

// Full configuration interaction over the same lattice models, used as ground
// truth for every GDM-side quantity.
//
//   H = sum_pq (h + eps v_p)_pq a+_p a_q + lambda sum_{p<q} v(site_p, site_q) n_p n_q

#include <memory>
#include <string>
#include <vector>

#include "geminal/gdm.hpp"
#include "geminal/kernels.hpp"
#include "geminal/model.hpp"
#include "geminal/schedule.hpp"

namespace geminal {

struct FCIOptions {
  std::size_t dimension_limit = 50000;
  /// Dense diagonalization at or below this dimension, Lanczos above.
  std::size_t dense_limit = 2000;
  double residual_tolerance = 1e-9;
  int max_restarts = 500;
};

/// H(eps, lambda) = base + eps * perturbation + lambda * interaction over the
/// determinant basis, assembled once per (model, N).
class FCIOperatorSet {
 public:
  FCIOperatorSet(const LatticeModel& model, int n_electrons,
                 const FCIOptions& options = {});

  const ConfigurationSpace& space() const { return *space_; }
  std::shared_ptr<const ConfigurationSpace> space_ptr() const { return space_; }
  int n_electrons() const { return space_->n_electrons(); }
  std::size_t dimension() const { return space_->size(); }

  kernels::SparseCMatrix at(double epsilon, double lambda) const;
  const kernels::SparseCMatrix& base() const { return base_; }
  const kernels::SparseCMatrix& perturbation() const { return perturbation_; }
  const kernels::SparseCMatrix& interaction() const { return interaction_; }

 private:
  std::shared_ptr<const ConfigurationSpace> space_;
  kernels::SparseCMatrix base_;
  kernels::SparseCMatrix perturbation_;
  kernels::SparseCMatrix interaction_;
};

struct FCIEigenpair {
  double energy = 0.0;
  CIVector state;
  double residual = 0.0;
};

/// k lowest eigenpairs, ascending.
std::vector<FCIEigenpair> fci_solve(const FCIOperatorSet& ops, double epsilon,
                                    double lambda, int k,
                                    const FCIOptions& options = {});
std::vector<FCIEigenpair> fci_solve(const LatticeModel& model, int n_electrons,
                                    double epsilon, double lambda, int k,
                                    const FCIOptions& options = {});

struct FCISample {
  double t = 0.0;
  CIVector state;
};

/// Midpoint-Hamiltonian exponential stepping; exp(-i H dt) v is evaluated in
/// a Krylov subspace with an a-posteriori error check.
std::vector<FCISample> fci_propagate(const CIVector& psi0, const FCIOperatorSet& ops,
                                     const Schedule& schedule, int sample_stride = 1);

enum class ObservableKind { energy, density };

struct Observable {
  ObservableKind kind = ObservableKind::energy;
  int orbital = 0;  // 1-based, density only

  /// "energy" or "density:<orbital>".
  static Observable parse(const std::string& text);
};

double wavefunction_expectation(const CIVector& psi, const FCIOperatorSet& ops,
                                double epsilon, double lambda, const Observable& o);
double wavefunction_energy(const CIVector& psi, const kernels::SparseCMatrix& h);
/// <n_p> for every spin-orbital.
RVector wavefunction_density(const CIVector& psi);

/// Slater determinant of the given columns of `orbitals` (K x K, orthonormal
/// columns, 1-based column labels in `occupied`) as a CI vector.
CIVector ci_from_orbitals(std::shared_ptr<const ConfigurationSpace> space,
                          const CMatrix& orbitals, const Configuration& occupied);

}  // namespace geminal
