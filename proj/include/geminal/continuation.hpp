#pragma once

// Eigenstate solver by continuation in the interaction strength lambda.
//
// The pair Hamiltonian H(eps, lambda) is diagonalized on a lambda grid and its
// eigenvectors are followed by maximal overlap. A determinant at lambda = 0
// occupies the curves of its pairs; with occupations frozen the energy at any
// lambda is the sum of those curves.

#include <cstdint>
#include <optional>
#include <vector>

#include "geminal/gdm.hpp"
#include "geminal/model.hpp"

namespace geminal {

struct ScanOptions {
  /// A tracked overlap below this triggers bisection of the interval.
  double ambiguity_threshold = 0.5;
  int max_refinement_depth = 8;
};

struct Crossing {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  int a = 0;  // tracked curve indices, a < b
  int b = 0;
};

/// Tracked eigencurves. Curve c is the c-th lowest eigenstate at lambda = 0
/// (0-based); only the lowest `curve_count` curves are stored.
struct EigenCurveSet {
  double epsilon = 0.0;
  int n_electrons = 2;
  std::uint64_t seed = 0;
  std::vector<double> lambda_grid;
  RMatrix energies;              // grid points x curves
  std::vector<CMatrix> vectors;  // per grid point, G x curves
  std::vector<std::vector<int>> eigen_index;  // per point: eigenvalue rank of each curve
  std::vector<Crossing> crossings;
  int refinements = 0;
  /// One-body eigenpairs of h + eps v_p; configuration labels refer to them.
  HermitianEigen orbitals;
  /// lambda = 0 label of each curve: the orbital pair (i, j) whose pair
  /// determinant it is.
  std::vector<OrbitalPair> labels;

  int curve_count() const { return static_cast<int>(energies.cols()); }
  /// Curve whose lambda = 0 label is `pair`, if stored.
  std::optional<int> curve_of(OrbitalPair pair) const;
  /// True when curve c takes part in a crossing in the interval ending at
  /// grid point p.
  bool crossing_flag(int point, int curve) const;
};

EigenCurveSet scan_curves(const LatticeModel& model, int n_electrons, double epsilon,
                          const std::vector<double>& lambda_grid, int curve_count,
                          const ScanOptions& options = {});

std::vector<double> uniform_grid(int points);

/// FCI states followed along the same grid and labelled at lambda = 0 by the
/// determinant of one-body orbitals they equal there.
struct FciReference {
  std::vector<double> lambda_grid;
  RMatrix energies;  // grid points x states, states in lambda = 0 order
  std::vector<Configuration> labels;
  double ground_energy = 0.0;  // lowest FCI energy at the last grid point
  int unresolved_intervals = 0;

  std::optional<int> state_of(const Configuration& orbitals) const;
};

FciReference fci_reference(const LatticeModel& model, int n_electrons, double epsilon,
                           const std::vector<double>& lambda_grid,
                           const ScanOptions& options = {});

struct AdiabaticSolution {
  Configuration initial_configuration;  // one-body orbital labels, 1-based
  std::vector<int> occupied_curves;
  std::vector<OrbitalPair> pairs;  // lambda = 0 labels of the occupied curves
  std::vector<std::pair<double, double>> energy_lambda;
  double final_energy = 0.0;
  bool representable = true;
  std::vector<double> populations;  // one per occupied curve

  std::optional<double> fci_energy;  // tracked FCI state at the last grid point
  std::optional<double> deviation;   // final_energy - fci_energy
  std::optional<double> initial_deviation;  // same at lambda = 0
};

/// Throws CoverageError when a pair of alpha0 has no stored curve.
AdiabaticSolution adiabatic_energy(const EigenCurveSet& curves,
                                   const Configuration& alpha0,
                                   const FciReference* reference = nullptr);

/// The N(N-1)/2 lowest curves at the last grid point followed back to
/// lambda = 0; representable only if their labels are the pairs of one
/// configuration.
AdiabaticSolution lowest_block_solution(const EigenCurveSet& curves);

/// Configurations of `orbital_count` orbitals with n electrons in ascending
/// order of summed orbital energy, at most `limit` of them.
std::vector<Configuration> lowest_configurations(const RVector& orbital_energies,
                                                 int n_electrons, std::size_t limit);

struct SearchResult {
  std::vector<AdiabaticSolution> solutions;  // ascending final energy
  int skipped = 0;  // candidates whose pairs left the stored curves
  AdiabaticSolution lowest_block;
  /// Index into solutions of the lowest representable candidate.
  std::optional<std::size_t> ground;
};

SearchResult ground_state_search(const EigenCurveSet& curves, std::size_t candidate_limit,
                                 const FciReference* reference = nullptr);

}  // namespace geminal
