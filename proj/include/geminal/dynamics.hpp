#pragma once

// GDM time evolution.
//
// Each step applies D <- U D U^dagger with U = exp(-i (N-1) H(t + dt/2) dt),
// the (N-1) factor turning the pair Hamiltonian into the generator of the
// two-electron block. Also here: the sudden-switch density statistics, the
// nonadiabatic coupling matrix, evolution inside degenerate subspaces and
// Ehrenfest-style coupled electron/nuclear dynamics.

#include <functional>
#include <span>
#include <vector>

#include "geminal/gdm.hpp"
#include "geminal/model.hpp"
#include "geminal/schedule.hpp"

namespace geminal {

struct GdmSample {
  double t = 0.0;
  double energy = 0.0;  // Tr[D H(t)]
  cplx trace = 0.0;
  double trace_squared = 0.0;
  double hermiticity = 0.0;
  RVector density;  // per spin-orbital
};

struct GdmTrajectory {
  std::vector<GdmSample> samples;
  GDM final_state;
};

/// Stateful stepper; reuses the eigendecomposition while (eps, lambda) stay
/// unchanged between calls.
class GeminalPropagator {
 public:
  explicit GeminalPropagator(GeminalHamiltonianParts parts);

  const GeminalHamiltonianParts& parts() const { return parts_; }
  GDM step(const GDM& d, double epsilon, double lambda, double dt);
  /// Max |U U^dagger - 1| for the most recent step's propagator.
  double last_unitarity_residual(double dt) const;

 private:
  GeminalHamiltonianParts parts_;
  double epsilon_ = 0.0;
  double lambda_ = 0.0;
  bool cached_ = false;
  HermitianEigen eig_;  // of (N-1) H
};

GdmSample sample_gdm(const GDM& d, const CMatrix& h, double t);

GdmTrajectory propagate_gdm(const GDM& d0, const GeminalHamiltonianParts& parts,
                            const Schedule& schedule, int sample_stride = 1);
GdmTrajectory propagate_gdm(const GDM& d0, const LatticeModel& model,
                            const Schedule& schedule, int sample_stride = 1);

// ---------------------------------------------------------------------------
// Sudden switch: lambda jumps 0 -> 1 at T; afterwards H is constant and every
// eigenbasis element of D only picks up a phase.

struct SuddenResult {
  std::vector<double> times;
  RVector energies;   // eigenvalues E' of H(eps, 1)
  GDM interacting;    // D(T) in the eigenbasis of H(eps, 1)
  RMatrix series;     // rows: times, columns: spin-orbitals
  RVector mean;       // closed-form time average
  RVector variance;   // closed-form temporal variance
};

struct SuddenOptions {
  double switch_time = 0.0;
  /// |E'_m - E'_n| below this fraction of the spectral range counts as
  /// degenerate.
  double degeneracy_tolerance = 1e-8;
};

SuddenResult sudden_density(const GDM& d_slater, const GeminalHamiltonianParts& parts,
                            double epsilon, std::span<const double> times,
                            const SuddenOptions& options = {});

// ---------------------------------------------------------------------------
// Nonadiabatic coupling M_ij = <i| d/dt |j> = lambda_dot <i| d/dlambda |j>.

struct NonadiabaticCoupling {
  CMatrix m;                        // skew-Hermitian after antisymmetrization
  double symmetric_residual = 0.0;  // ||(M_raw + M_raw^dagger) / 2||_F
  RVector energies;
  CMatrix eigenvectors;
};

NonadiabaticCoupling nonadiabatic_coupling(const std::function<CMatrix(double)>& h,
                                           double lambda, double dlambda,
                                           double lambda_dot = 1.0);
NonadiabaticCoupling nonadiabatic_coupling(const GeminalHamiltonianParts& parts,
                                           double epsilon, double lambda,
                                           double dlambda, double lambda_dot = 1.0);

using Block = std::vector<int>;  // 0-based eigenbasis indices

/// Groups ascending energies whose neighbours differ by less than
/// relative_tolerance times the spectral range.
std::vector<Block> detect_degenerate_blocks(const RVector& energies,
                                            double relative_tolerance = 1e-8);

/// Evolves each block by D_mu <- exp(-M_mu dt) D_mu exp(M_mu dt) over the
/// consecutive intervals of t_grid, with M_mu evaluated at interval midpoints.
GDM adiabatic_blocks_evolve(
    const GDM& d0, const std::vector<Block>& blocks,
    const std::function<CMatrix(std::size_t block, double t)>& coupling,
    std::span<const double> t_grid);

// ---------------------------------------------------------------------------
// Coupled electrons and classical nuclei.

struct NucleiState {
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> masses;
  std::vector<bool> mobile;
};

NucleiState nuclei_from_model(const LatticeModel& model);

struct NuclearForces {
  std::vector<double> gradient;  // -d/dR (Tr[D H(R)] + V_nn)
  std::vector<double> density;   // -sum_x rho(x) dv/dR - dV_nn/dR
};

NuclearForces nuclear_forces(const GDM& d, const LatticeModel& model);

struct CoupledOptions {
  double epsilon = 0.0;
  double dt = 0.05;
  long steps = 1000;
  int sample_stride = 1;
  /// Holds every nucleus fixed; the electronic part then follows the plain
  /// GDM propagation step for step.
  bool freeze_nuclei = false;
};

struct CoupledSample {
  double t = 0.0;
  double electronic_energy = 0.0;
  double nuclear_kinetic = 0.0;
  double nuclear_repulsion = 0.0;
  double total_energy = 0.0;
  cplx trace = 0.0;
  double trace_squared = 0.0;
  RVector density;
  std::vector<double> positions;
  std::vector<double> velocities;
};

struct CoupledTrajectory {
  std::vector<CoupledSample> samples;
  double max_force_discrepancy = 0.0;  // over every force evaluation
  double max_energy_drift = 0.0;       // max |E(t) - E(0)| over samples
  GDM final_state;
  NucleiState final_nuclei;
};

CoupledTrajectory propagate_coupled(const GDM& d0, const NucleiState& nuclei,
                                    const LatticeModel& model,
                                    const CoupledOptions& options);

// ---------------------------------------------------------------------------
// Diagnostics.

/// ||offdiag(V^dagger D V)||_F.
double off_diagonal_norm(const CMatrix& d, const CMatrix& eigenvectors);

struct LeakageResult {
  double leakage = 0.0;
  double duration = 0.0;
};

/// Ramps lambda 0 -> 1 over `duration` with the given profile at fixed eps
/// and measures how far D(T) is from diagonal in the eigenbasis of H(eps, 1).
LeakageResult measure_leakage(const GDM& d0, const GeminalHamiltonianParts& parts,
                              double epsilon, double duration, RampProfile profile,
                              double dt);

/// Side-by-side GDM and FCI propagation from the determinant of one-body
/// orbitals `occupied` (at eps(0)).
struct FidelityReport {
  std::vector<double> times;
  std::vector<double> density_deviation;  // max_x |rho_gdm - rho_fci|
  std::vector<double> energy_deviation;   // |E_gdm - E_fci|
  double max_density_deviation = 0.0;
  double max_energy_deviation = 0.0;
};

FidelityReport compare_with_fci(const LatticeModel& model, const Configuration& occupied,
                                const Schedule& schedule, int sample_stride = 1);

}  // namespace geminal
