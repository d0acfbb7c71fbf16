#include "geminal/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "geminal/errors.hpp"
#include "geminal/kernels.hpp"
#include "geminal/oracle.hpp"

namespace geminal {

namespace {

void require_slater_basis(const GDM& d) {
  if (!(d.basis() == BasisTag::slater_pair()))
    throw BasisTagError("propagation needs a GDM in the Slater-pair basis, got '" +
                        d.basis().str() + "'");
}

void require_compatible(const GDM& d, const GeminalHamiltonianParts& parts) {
  require_slater_basis(d);
  if (d.size() != parts.base.rows())
    throw BasisTagError("GDM dimension does not match the Hamiltonian");
  if (d.n_electrons() != parts.n_electrons)
    throw InputError("GDM electron count does not match the Hamiltonian");
}

double trace_product(const CMatrix& d, const CMatrix& h) {
  return d.cwiseProduct(h.transpose()).sum().real();
}

}  // namespace

GeminalPropagator::GeminalPropagator(GeminalHamiltonianParts parts)
    : parts_(std::move(parts)) {}

GDM GeminalPropagator::step(const GDM& d, double epsilon, double lambda, double dt) {
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  if (!cached_ || epsilon != epsilon_ || lambda != lambda_) {
    const double scale = static_cast<double>(parts_.n_electrons - 1);
    eig_ = hermitian_eigen(parts_.at(epsilon, lambda));
    eig_.values *= scale;
    epsilon_ = epsilon;
    lambda_ = lambda;
    cached_ = true;
  }
  return GDM(conjugate_by_exponential(eig_, d.matrix(), dt), d.n_electrons(), d.basis());
}

double GeminalPropagator::last_unitarity_residual(double dt) const {
  if (!cached_) return 0.0;
  CVector phases(eig_.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases[i] = std::polar(1.0, -eig_.values[i] * dt);
  const CMatrix u = eig_.vectors * phases.asDiagonal() * eig_.vectors.adjoint();
  return unitarity_residual(u);
}

GdmSample sample_gdm(const GDM& d, const CMatrix& h, double t) {
  GdmSample s;
  s.t = t;
  s.energy = trace_product(d.matrix(), h);
  s.trace = d.trace();
  s.trace_squared = d.trace_squared();
  s.hermiticity = hermiticity_residual(d.matrix());
  s.density = gdm_density(d);
  return s;
}

GdmTrajectory propagate_gdm(const GDM& d0, const GeminalHamiltonianParts& parts,
                            const Schedule& schedule, int sample_stride) {
  schedule.validate();
  require_compatible(d0, parts);
  if (sample_stride < 1) throw InputError("sample stride must be >= 1");

  GeminalPropagator propagator(parts);
  const long steps = schedule.steps();
  const double dt = schedule.dt;
  GdmTrajectory out{{}, d0};
  out.samples.push_back(sample_gdm(d0, parts.at(schedule.eps(0.0), schedule.lambda(0.0)), 0.0));

  for (long s = 0; s < steps; ++s) {
    const double mid = (static_cast<double>(s) + 0.5) * dt;
    out.final_state =
        propagator.step(out.final_state, schedule.eps(mid), schedule.lambda(mid), dt);
    if ((s + 1) % sample_stride == 0 || s + 1 == steps) {
      const double t = static_cast<double>(s + 1) * dt;
      out.samples.push_back(
          sample_gdm(out.final_state, parts.at(schedule.eps(t), schedule.lambda(t)), t));
    }
  }
  return out;
}

GdmTrajectory propagate_gdm(const GDM& d0, const LatticeModel& model,
                            const Schedule& schedule, int sample_stride) {
  return propagate_gdm(d0, geminal_hamiltonian_parts(model, d0.n_electrons()), schedule,
                       sample_stride);
}

SuddenResult sudden_density(const GDM& d_slater, const GeminalHamiltonianParts& parts,
                            double epsilon, std::span<const double> times,
                            const SuddenOptions& options) {
  require_compatible(d_slater, parts);
  const int n = parts.n_electrons;
  const int k = d_slater.n_orbitals();
  const HermitianEigen eig = hermitian_eigen(parts.at(epsilon, 1.0));
  const Eigen::Index g = eig.values.size();

  // Coefficients in the interacting eigenbasis: D~ = V^dagger D V.
  GDM interacting = change_basis(d_slater, eig.vectors.adjoint(),
                                 BasisTag::eigenbasis(epsilon, 1.0));

  kernels::DensityTerms terms;
  terms.frequencies = eig.values * static_cast<double>(n - 1);
  terms.weights.reserve(static_cast<std::size_t>(k));
  for (int x = 1; x <= k; ++x) {
    const CMatrix a = eig.vectors.adjoint() * density_operator(k, n, x).matrix * eig.vectors;
    // P_mn(x) = D~_mn A~_nm
    terms.weights.push_back(interacting.matrix().cwiseProduct(a.transpose()));
  }

  const double range = std::max(eig.values.maxCoeff() - eig.values.minCoeff(),
                                std::numeric_limits<double>::min());
  const double threshold = options.degeneracy_tolerance * range;

  RVector mean = RVector::Zero(k), variance = RVector::Zero(k);
  for (int x = 0; x < k; ++x) {
    const CMatrix& p = terms.weights[static_cast<std::size_t>(x)];
    for (Eigen::Index m = 0; m < g; ++m) {
      for (Eigen::Index q = 0; q < g; ++q) {
        if (std::abs(eig.values[m] - eig.values[q]) <= threshold)
          mean[x] += p(m, q).real();
        else
          variance[x] += std::norm(p(m, q));
      }
    }
  }

  std::vector<double> shifted(times.begin(), times.end());
  for (double& t : shifted) t -= options.switch_time;
  RMatrix series = kernels::omp::density_series(terms, shifted);

  return {std::vector<double>(times.begin(), times.end()), eig.values,
          std::move(interacting), std::move(series), std::move(mean),
          std::move(variance)};
}

NonadiabaticCoupling nonadiabatic_coupling(const std::function<CMatrix(double)>& h,
                                           double lambda, double dlambda,
                                           double lambda_dot) {
  if (!(dlambda > 0.0)) throw InputError("dlambda must be positive");
  const HermitianEigen center = hermitian_eigen(h(lambda));
  const Eigen::Index g = center.values.size();
  const double range = center.values.maxCoeff() - center.values.minCoeff();
  for (Eigen::Index i = 0; i + 1 < g; ++i) {
    if (center.values[i + 1] - center.values[i] < 1e-8 * range)
      throw DegeneracyError("degenerate spectrum at lambda = " + std::to_string(lambda) +
                            "; increase epsilon");
  }

  auto aligned = [&](double at) {
    const HermitianEigen other = hermitian_eigen(h(at));
    const OverlapMatch match = match_by_overlap(center.vectors, other.vectors);
    if (match.min_overlap < std::sqrt(0.5))
      throw GridResolutionError("eigenbases at lambda and lambda +/- dlambda do not "
                                "overlap; reduce dlambda");
    CMatrix out(g, g);
    for (Eigen::Index i = 0; i < g; ++i) {
      const CVector col = other.vectors.col(match.assignment[i]);
      const cplx overlap = center.vectors.col(i).dot(col);
      out.col(i) = col * (std::conj(overlap) / std::abs(overlap));
    }
    return out;
  };

  const CMatrix plus = aligned(lambda + dlambda);
  const CMatrix minus = aligned(lambda - dlambda);
  const CMatrix raw =
      center.vectors.adjoint() * (plus - minus) * (lambda_dot / (2.0 * dlambda));
  NonadiabaticCoupling out;
  out.symmetric_residual = (0.5 * (raw + raw.adjoint())).norm();
  out.m = 0.5 * (raw - raw.adjoint());
  out.energies = center.values;
  out.eigenvectors = center.vectors;
  return out;
}

NonadiabaticCoupling nonadiabatic_coupling(const GeminalHamiltonianParts& parts,
                                           double epsilon, double lambda,
                                           double dlambda, double lambda_dot) {
  return nonadiabatic_coupling(
      [&](double l) { return parts.at(epsilon, l); }, lambda, dlambda, lambda_dot);
}

std::vector<Block> detect_degenerate_blocks(const RVector& energies,
                                            double relative_tolerance) {
  std::vector<Block> blocks;
  if (energies.size() == 0) return blocks;
  for (Eigen::Index i = 1; i < energies.size(); ++i)
    if (energies[i] < energies[i - 1])
      throw InputError("energies must be sorted ascending");
  const double range = energies.maxCoeff() - energies.minCoeff();
  blocks.push_back({0});
  for (Eigen::Index i = 1; i < energies.size(); ++i) {
    if (energies[i] - energies[i - 1] <= relative_tolerance * range)
      blocks.back().push_back(static_cast<int>(i));
    else
      blocks.push_back({static_cast<int>(i)});
  }
  return blocks;
}

GDM adiabatic_blocks_evolve(
    const GDM& d0, const std::vector<Block>& blocks,
    const std::function<CMatrix(std::size_t block, double t)>& coupling,
    std::span<const double> t_grid) {
  const int g = d0.size();
  // Indices outside every declared block form singleton blocks.
  std::vector<int> owner(static_cast<std::size_t>(g), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (const int i : blocks[b]) {
      if (i < 0 || i >= g) throw InputError("block index out of range");
      if (owner[i] >= 0) throw InputError("blocks overlap");
      owner[i] = static_cast<int>(b);
    }
  }
  int next = static_cast<int>(blocks.size());
  for (int& o : owner)
    if (o < 0) o = next++;

  const CMatrix& m0 = d0.matrix();
  for (int r = 0; r < g; ++r)
    for (int c = 0; c < g; ++c)
      if (owner[r] != owner[c] && m0(r, c) != cplx(0.0))
        throw StructureError("GDM is not block diagonal across the declared subspaces");

  CMatrix d = m0;
  for (std::size_t s = 0; s + 1 < t_grid.size(); ++s) {
    const double dt = t_grid[s + 1] - t_grid[s];
    if (!(dt > 0.0)) throw InputError("time grid must be strictly increasing");
    const double mid = 0.5 * (t_grid[s] + t_grid[s + 1]);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Block& block = blocks[b];
      const auto size = static_cast<Eigen::Index>(block.size());
      const CMatrix m = coupling(b, mid);
      if (m.rows() != size || m.cols() != size)
        throw InputError("coupling matrix does not match its block");
      if ((m + m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm()))
        throw InputError("coupling matrix must be skew-Hermitian");
      // exp(-M dt) = exp(-i K dt) with K = -i M Hermitian.
      const CMatrix u = unitary_exponential(cplx(0.0, -1.0) * m, dt);
      CMatrix sub(size, size);
      for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = 0; j < size; ++j) sub(i, j) = d(block[i], block[j]);
      sub = (u * sub * u.adjoint()).eval();
      for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = 0; j < size; ++j) d(block[i], block[j]) = sub(i, j);
    }
  }
  return GDM(std::move(d), d0.n_electrons(), d0.basis());
}

NucleiState nuclei_from_model(const LatticeModel& model) {
  NucleiState state;
  for (const Nucleus& n : model.description().nuclei) {
    state.positions.push_back(n.position);
    state.velocities.push_back(0.0);
    state.masses.push_back(n.mass);
    state.mobile.push_back(n.mobile);
  }
  return state;
}

NuclearForces nuclear_forces(const GDM& d, const LatticeModel& model) {
  require_slater_basis(d);
  const std::size_t count = model.description().nuclei.size();
  const RVector rho = gdm_density(d);
  NuclearForces f;
  for (std::size_t i = 0; i < count; ++i) {
    const RVector grad = model.attraction_gradient(static_cast<int>(i));
    const double repulsion = model.nuclear_repulsion_gradient(static_cast<int>(i));
    const RVector dh = promote_diagonal(grad, d.n_electrons());
    f.gradient.push_back(-d.matrix().diagonal().real().dot(dh) - repulsion);
    f.density.push_back(-rho.dot(grad) - repulsion);
  }
  return f;
}

CoupledTrajectory propagate_coupled(const GDM& d0, const NucleiState& nuclei,
                                    const LatticeModel& model,
                                    const CoupledOptions& options) {
  require_slater_basis(d0);
  const std::size_t count = model.description().nuclei.size();
  if (nuclei.positions.size() != count || nuclei.velocities.size() != count ||
      nuclei.masses.size() != count || nuclei.mobile.size() != count)
    throw InputError("nuclear state does not match the model's nuclei");
  for (const double m : nuclei.masses)
    if (!(m > 0.0)) throw InputError("nuclear masses must be positive");
  if (model.description().interaction.kind != InteractionKind::soft_coulomb)
    throw InputError("coupled dynamics needs a soft-Coulomb interaction");
  const bool any_mobile =
      std::any_of(nuclei.mobile.begin(), nuclei.mobile.end(), [](bool b) { return b; });
  if (!options.freeze_nuclei && !any_mobile)
    throw InputError("coupled dynamics needs at least one mobile nucleus");
  if (!(options.dt > 0.0)) throw InputError("dt must be positive");
  if (options.steps < 0 || options.sample_stride < 1)
    throw InputError("steps must be >= 0 and the sample stride >= 1");

  const int n = d0.n_electrons();
  const double eps = options.epsilon;
  const double dt = options.dt;
  std::vector<bool> moves(count);
  for (std::size_t i = 0; i < count; ++i)
    moves[i] = nuclei.mobile[i] && !options.freeze_nuclei;

  NucleiState state = nuclei;
  for (std::size_t i = 0; i < count; ++i)
    if (!moves[i]) state.velocities[i] = 0.0;

  LatticeModel current = model.with_nuclear_positions(state.positions);
  GeminalHamiltonianParts parts = geminal_hamiltonian_parts(current, n);
  if (d0.size() != parts.base.rows())
    throw BasisTagError("GDM dimension does not match the model");

  // Moving the nuclei only changes the attraction on the diagonal of h, so the
  // pair Hamiltonian is updated in place instead of being rebuilt.
  const GeminalHamiltonianParts reference = parts;
  const RVector reference_attraction = current.attraction();
  auto parts_at = [&](const LatticeModel& m) {
    GeminalHamiltonianParts p = reference;
    p.base.diagonal().real() += promote_diagonal(m.attraction() - reference_attraction, n);
    return p;
  };

  CoupledTrajectory out{{}, 0.0, 0.0, d0, state};
  GeminalPropagator frozen(parts);

  auto record = [&](double t, const GDM& d) {
    CoupledSample s;
    s.t = t;
    s.electronic_energy = trace_product(d.matrix(), parts.at(eps, 1.0));
    for (std::size_t i = 0; i < count; ++i)
      s.nuclear_kinetic += 0.5 * state.masses[i] * state.velocities[i] * state.velocities[i];
    s.nuclear_repulsion = current.nuclear_repulsion();
    s.total_energy = s.electronic_energy + s.nuclear_kinetic + s.nuclear_repulsion;
    s.trace = d.trace();
    s.trace_squared = d.trace_squared();
    s.density = gdm_density(d);
    s.positions = state.positions;
    s.velocities = state.velocities;
    out.samples.push_back(std::move(s));
    out.max_energy_drift = std::max(
        out.max_energy_drift,
        std::abs(out.samples.back().total_energy - out.samples.front().total_energy));
  };

  auto forces = [&](const GDM& d) {
    const NuclearForces f = nuclear_forces(d, current);
    for (std::size_t i = 0; i < count; ++i)
      out.max_force_discrepancy =
          std::max(out.max_force_discrepancy, std::abs(f.gradient[i] - f.density[i]));
    return f.gradient;
  };

  GDM& d = out.final_state;
  record(0.0, d);
  std::vector<double> force = forces(d);

  for (long s = 0; s < options.steps; ++s) {
    if (options.freeze_nuclei || !any_mobile) {
      d = frozen.step(d, eps, 1.0, dt);
    } else {
      std::vector<double> start = state.positions;
      for (std::size_t i = 0; i < count; ++i) {
        if (!moves[i]) continue;
        state.velocities[i] += 0.5 * dt * force[i] / state.masses[i];
        state.positions[i] += dt * state.velocities[i];
      }
      std::vector<double> midpoint(count);
      for (std::size_t i = 0; i < count; ++i)
        midpoint[i] = 0.5 * (start[i] + state.positions[i]);
      GeminalPropagator step(parts_at(model.with_nuclear_positions(midpoint)));
      d = step.step(d, eps, 1.0, dt);

      current = model.with_nuclear_positions(state.positions);
      parts = parts_at(current);
    }
    force = forces(d);
    for (std::size_t i = 0; i < count; ++i)
      if (moves[i]) state.velocities[i] += 0.5 * dt * force[i] / state.masses[i];

    if ((s + 1) % options.sample_stride == 0 || s + 1 == options.steps)
      record(static_cast<double>(s + 1) * dt, d);
  }
  out.final_nuclei = state;
  return out;
}

double off_diagonal_norm(const CMatrix& d, const CMatrix& eigenvectors) {
  CMatrix rotated = eigenvectors.adjoint() * d * eigenvectors;
  rotated.diagonal().setZero();
  return rotated.norm();
}

LeakageResult measure_leakage(const GDM& d0, const GeminalHamiltonianParts& parts,
                              double epsilon, double duration, RampProfile profile,
                              double dt) {
  const Schedule schedule = Schedule::ramp(epsilon, duration, profile, dt, duration);
  const GdmTrajectory run = propagate_gdm(d0, parts, schedule, static_cast<int>(schedule.steps()));
  const HermitianEigen eig = hermitian_eigen(parts.at(epsilon, 1.0));
  return {off_diagonal_norm(run.final_state.matrix(), eig.vectors), duration};
}

FidelityReport compare_with_fci(const LatticeModel& model, const Configuration& occupied,
                                const Schedule& schedule, int sample_stride) {
  const int n = occupied.size();
  const CMatrix orbitals = one_body_orbitals(model, schedule.eps(0.0)).vectors;
  const GDM d0 = slater_gdm(orbitals, occupied);
  const FCIOperatorSet ops(model, n);
  const CIVector psi0 = ci_from_orbitals(ops.space_ptr(), orbitals, occupied);

  const GdmTrajectory gdm_run = propagate_gdm(d0, model, schedule, sample_stride);
  const std::vector<FCISample> fci_run = fci_propagate(psi0, ops, schedule, sample_stride);
  if (gdm_run.samples.size() != fci_run.size())
    throw ResourceError("GDM and FCI sample grids differ");

  FidelityReport report;
  for (std::size_t i = 0; i < fci_run.size(); ++i) {
    const GdmSample& g = gdm_run.samples[i];
    const double t = fci_run[i].t;
    const RVector rho = wavefunction_density(fci_run[i].state);
    const double energy = wavefunction_energy(
        fci_run[i].state, ops.at(schedule.eps(t), schedule.lambda(t)));
    report.times.push_back(t);
    report.density_deviation.push_back((g.density - rho).cwiseAbs().maxCoeff());
    report.energy_deviation.push_back(std::abs(g.energy - energy));
  }
  report.max_density_deviation =
      *std::max_element(report.density_deviation.begin(), report.density_deviation.end());
  report.max_energy_deviation =
      *std::max_element(report.energy_deviation.begin(), report.energy_deviation.end());
  return report;
}

}  // namespace geminal
