#include "geminal/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <set>

#include "geminal/errors.hpp"
#include "geminal/oracle.hpp"

namespace geminal {

namespace {

// Curves followed through a grid; columns are kept in curve order.
struct TrackState {
  CMatrix vectors;
  RVector energies;
  std::vector<int> eigen_index;
};

class Tracker {
 public:
  Tracker(std::function<HermitianEigen(double)> solve, const ScanOptions& options,
          Eigen::Index checked, bool strict)
      : solve_(std::move(solve)), options_(options), checked_(checked), strict_(strict) {}

  TrackState start(double lambda) {
    HermitianEigen eig = solve_(lambda);
    TrackState s{eig.vectors, eig.values, {}};
    s.eigen_index.resize(static_cast<std::size_t>(eig.values.size()));
    std::iota(s.eigen_index.begin(), s.eigen_index.end(), 0);
    return s;
  }

  void advance(TrackState& state, double from, double to) {
    advance(state, from, to, solve_(to), 0);
  }

  int refinements = 0;
  int unresolved = 0;

 private:
  void advance(TrackState& state, double from, double to, const HermitianEigen& target,
               int depth) {
    const OverlapMatch match = match_by_overlap(state.vectors, target.vectors);
    double worst = 1.0;
    for (Eigen::Index c = 0; c < checked_; ++c) worst = std::min(worst, match.overlap[c]);

    if (worst < options_.ambiguity_threshold) {
      if (depth < options_.max_refinement_depth) {
        ++refinements;
        const double mid = 0.5 * (from + to);
        advance(state, from, mid, solve_(mid), depth + 1);
        advance(state, mid, to, target, depth + 1);
        return;
      }
      if (strict_)
        throw GridResolutionError("eigenvector tracking ambiguous between lambda = " +
                                  std::to_string(from) + " and " + std::to_string(to) +
                                  " after " + std::to_string(depth) + " refinements");
      ++unresolved;
    }

    const Eigen::Index n = state.vectors.cols();
    for (Eigen::Index c = 0; c < n; ++c) {
      const int j = match.assignment[c];
      CVector col = target.vectors.col(j);
      const cplx overlap = state.vectors.col(c).dot(col);
      if (std::abs(overlap) > 0.0) col *= std::conj(overlap) / std::abs(overlap);
      state.vectors.col(c) = col;
      state.energies[c] = target.values[j];
      state.eigen_index[c] = j;
    }
  }

  std::function<HermitianEigen(double)> solve_;
  ScanOptions options_;
  Eigen::Index checked_;
  bool strict_;
};

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("lambda grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
      throw InputError("lambda grid values must lie in [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw InputError("lambda grid must be strictly ascending");
  }
}

double pair_count_of(int n) { return 0.5 * n * (n - 1); }

}  // namespace

std::vector<double> uniform_grid(int points) {
  if (points < 1) throw InputError("lambda grid needs at least one point");
  if (points == 1) return {0.0};
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = static_cast<double>(i) / (points - 1);
  grid.back() = 1.0;
  return grid;
}

std::optional<int> EigenCurveSet::curve_of(OrbitalPair pair) const {
  for (std::size_t c = 0; c < labels.size(); ++c)
    if (labels[c] == pair) return static_cast<int>(c);
  return std::nullopt;
}

bool EigenCurveSet::crossing_flag(int point, int curve) const {
  if (point <= 0) return false;
  const double lo = lambda_grid[static_cast<std::size_t>(point - 1)];
  for (const Crossing& x : crossings)
    if (x.lambda_lo == lo && (x.a == curve || x.b == curve)) return true;
  return false;
}

EigenCurveSet scan_curves(const LatticeModel& model, int n_electrons, double epsilon,
                          const std::vector<double>& lambda_grid, int curve_count,
                          const ScanOptions& options) {
  validate_grid(lambda_grid);
  const GeminalHamiltonianParts parts = geminal_hamiltonian_parts(model, n_electrons);
  const int g = static_cast<int>(parts.base.rows());
  if (curve_count < 1 || curve_count > g)
    throw InputError("curve count must lie in 1..G");
  if (curve_count < pair_count_of(n_electrons))
    throw InputError("curve count must be at least N(N-1)/2");

  EigenCurveSet out;
  out.epsilon = epsilon;
  out.n_electrons = n_electrons;
  out.seed = model.description().perturbation_seed;
  out.lambda_grid = lambda_grid;
  out.orbitals = one_body_orbitals(model, epsilon);
  out.energies.resize(static_cast<Eigen::Index>(lambda_grid.size()), curve_count);

  Tracker tracker([&](double l) { return hermitian_eigen(parts.at(epsilon, l)); },
                  options, curve_count, true);

  // Curves are ordered by their energy at lambda = 0; scanning starts there
  // even when the grid does not.
  TrackState state = tracker.start(0.0);
  double at = 0.0;
  {
    const CMatrix w = pair_determinants(out.orbitals.vectors);
    const OverlapMatch m = match_by_overlap(state.vectors.leftCols(curve_count), w);
    const GeminalBasis basis(model.n_orbitals());
    for (int c = 0; c < curve_count; ++c) out.labels.push_back(basis.pair(m.assignment[c]));
  }

  for (std::size_t p = 0; p < lambda_grid.size(); ++p) {
    if (lambda_grid[p] > at) {
      tracker.advance(state, at, lambda_grid[p]);
      at = lambda_grid[p];
    }
    out.energies.row(static_cast<Eigen::Index>(p)) = state.energies.head(curve_count).transpose();
    out.vectors.push_back(state.vectors.leftCols(curve_count));
    out.eigen_index.emplace_back(state.eigen_index.begin(),
                                 state.eigen_index.begin() + curve_count);
  }
  out.refinements = tracker.refinements;

  for (std::size_t p = 0; p + 1 < lambda_grid.size(); ++p) {
    for (int a = 0; a < curve_count; ++a) {
      for (int b = a + 1; b < curve_count; ++b) {
        const double before = out.energies(p, a) - out.energies(p, b);
        const double after = out.energies(p + 1, a) - out.energies(p + 1, b);
        if ((before < 0.0) != (after < 0.0))
          out.crossings.push_back({lambda_grid[p], lambda_grid[p + 1], a, b});
      }
    }
  }
  return out;
}

std::optional<int> FciReference::state_of(const Configuration& orbitals) const {
  for (std::size_t s = 0; s < labels.size(); ++s)
    if (labels[s] == orbitals) return static_cast<int>(s);
  return std::nullopt;
}

FciReference fci_reference(const LatticeModel& model, int n_electrons, double epsilon,
                           const std::vector<double>& lambda_grid,
                           const ScanOptions& options) {
  validate_grid(lambda_grid);
  const FCIOperatorSet ops(model, n_electrons);
  const auto dim = static_cast<Eigen::Index>(ops.dimension());
  Tracker tracker([&](double l) { return hermitian_eigen(CMatrix(ops.at(epsilon, l))); },
                  options, dim, false);

  FciReference out;
  out.lambda_grid = lambda_grid;
  out.energies.resize(static_cast<Eigen::Index>(lambda_grid.size()), dim);

  TrackState state = tracker.start(0.0);
  {
    const CMatrix orbitals = one_body_orbitals(model, epsilon).vectors;
    const auto& configs = ops.space().configurations();
    CMatrix dets(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      dets.col(i) = ci_from_orbitals(ops.space_ptr(), orbitals,
                                     configs[static_cast<std::size_t>(i)]).coefficients();
    const OverlapMatch m = match_by_overlap(state.vectors, dets);
    for (Eigen::Index s = 0; s < dim; ++s)
      out.labels.push_back(configs[static_cast<std::size_t>(m.assignment[s])]);
  }

  double at = 0.0;
  for (std::size_t p = 0; p < lambda_grid.size(); ++p) {
    if (lambda_grid[p] > at) {
      tracker.advance(state, at, lambda_grid[p]);
      at = lambda_grid[p];
    }
    out.energies.row(static_cast<Eigen::Index>(p)) = state.energies.transpose();
  }
  out.ground_energy = out.energies.row(out.energies.rows() - 1).minCoeff();
  out.unresolved_intervals = tracker.unresolved;
  return out;
}

namespace {

AdiabaticSolution assemble(const EigenCurveSet& curves, std::vector<int> occupied) {
  AdiabaticSolution s;
  std::sort(occupied.begin(), occupied.end());
  s.occupied_curves = std::move(occupied);
  for (const int c : s.occupied_curves)
    s.pairs.push_back(curves.labels[static_cast<std::size_t>(c)]);
  for (std::size_t p = 0; p < curves.lambda_grid.size(); ++p) {
    double e = 0.0;
    for (const int c : s.occupied_curves) e += curves.energies(static_cast<Eigen::Index>(p), c);
    s.energy_lambda.emplace_back(curves.lambda_grid[p], e);
  }
  s.final_energy = s.energy_lambda.back().second;
  s.populations.assign(s.occupied_curves.size(), 1.0);
  const auto generator = generating_configuration(s.pairs, curves.n_electrons);
  s.representable = generator.has_value();
  if (generator) s.initial_configuration = *generator;
  return s;
}

}  // namespace

AdiabaticSolution adiabatic_energy(const EigenCurveSet& curves,
                                   const Configuration& alpha0,
                                   const FciReference* reference) {
  if (alpha0.size() != curves.n_electrons)
    throw InputError("initial configuration must hold N orbitals");
  if (alpha0.max_orbital() > curves.orbitals.values.size())
    throw InputError("initial configuration refers to a missing orbital");
  std::vector<int> occupied;
  for (const OrbitalPair p : alpha0.pairs()) {
    const auto c = curves.curve_of(p);
    if (!c)
      throw CoverageError("pair (" + std::to_string(p.first) + "," +
                          std::to_string(p.second) + ") is not among the scanned curves");
    occupied.push_back(*c);
  }
  AdiabaticSolution s = assemble(curves, std::move(occupied));
  s.initial_configuration = alpha0;

  if (reference) {
    if (reference->lambda_grid != curves.lambda_grid)
      throw InputError("FCI reference uses a different lambda grid");
    if (const auto state = reference->state_of(alpha0)) {
      const Eigen::Index last = reference->energies.rows() - 1;
      s.fci_energy = reference->energies(last, *state);
      s.deviation = s.final_energy - *s.fci_energy;
      s.initial_deviation = s.energy_lambda.front().second - reference->energies(0, *state);
    }
  }
  return s;
}

AdiabaticSolution lowest_block_solution(const EigenCurveSet& curves) {
  const int block = static_cast<int>(pair_count_of(curves.n_electrons));
  const Eigen::Index last = curves.energies.rows() - 1;
  std::vector<int> order(static_cast<std::size_t>(curves.curve_count()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return curves.energies(last, a) < curves.energies(last, b);
  });
  order.resize(static_cast<std::size_t>(block));
  return assemble(curves, std::move(order));
}

std::vector<Configuration> lowest_configurations(const RVector& orbital_energies,
                                                 int n_electrons, std::size_t limit) {
  const int k = static_cast<int>(orbital_energies.size());
  if (n_electrons < 1 || n_electrons > k) throw InputError("electron count must lie in 1..K");
  using Entry = std::pair<double, std::vector<int>>;
  auto cost = [&](const std::vector<int>& c) {
    double e = 0.0;
    for (const int i : c) e += orbital_energies[i - 1];
    return e;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);
  std::set<std::vector<int>> seen;
  std::vector<int> first(static_cast<std::size_t>(n_electrons));
  std::iota(first.begin(), first.end(), 1);
  queue.emplace(cost(first), first);
  seen.insert(first);

  std::vector<Configuration> out;
  while (!queue.empty() && out.size() < limit) {
    const std::vector<int> current = queue.top().second;
    queue.pop();
    out.emplace_back(current);
    for (int i = 0; i < n_electrons; ++i) {
      std::vector<int> next = current;
      ++next[i];
      const int cap = i + 1 < n_electrons ? next[i + 1] : k + 1;
      if (next[i] >= cap || !seen.insert(next).second) continue;
      queue.emplace(cost(next), next);
    }
  }
  return out;
}

SearchResult ground_state_search(const EigenCurveSet& curves, std::size_t candidate_limit,
                                 const FciReference* reference) {
  const std::vector<Configuration> candidates =
      lowest_configurations(curves.orbitals.values, curves.n_electrons, candidate_limit);
  if (candidates.empty()) throw InputError("no candidate configurations to evaluate");

  SearchResult result{{}, 0, lowest_block_solution(curves), std::nullopt};
  for (const Configuration& alpha : candidates) {
    try {
      result.solutions.push_back(adiabatic_energy(curves, alpha, reference));
    } catch (const CoverageError&) {
      ++result.skipped;
    }
  }
  std::stable_sort(result.solutions.begin(), result.solutions.end(),
                   [](const AdiabaticSolution& a, const AdiabaticSolution& b) {
                     return a.final_energy < b.final_energy;
                   });
  for (std::size_t i = 0; i < result.solutions.size(); ++i) {
    if (result.solutions[i].representable) {
      result.ground = i;
      break;
    }
  }
  return result;
}

}  // namespace geminal
