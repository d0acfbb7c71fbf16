#include "geminal/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "geminal/errors.hpp"

namespace geminal {

namespace fs = std::filesystem;

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << value.dump(2) << '\n';
}

namespace {

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw InputError(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string("field '") + name + "' has the wrong type");
  }
}

template <typename T>
T field_or(const Json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  return field<T>(j, name);
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

ModelDescription model_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("model document must be a JSON object");
  ModelDescription m;
  m.n_sites = field<int>(j, "n_sites");
  m.spacing = field<double>(j, "spacing");
  m.softening = field_or<double>(j, "softening", 1.0);
  m.perturbation_seed = field_or<std::uint64_t>(j, "perturbation_seed", 0);

  if (j.contains("nuclei")) {
    if (!j["nuclei"].is_array()) throw InputError("field 'nuclei' must be an array");
    for (const Json& n : j["nuclei"]) {
      Nucleus nucleus;
      nucleus.charge = field<double>(n, "charge");
      nucleus.position = field<double>(n, "position");
      nucleus.mobile = field_or<bool>(n, "mobile", false);
      nucleus.mass = field_or<double>(n, "mass", nucleus.mass);
      m.nuclei.push_back(nucleus);
    }
  }

  const Json& ia = j.contains("interaction") ? j["interaction"] : Json::object();
  const std::string type = field_or<std::string>(ia, "type", "soft_coulomb");
  if (type == "soft_coulomb") m.interaction.kind = InteractionKind::soft_coulomb;
  else if (type == "hubbard") m.interaction.kind = InteractionKind::hubbard;
  else if (type == "none") m.interaction.kind = InteractionKind::none;
  else throw InputError("unknown interaction type '" + type + "'");
  m.interaction.strength = field_or<double>(ia, "strength", 1.0);

  const std::string kinetic = field_or<std::string>(j, "kinetic", "finite_difference");
  if (kinetic == "finite_difference") m.kinetic = KineticForm::finite_difference;
  else if (kinetic == "tight_binding") m.kinetic = KineticForm::tight_binding;
  else throw InputError("unknown kinetic form '" + kinetic + "'");

  // Constructing the model runs the domain checks.
  LatticeModel validated(m);
  return m;
}

Json model_to_json(const ModelDescription& m) {
  Json j;
  j["n_sites"] = m.n_sites;
  j["spacing"] = m.spacing;
  j["softening"] = m.softening;
  Json nuclei = Json::array();
  for (const Nucleus& n : m.nuclei)
    nuclei.push_back({{"charge", n.charge}, {"position", n.position},
                      {"mobile", n.mobile}, {"mass", n.mass}});
  j["nuclei"] = nuclei;
  const char* type = m.interaction.kind == InteractionKind::soft_coulomb ? "soft_coulomb"
                     : m.interaction.kind == InteractionKind::hubbard    ? "hubbard"
                                                                          : "none";
  j["interaction"] = {{"type", type}, {"strength", m.interaction.strength}};
  j["perturbation_seed"] = m.perturbation_seed;
  j["kinetic"] = m.kinetic == KineticForm::finite_difference ? "finite_difference"
                                                             : "tight_binding";
  return j;
}

ModelDescription load_model(const fs::path& path) { return model_from_json(read_json(path)); }

GDM gdm_from_json(const Json& j) {
  const int n = field<int>(j, "n_electrons");
  const int size = field<int>(j, "basis_size");
  const std::string tag = field_or<std::string>(j, "basis_tag", "slater_pair");
  if (size < 1) throw InputError("basis_size must be positive");
  const Json& entries = j.contains("matrix") ? j["matrix"] : Json();
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(size) * size)
    throw InputError("'matrix' must list basis_size^2 [re, im] entries");
  CMatrix m(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const Json& e = entries[static_cast<std::size_t>(r) * size + c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw InputError("matrix entries must be [re, im] pairs");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return GDM(std::move(m), n, BasisTag(tag));
}

Json gdm_to_json(const GDM& d) {
  Json j;
  j["n_electrons"] = d.n_electrons();
  j["basis_size"] = d.size();
  j["basis_tag"] = d.basis().str();
  Json entries = Json::array();
  for (int r = 0; r < d.size(); ++r)
    for (int c = 0; c < d.size(); ++c)
      entries.push_back({d.matrix()(r, c).real(), d.matrix()(r, c).imag()});
  j["matrix"] = entries;
  return j;
}

GDM load_gdm(const fs::path& path) { return gdm_from_json(read_json(path)); }

CIVector civector_from_json(const Json& j) {
  const int n = field<int>(j, "n_electrons");
  const int k = field<int>(j, "n_orbitals");
  auto space = std::make_shared<ConfigurationSpace>(k, n);
  CVector c = CVector::Zero(static_cast<Eigen::Index>(space->size()));
  const Json& entries = j.contains("coefficients") ? j["coefficients"] : Json();
  if (!entries.is_array()) throw InputError("'coefficients' must be an array");
  for (const Json& e : entries) {
    if (!e.is_array() || e.size() != 3)
      throw InputError("coefficients must be [[configuration...], re, im]");
    Configuration alpha;
    try {
      alpha = Configuration(e[0].get<std::vector<int>>());
    } catch (const Json::exception&) {
      throw InputError("configuration must be a list of orbital indices");
    }
    const auto index = space->index_of(alpha.mask());
    if (alpha.size() != n || !index)
      throw InputError("configuration does not belong to the declared space");
    c[static_cast<Eigen::Index>(*index)] += cplx(e[1].get<double>(), e[2].get<double>());
  }
  return CIVector(std::move(space), std::move(c));
}

Json civector_to_json(const CIVector& psi, double drop_below) {
  Json j;
  j["n_electrons"] = psi.n_electrons();
  j["n_orbitals"] = psi.n_orbitals();
  Json entries = Json::array();
  for (std::size_t a = 0; a < psi.space().size(); ++a) {
    const cplx v = psi.coefficients()[static_cast<Eigen::Index>(a)];
    if (std::abs(v) <= drop_below && drop_below > 0.0) continue;
    const auto orbitals = psi.space()[a].orbitals();
    entries.push_back({std::vector<int>(orbitals.begin(), orbitals.end()), v.real(), v.imag()});
  }
  j["coefficients"] = entries;
  return j;
}

Schedule schedule_from_json(const Json& j) {
  Schedule s;
  s.type = field_or<std::string>(j, "type", s.type);
  s.epsilon = field_or<double>(j, "epsilon", s.epsilon);
  s.lambda_value = field_or<double>(j, "lambda", s.lambda_value);
  s.T = field_or<double>(j, "T", s.T);
  s.T1 = field_or<double>(j, "T1", s.T1);
  s.T2 = field_or<double>(j, "T2", s.T2);
  s.T3 = field_or<double>(j, "T3", s.T3);
  s.dt = field_or<double>(j, "dt", s.dt);
  s.t_final = field_or<double>(j, "t_final", s.t_final);
  if (j.contains("profile")) s.profile = parse_profile(field<std::string>(j, "profile"));
  s.drive_amplitude = field_or<double>(j, "drive_amplitude", s.drive_amplitude);
  s.drive_frequency = field_or<double>(j, "drive_frequency", s.drive_frequency);
  s.validate();
  return s;
}

Json schedule_to_json(const Schedule& s) {
  return {{"type", s.type},       {"epsilon", s.epsilon},
          {"lambda", s.lambda_value}, {"T", s.T},
          {"T1", s.T1},           {"T2", s.T2},
          {"T3", s.T3},           {"dt", s.dt},
          {"t_final", s.t_final}, {"profile", profile_name(s.profile)},
          {"drive_amplitude", s.drive_amplitude},
          {"drive_frequency", s.drive_frequency}};
}

Json report_to_json(const NRepReport& report) {
  Json rules = Json::array();
  for (const RuleResult& r : report.rules)
    rules.push_back({{"rule", r.name}, {"residual", r.residual}, {"passed", r.passed},
                     {"detail", r.detail}});
  return {{"passed", report.passed},
          {"rules", rules},
          {"note", "passing the necessary rules does not certify N-representability"}};
}

Json solution_to_json(const AdiabaticSolution& s, double epsilon, std::uint64_t seed) {
  Json j;
  const auto orbitals = s.initial_configuration.orbitals();
  j["initial_configuration"] = std::vector<int>(orbitals.begin(), orbitals.end());
  j["occupied_curves"] = s.occupied_curves;
  Json pairs = Json::array();
  for (const OrbitalPair p : s.pairs) pairs.push_back({p.first, p.second});
  j["occupied_pairs"] = pairs;
  Json energy = Json::array();
  for (const auto& [l, e] : s.energy_lambda) energy.push_back({l, e});
  j["energy_lambda"] = energy;
  j["final_energy"] = s.final_energy;
  j["representable"] = s.representable;
  j["populations"] = s.populations;
  if (s.fci_energy) j["fci_energy"] = *s.fci_energy;
  if (s.deviation) j["deviation"] = *s.deviation;
  if (s.initial_deviation) j["initial_deviation"] = *s.initial_deviation;
  j["epsilon"] = epsilon;
  j["seed"] = seed;
  return j;
}

void write_trajectory_csv(const fs::path& path, const GdmTrajectory& run) {
  std::ofstream out = open_csv(path);
  const Eigen::Index k = run.samples.empty() ? 0 : run.samples.front().density.size();
  out << "t,energy,trace,trace_sq";
  for (Eigen::Index x = 1; x <= k; ++x) out << ",density_" << x;
  out << '\n';
  for (const GdmSample& s : run.samples) {
    out << format_number(s.t) << ',' << format_number(s.energy) << ','
        << format_number(s.trace.real()) << ',' << format_number(s.trace_squared);
    for (Eigen::Index x = 0; x < k; ++x) out << ',' << format_number(s.density[x]);
    out << '\n';
  }
}

void write_coupled_csv(const fs::path& path, const CoupledTrajectory& run) {
  std::ofstream out = open_csv(path);
  if (run.samples.empty()) return;
  const Eigen::Index k = run.samples.front().density.size();
  const std::size_t nuclei = run.samples.front().positions.size();
  out << "t,energy,trace,trace_sq";
  for (Eigen::Index x = 1; x <= k; ++x) out << ",density_" << x;
  for (std::size_t i = 1; i <= nuclei; ++i) out << ",R_" << i << ",v_" << i;
  out << ",nuclear_kinetic,nuclear_repulsion,total_energy\n";
  for (const CoupledSample& s : run.samples) {
    out << format_number(s.t) << ',' << format_number(s.electronic_energy) << ','
        << format_number(s.trace.real()) << ',' << format_number(s.trace_squared);
    for (Eigen::Index x = 0; x < k; ++x) out << ',' << format_number(s.density[x]);
    for (std::size_t i = 0; i < nuclei; ++i)
      out << ',' << format_number(s.positions[i]) << ',' << format_number(s.velocities[i]);
    out << ',' << format_number(s.nuclear_kinetic) << ','
        << format_number(s.nuclear_repulsion) << ',' << format_number(s.total_energy) << '\n';
  }
}

void write_curves_csv(const fs::path& path, const EigenCurveSet& curves) {
  std::ofstream out = open_csv(path);
  out << "lambda,tracked_index,energy,crossing_flag\n";
  for (std::size_t p = 0; p < curves.lambda_grid.size(); ++p) {
    for (int c = 0; c < curves.curve_count(); ++c) {
      out << format_number(curves.lambda_grid[p]) << ',' << c + 1 << ','
          << format_number(curves.energies(static_cast<Eigen::Index>(p), c)) << ','
          << (curves.crossing_flag(static_cast<int>(p), c) ? 1 : 0) << '\n';
    }
  }
}

void write_density_csv(const fs::path& path, const SuddenResult& result) {
  std::ofstream out = open_csv(path);
  const Eigen::Index k = result.series.cols();
  out << "t";
  for (Eigen::Index x = 1; x <= k; ++x) out << ",density_" << x;
  out << '\n';
  for (std::size_t s = 0; s < result.times.size(); ++s) {
    out << format_number(result.times[s]);
    for (Eigen::Index x = 0; x < k; ++x)
      out << ',' << format_number(result.series(static_cast<Eigen::Index>(s), x));
    out << '\n';
  }
}

}  // namespace geminal
