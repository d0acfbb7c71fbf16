#include "geminal/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "geminal/continuation.hpp"
#include "geminal/dynamics.hpp"
#include "geminal/errors.hpp"
#include "geminal/io.hpp"
#include "geminal/kernels.hpp"
#include "geminal/oracle.hpp"

namespace geminal::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* version = "1.0.0";

struct Options {
  std::string model;
  std::string gdm;
  std::string ci;
  std::string config;
  std::string schedule = "ramp";
  std::string profile = "smooth";
  std::string out = ".";
  int electrons = 3;
  int lambda_steps = 101;
  int states = 20;
  int candidates = 200;
  int stride = 1;
  double epsilon = 0.05;
  double lambda = 1.0;
  double dt = 0.01;
  double t_final = 100.0;
  double ramp_time = 0.0;
  double tolerance = 1e-10;
  std::optional<std::uint64_t> seed;
  bool oracle = false;
  bool freeze = false;
};

struct Job {
  const std::vector<std::string>& args;
  const Options& o;
  std::ostream& out;
  Json manifest;
  std::vector<std::string> outputs;

  ModelDescription load_model_description() const {
    if (o.model.empty()) throw InputError("--model is required");
    ModelDescription m = geminal::load_model(o.model);
    if (o.seed) m.perturbation_seed = *o.seed;
    return m;
  }

  fs::path prepare_output() {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    return dir;
  }

  void finish(const fs::path& dir, const std::string& command,
              const std::optional<ModelDescription>& model) {
    manifest["command"] = command;
    manifest["arguments"] = args;
    manifest["version"] = version;
    if (model) {
      manifest["model"] = model_to_json(*model);
      manifest["seed"] = model->perturbation_seed;
    }
    manifest["parameters"] = {{"electrons", o.electrons}, {"epsilon", o.epsilon},
                              {"lambda", o.lambda},       {"lambda_steps", o.lambda_steps},
                              {"states", o.states},       {"candidates", o.candidates},
                              {"dt", o.dt},               {"t_final", o.t_final},
                              {"schedule", o.schedule},   {"profile", o.profile},
                              {"ramp_time", o.ramp_time}, {"oracle", o.oracle},
                              {"config", o.config},       {"gdm", o.gdm},
                              {"ci", o.ci},               {"sample_stride", o.stride},
                              {"freeze_nuclei", o.freeze}};
    manifest["tolerances"] = {{"nrep", o.tolerance},
                              {"fci_residual", FCIOptions{}.residual_tolerance},
                              {"tracking_ambiguity", ScanOptions{}.ambiguity_threshold},
                              {"refinement_depth", ScanOptions{}.max_refinement_depth}};
    manifest["threads"] = kernels::available_threads();
    manifest["outputs"] = outputs;
    write_json(dir / "manifest.json", manifest);
  }
};

Configuration parse_configuration(const std::string& text, int n_electrons) {
  if (text.empty()) {
    std::vector<int> aufbau(static_cast<std::size_t>(n_electrons));
    for (int i = 0; i < n_electrons; ++i) aufbau[i] = i + 1;
    return Configuration(aufbau);
  }
  std::vector<int> orbitals;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      std::size_t used = 0;
      orbitals.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InputError("--config must be a comma-separated list of orbital indices");
    }
  }
  std::sort(orbitals.begin(), orbitals.end());
  Configuration c(orbitals);
  if (c.size() != n_electrons) throw InputError("--config must list N orbitals");
  return c;
}

// Initial state: a GDM file, or the determinant of one-body orbitals at eps.
GDM initial_gdm(const Options& o, const LatticeModel& model, double epsilon) {
  if (!o.gdm.empty()) return load_gdm(o.gdm);
  const Configuration occupied = parse_configuration(o.config, o.electrons);
  if (occupied.max_orbital() > model.n_orbitals())
    throw InputError("--config refers to an orbital beyond K");
  return slater_gdm(one_body_orbitals(model, epsilon).vectors, occupied);
}

Schedule build_schedule(const Options& o) {
  if (fs::exists(o.schedule)) return schedule_from_json(read_json(o.schedule));
  Schedule s;
  s.type = o.schedule;
  s.epsilon = o.epsilon;
  s.lambda_value = o.lambda;
  s.dt = o.dt;
  s.t_final = o.t_final;
  s.T = o.ramp_time > 0.0 ? o.ramp_time : o.t_final;
  s.profile = parse_profile(o.profile);
  s.validate();
  return s;
}

int cmd_check(Job& job) {
  const Options& o = job.o;
  if (o.gdm.empty() == o.ci.empty()) throw InputError("check needs exactly one of --gdm or --ci");
  const GDM d = o.gdm.empty() ? gdm_from_ci(civector_from_json(read_json(o.ci)))
                              : load_gdm(o.gdm);
  NRepOptions options;
  options.tolerance = o.tolerance;
  options.generability_check = o.oracle;
  const NRepReport report = check_nrep(d, options);

  for (const RuleResult& r : report.rules) {
    job.out << std::left << std::setw(14) << r.name << (r.passed ? "PASS" : "FAIL")
            << "  residual=" << format_number(r.residual) << "  " << r.detail << '\n';
  }
  job.out << (report.passed ? "all rules pass (necessary conditions only)"
                            : "rule violation found")
          << '\n';
  if (o.out != ".") {
    const fs::path dir = job.prepare_output();
    write_json(dir / "report.json", report_to_json(report));
    job.outputs.push_back("report.json");
    job.finish(dir, "check", std::nullopt);
  }
  return report.passed ? success : violation;
}

int cmd_oracle(Job& job) {
  const Options& o = job.o;
  const ModelDescription description = job.load_model_description();
  const LatticeModel model(description);
  const auto pairs = fci_solve(model, o.electrons, o.epsilon, o.lambda, o.states);

  const fs::path dir = job.prepare_output();
  Json result;
  result["epsilon"] = o.epsilon;
  result["lambda"] = o.lambda;
  result["n_electrons"] = o.electrons;
  Json energies = Json::array(), residuals = Json::array();
  for (const FCIEigenpair& p : pairs) {
    energies.push_back(p.energy);
    residuals.push_back(p.residual);
    job.out << format_number(p.energy) << '\n';
  }
  result["energies"] = energies;
  result["residuals"] = residuals;
  write_json(dir / "oracle.json", result);
  write_json(dir / "ground_state.json", civector_to_json(pairs.front().state, 1e-15));
  job.outputs = {"oracle.json", "ground_state.json"};
  job.finish(dir, "oracle", description);
  return success;
}

int cmd_solve(Job& job) {
  const Options& o = job.o;
  const ModelDescription description = job.load_model_description();
  const LatticeModel model(description);
  const std::vector<double> grid = uniform_grid(o.lambda_steps);
  const EigenCurveSet curves = scan_curves(model, o.electrons, o.epsilon, grid, o.states);
  std::optional<FciReference> reference;
  if (o.oracle) reference = fci_reference(model, o.electrons, o.epsilon, grid);
  const SearchResult search = ground_state_search(
      curves, static_cast<std::size_t>(o.candidates), reference ? &*reference : nullptr);

  const fs::path dir = job.prepare_output();
  write_curves_csv(dir / "curves.csv", curves);
  job.outputs.push_back("curves.csv");

  const std::uint64_t seed = description.perturbation_seed;
  Json ranking = Json::array();
  for (const AdiabaticSolution& s : search.solutions)
    ranking.push_back(solution_to_json(s, o.epsilon, seed));
  Json candidates;
  candidates["solutions"] = ranking;
  candidates["skipped"] = search.skipped;
  candidates["lowest_block"] = solution_to_json(search.lowest_block, o.epsilon, seed);
  candidates["crossings"] = Json::array();
  for (const Crossing& x : curves.crossings)
    candidates["crossings"].push_back({{"lambda_lo", x.lambda_lo}, {"lambda_hi", x.lambda_hi},
                                       {"curves", {x.a + 1, x.b + 1}}});
  candidates["refinements"] = curves.refinements;
  if (reference) {
    candidates["fci_ground_energy"] = reference->ground_energy;
    candidates["fci_unresolved_intervals"] = reference->unresolved_intervals;
  }
  write_json(dir / "candidates.json", candidates);
  job.outputs.push_back("candidates.json");

  if (search.ground) {
    const AdiabaticSolution& ground = search.solutions[*search.ground];
    Json solution = solution_to_json(ground, o.epsilon, seed);
    write_json(dir / "solution.json", solution);
    job.outputs.push_back("solution.json");
    job.out << "ground candidate " << solution["initial_configuration"].dump()
            << " final_energy=" << format_number(ground.final_energy);
    if (ground.deviation) job.out << " fci_deviation=" << format_number(*ground.deviation);
    job.out << '\n';
  }
  job.out << "lowest block at lambda=1 is "
          << (search.lowest_block.representable ? "representable" : "NOT representable")
          << '\n';
  job.finish(dir, "solve", description);
  return search.ground ? success : violation;
}

int cmd_propagate(Job& job) {
  const Options& o = job.o;
  const ModelDescription description = job.load_model_description();
  const LatticeModel model(description);
  const Schedule schedule = build_schedule(o);
  const GDM d0 = initial_gdm(o, model, schedule.eps(0.0));
  const GdmTrajectory run = propagate_gdm(d0, model, schedule, o.stride);

  std::optional<FidelityReport> fidelity;
  if (o.oracle) {
    if (!o.gdm.empty()) throw InputError("--oracle needs a determinant start (--config)");
    fidelity = compare_with_fci(model, parse_configuration(o.config, o.electrons), schedule,
                                o.stride);
  }

  const fs::path dir = job.prepare_output();
  write_trajectory_csv(dir / "trajectory.csv", run);
  job.outputs.push_back("trajectory.csv");
  job.manifest["schedule"] = schedule_to_json(schedule);
  if (fidelity) {
    write_json(dir / "fidelity.json",
               {{"max_density_deviation", fidelity->max_density_deviation},
                {"max_energy_deviation", fidelity->max_energy_deviation},
                {"times", fidelity->times},
                {"density_deviation", fidelity->density_deviation},
                {"energy_deviation", fidelity->energy_deviation}});
    job.outputs.push_back("fidelity.json");
    job.out << "max |d density| = " << format_number(fidelity->max_density_deviation)
            << ", max |d energy| = " << format_number(fidelity->max_energy_deviation) << '\n';
  }
  job.out << "final energy " << format_number(run.samples.back().energy) << '\n';
  job.finish(dir, "propagate", description);
  return success;
}

int cmd_sudden(Job& job) {
  const Options& o = job.o;
  const ModelDescription description = job.load_model_description();
  const LatticeModel model(description);
  const GDM d0 = initial_gdm(o, model, o.epsilon);
  const GeminalHamiltonianParts parts = geminal_hamiltonian_parts(model, d0.n_electrons());
  const long count = std::lround(o.t_final / o.dt);
  if (!(o.dt > 0.0) || count < 1) throw InputError("--dt and --t-final must be positive");
  std::vector<double> times(static_cast<std::size_t>(count + 1));
  for (long i = 0; i <= count; ++i) times[i] = static_cast<double>(i) * o.dt;
  const SuddenResult r = sudden_density(d0, parts, o.epsilon, times);

  const RVector empirical_mean = r.series.colwise().mean();
  const RVector empirical_variance =
      (r.series.rowwise() - empirical_mean.transpose()).array().square().colwise().mean();

  const fs::path dir = job.prepare_output();
  write_density_csv(dir / "density.csv", r);
  auto vec = [](const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  write_json(dir / "statistics.json",
             {{"mean", vec(r.mean)},
              {"variance", vec(r.variance)},
              {"empirical_mean", vec(empirical_mean)},
              {"empirical_variance", vec(empirical_variance)},
              {"window", o.t_final},
              {"epsilon", o.epsilon}});
  job.outputs = {"density.csv", "statistics.json"};
  job.out << "max |empirical mean - closed form| = "
          << format_number((empirical_mean - r.mean).cwiseAbs().maxCoeff()) << '\n';
  job.finish(dir, "sudden", description);
  return success;
}

int cmd_thermalize(Job& job) {
  const Options& o = job.o;
  const ModelDescription description = job.load_model_description();
  const LatticeModel model(description);
  const GDM d0 = initial_gdm(o, model, o.epsilon);
  CoupledOptions options;
  options.epsilon = o.epsilon;
  options.dt = o.dt;
  options.steps = std::lround(o.t_final / o.dt);
  options.sample_stride = o.stride;
  options.freeze_nuclei = o.freeze;
  const CoupledTrajectory run = propagate_coupled(d0, nuclei_from_model(model), model, options);

  const fs::path dir = job.prepare_output();
  write_coupled_csv(dir / "trajectory.csv", run);
  write_json(dir / "summary.json",
             {{"max_force_discrepancy", run.max_force_discrepancy},
              {"max_energy_drift", run.max_energy_drift},
              {"final_positions", run.final_nuclei.positions},
              {"final_velocities", run.final_nuclei.velocities}});
  job.outputs = {"trajectory.csv", "summary.json"};
  job.out << "energy drift " << format_number(run.max_energy_drift)
          << ", force discrepancy " << format_number(run.max_force_discrepancy) << '\n';
  job.finish(dir, "thermalize", description);
  return success;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geminal density matrix toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* c) {
    c->add_option("--model", o.model, "Model JSON")->check(CLI::ExistingFile);
    c->add_option("--electrons", o.electrons, "Electron count N")->check(CLI::Range(2, 64));
    c->add_option("--epsilon", o.epsilon, "Symmetry-breaking strength");
    c->add_option("--seed", o.seed, "Overrides the model's perturbation seed");
    c->add_option("--out", o.out, "Output directory");
  };
  auto add_initial = [&](CLI::App* c) {
    c->add_option("--config", o.config, "Occupied one-body orbitals, e.g. 1,2,3");
    c->add_option("--gdm", o.gdm, "Initial GDM JSON")->check(CLI::ExistingFile);
  };
  auto add_time = [&](CLI::App* c) {
    c->add_option("--dt", o.dt, "Time step (a.u.)")->check(CLI::PositiveNumber);
    c->add_option("--t-final", o.t_final, "Final time (a.u.)")->check(CLI::PositiveNumber);
    c->add_option("--stride", o.stride, "Sample every n steps")->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand("check", "Run the N-representability rules on a GDM");
  check->add_option("--gdm", o.gdm, "GDM JSON")->check(CLI::ExistingFile);
  check->add_option("--ci", o.ci, "CI vector JSON (converted to a GDM first)")
      ->check(CLI::ExistingFile);
  check->add_flag("--oracle", o.oracle, "Also run the configuration-generability check");
  check->add_option("--tolerance", o.tolerance, "Rule tolerance");
  check->add_option("--out", o.out, "Directory for report.json");

  CLI::App* oracle = app.add_subcommand("oracle", "Full-CI eigenpairs");
  add_model(oracle);
  oracle->add_option("--lambda", o.lambda, "Interaction strength");
  oracle->add_option("--states", o.states, "Number of eigenpairs")->check(CLI::PositiveNumber);

  CLI::App* solve = app.add_subcommand("solve", "Lambda continuation and ground-state search");
  add_model(solve);
  solve->add_option("--lambda-steps", o.lambda_steps, "Grid points on [0, 1]")
      ->check(CLI::PositiveNumber);
  solve->add_option("--states", o.states, "Tracked curves")->check(CLI::PositiveNumber);
  solve->add_option("--candidates", o.candidates, "Candidate limit")->check(CLI::PositiveNumber);
  solve->add_flag("--oracle", o.oracle, "Compare with FCI along the grid");

  CLI::App* propagate = app.add_subcommand("propagate", "GDM propagation under a schedule");
  add_model(propagate);
  add_initial(propagate);
  add_time(propagate);
  propagate->add_option("--schedule", o.schedule, "Schedule type or schedule JSON path");
  propagate->add_option("--profile", o.profile, "Ramp profile: linear, quadratic, smooth");
  propagate->add_option("--ramp-time", o.ramp_time, "Ramp duration T (default t_final)");
  propagate->add_option("--lambda", o.lambda, "Lambda for constant/driven schedules");
  propagate->add_flag("--oracle", o.oracle, "Propagate the FCI wavefunction alongside");

  CLI::App* sudden = app.add_subcommand("sudden", "Density after a sudden interaction switch");
  add_model(sudden);
  add_initial(sudden);
  add_time(sudden);

  CLI::App* thermalize = app.add_subcommand("thermalize", "Coupled electron-nuclear dynamics");
  add_model(thermalize);
  add_initial(thermalize);
  add_time(thermalize);
  thermalize->add_flag("--freeze", o.freeze, "Hold all nuclei fixed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? success : invalid_input;
  }

  Job job{args, o, out, Json::object(), {}};
  try {
    if (*check) return cmd_check(job);
    if (*oracle) return cmd_oracle(job);
    if (*solve) return cmd_solve(job);
    if (*propagate) return cmd_propagate(job);
    if (*sudden) return cmd_sudden(job);
    if (*thermalize) return cmd_thermalize(job);
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return invalid_input;
  } catch (const BasisTagError& e) {
    err << "invalid input: " << e.what() << '\n';
    return invalid_input;
  } catch (const StructureError& e) {
    err << "invalid input: " << e.what() << '\n';
    return invalid_input;
  } catch (const Error& e) {
    err << "failed: " << e.what() << '\n';
    return resource_failure;
  } catch (const fs::filesystem_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return invalid_input;
  }
  return invalid_input;
}

}  // namespace geminal::cli
