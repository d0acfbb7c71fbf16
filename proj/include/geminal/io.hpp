#pragma once

// File formats: model, GDM, CI vector and schedule JSON; trajectory and curve
// CSV. Numbers are written with 17 significant digits so that reruns are
// byte-identical.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "geminal/continuation.hpp"
#include "geminal/dynamics.hpp"
#include "geminal/gdm.hpp"
#include "geminal/model.hpp"
#include "geminal/schedule.hpp"

namespace geminal {

using Json = nlohmann::ordered_json;

std::string format_number(double value);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& value);

/// Malformed documents raise InputError naming the offending field.
ModelDescription model_from_json(const Json& j);
Json model_to_json(const ModelDescription& model);
ModelDescription load_model(const std::filesystem::path& path);

GDM gdm_from_json(const Json& j);
Json gdm_to_json(const GDM& d);
GDM load_gdm(const std::filesystem::path& path);

CIVector civector_from_json(const Json& j);
Json civector_to_json(const CIVector& psi, double drop_below = 0.0);

Schedule schedule_from_json(const Json& j);
Json schedule_to_json(const Schedule& s);

Json report_to_json(const NRepReport& report);
Json solution_to_json(const AdiabaticSolution& s, double epsilon, std::uint64_t seed);

void write_trajectory_csv(const std::filesystem::path& path, const GdmTrajectory& run);
void write_coupled_csv(const std::filesystem::path& path, const CoupledTrajectory& run);
void write_curves_csv(const std::filesystem::path& path, const EigenCurveSet& curves);
void write_density_csv(const std::filesystem::path& path, const SuddenResult& result);

}  // namespace geminal
