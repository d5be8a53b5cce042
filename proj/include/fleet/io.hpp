#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "fleet/evrp.hpp"
#include "fleet/road_graph.hpp"
#include "fleet/scheduling.hpp"
#include "fleet/synth.hpp"

namespace fleet {

/// Shortest round-trip decimal rendering; all emitted files use it so equal
/// values produce equal bytes.
std::string format_double(double value);

/// Speed log CSV with header `t_s,v_mps`. Parse failures name the line.
SpeedProfile ingest_gps(const std::filesystem::path& path);
void write_gps(const SpeedProfile& profile, const std::filesystem::path& path);

/// Square matrix CSV whose first row and column carry the node names.
struct NamedMatrix {
    std::vector<std::string> names;
    Eigen::MatrixXd values;
};
NamedMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const NamedMatrix& matrix, const std::filesystem::path& path);

/// Road network JSON: {"vertices": [{"id", "z_m"}], "edges": [{"from", "to",
/// "profile_file"}]}; profile files resolve relative to the JSON.
RoadGraph read_road_graph(const std::filesystem::path& path);

VehicleParams vehicle_params_from_json(const nlohmann::json& j);
VehicleParams read_vehicle_params(const std::filesystem::path& path);

DegradationParams degradation_params_from_json(const nlohmann::json& j);

std::vector<SynthSegment> synth_segments_from_json(const nlohmann::json& j);

/// Routing instance JSON; matrix references resolve relative to the file.
EvrpInstance read_evrp_instance(const std::filesystem::path& path);
EvrpInstance evrp_instance_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

nlohmann::json solution_to_json(const EvrpInstance& instance, const EvrpSolution& solution);

nlohmann::json schedule_to_json(const SchedulingInstance& instance, const Schedule& schedule);
Schedule schedule_from_json(const SchedulingInstance& instance, const nlohmann::json& j);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace fleet
