#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "fleet/road_graph.hpp"

namespace fleet {

/// Simplified graph over the nodes that matter for routing: per ordered pair
/// the minimum travel energy and the travel time. Energies may be negative
/// (net descent); the matrices are dense and complete.
struct EnergyGraph {
    std::vector<std::string> names;
    Eigen::MatrixXd energy_kwh;  // (i, j) = energy from i to j
    Eigen::MatrixXd time_s;     // (i, j) = travel time from i to j
    // Underlying road-vertex sequences when built from a road graph;
    // empty in table mode.
    std::vector<std::vector<std::vector<int>>> road_paths;

    int index_of(const std::string& name) const;
    int require(const std::string& name) const;
    Eigen::Index size() const { return energy_kwh.rows(); }
};

/// How to derive travel times when building from a road graph.
struct TimeBasis {
    enum class Kind { profile_duration, average_speed } kind = Kind::profile_duration;
    double average_speed_kmh = 30.0;

    static TimeBasis profile_duration() { return {Kind::profile_duration, 0.0}; }
    static TimeBasis average_speed(double kmh) { return {Kind::average_speed, kmh}; }
};

/// All-pairs minimum-energy reduction of a road graph onto `node_ids`.
/// Times come from the chosen paths: either the summed profile durations or
/// distance over an assumed average speed.
EnergyGraph build_energy_graph(const RoadGraph& graph, const VehicleParams& params,
                               const std::vector<std::string>& node_ids,
                               TimeBasis time_basis = TimeBasis::profile_duration(),
                               bool clamp_regen = false);

/// Build directly from measured matrices: an energy matrix (kWh) and a
/// distance matrix (km) converted to times with a flat average speed. Node
/// names and order must agree between the two matrices.
EnergyGraph energy_graph_from_tables(const std::vector<std::string>& names,
                                     const Eigen::MatrixXd& energy_kwh,
                                     const Eigen::MatrixXd& distance_km,
                                     double average_speed_kmh);

}  // namespace fleet
