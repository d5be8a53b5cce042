#include "fleet/energy_graph.hpp"

namespace fleet {

int EnergyGraph::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

int EnergyGraph::require(const std::string& name) const {
    const int i = index_of(name);
    if (i < 0) throw PathError("energy graph: unknown node '" + name + "'");
    return i;
}

EnergyGraph build_energy_graph(const RoadGraph& graph, const VehicleParams& params,
                               const std::vector<std::string>& node_ids, TimeBasis time_basis,
                               bool clamp_regen) {
    const int n = static_cast<int>(node_ids.size());
    EnergyGraph out;
    out.names = node_ids;
    out.energy_kwh = Eigen::MatrixXd::Zero(n, n);
    out.time_s = Eigen::MatrixXd::Zero(n, n);
    out.road_paths.assign(n, std::vector<std::vector<int>>(n));

    std::vector<int> road_index(n);
    for (int i = 0; i < n; ++i) road_index[i] = graph.require(node_ids[i]);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            PathResult path = min_energy_path(graph, params, road_index[i], road_index[j], clamp_regen);
            out.energy_kwh(i, j) = path.total;

            double time = 0.0;
            double distance = 0.0;
            for (std::size_t k = 0; k + 1 < path.vertices.size(); ++k) {
                const RoadGraph::Edge* e = graph.edge_between(path.vertices[k], path.vertices[k + 1]);
                time += e->profile.duration_s();
                distance += e->profile.distance_m();
            }
            if (time_basis.kind == TimeBasis::Kind::average_speed) {
                if (!(time_basis.average_speed_kmh > 0.0))
                    throw ParameterError("build_energy_graph: average speed must be positive");
                time = distance / (time_basis.average_speed_kmh / 3.6);
            }
            out.time_s(i, j) = time;
            out.road_paths[i][j] = std::move(path.vertices);
        }
    }
    return out;
}

EnergyGraph energy_graph_from_tables(const std::vector<std::string>& names,
                                     const Eigen::MatrixXd& energy_kwh,
                                     const Eigen::MatrixXd& distance_km,
                                     double average_speed_kmh) {
    const Eigen::Index n = static_cast<Eigen::Index>(names.size());
    if (energy_kwh.rows() != n || energy_kwh.cols() != n || distance_km.rows() != n ||
        distance_km.cols() != n)
        throw ParameterError("energy_graph_from_tables: matrix dimensions must match node count");
    if (!(average_speed_kmh > 0.0))
        throw ParameterError("energy_graph_from_tables: average speed must be positive");

    EnergyGraph out;
    out.names = names;
    out.energy_kwh = energy_kwh;
    out.time_s = distance_km / average_speed_kmh * kSecondsPerHour;
    return out;
}

}  // namespace fleet
