#include "fleet/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fleet {

int RoadGraph::add_vertex(std::string id, double elevation_m) {
    if (!std::isfinite(elevation_m)) throw ParameterError("road graph: elevation must be finite");
    if (index_of(id) >= 0) throw ParameterError("road graph: duplicate vertex id '" + id + "'");
    vertices_.push_back({std::move(id), elevation_m});
    return static_cast<int>(vertices_.size()) - 1;
}

void RoadGraph::add_edge(const std::string& from, const std::string& to, SpeedProfile profile) {
    edges_.push_back({require(from), require(to), std::move(profile)});
}

int RoadGraph::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].id == id) return static_cast<int>(i);
    return -1;
}

int RoadGraph::require(const std::string& id) const {
    const int i = index_of(id);
    if (i < 0) throw PathError("road graph: unknown vertex '" + id + "'");
    return i;
}

const RoadGraph::Edge* RoadGraph::edge_between(int from, int to) const {
    for (const Edge& e : edges_)
        if (e.from == from && e.to == to) return &e;
    return nullptr;
}

PathResult shortest_path(int vertex_count, const std::vector<WeightedEdge>& edges, int src, int dst) {
    if (src < 0 || src >= vertex_count || dst < 0 || dst >= vertex_count)
        throw PathError("shortest_path: vertex out of range");
    if (src == dst) return {};

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(vertex_count, inf);
    std::vector<int> pred(vertex_count, -1);
    dist[src] = 0.0;

    for (int pass = 1; pass < vertex_count; ++pass) {
        bool changed = false;
        for (const WeightedEdge& e : edges) {
            if (dist[e.from] == inf) continue;
            const double cand = dist[e.from] + e.weight;
            if (cand < dist[e.to]) {
                dist[e.to] = cand;
                pred[e.to] = e.from;
                changed = true;
            }
        }
        if (!changed) break;
    }
    // One more relaxable edge reachable from src means a negative cycle:
    // corrupted elevation or profile data, not something to paper over.
    for (const WeightedEdge& e : edges) {
        if (dist[e.from] != inf && dist[e.from] + e.weight < dist[e.to] - 1e-12)
            throw ModelError("shortest_path: negative-energy cycle detected");
    }
    if (dist[dst] == inf) throw PathError("shortest_path: destination unreachable");

    PathResult result;
    result.total = dist[dst];
    for (int v = dst; v != -1; v = pred[v]) result.vertices.push_back(v);
    std::reverse(result.vertices.begin(), result.vertices.end());
    return result;
}

double path_energy_kwh(const RoadGraph& graph, const VehicleParams& params,
                       const std::vector<int>& path, bool clamp_regen) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const RoadGraph::Edge* e = graph.edge_between(path[i], path[i + 1]);
        if (!e)
            throw PathError("path_energy: no edge " + graph.vertices()[path[i]].id + " -> " +
                            graph.vertices()[path[i + 1]].id);
        total += edge_energy_kwh(params, e->profile, graph.delta_z(*e), clamp_regen);
    }
    return total;
}

PathResult min_energy_path(const RoadGraph& graph, const VehicleParams& params, int src, int dst,
                           bool clamp_regen) {
    std::vector<WeightedEdge> weighted;
    weighted.reserve(graph.edges().size());
    for (const RoadGraph::Edge& e : graph.edges())
        weighted.push_back({e.from, e.to,
                            edge_energy_kwh(params, e.profile, graph.delta_z(e), clamp_regen)});
    return shortest_path(static_cast<int>(graph.vertices().size()), weighted, src, dst);
}

}  // namespace fleet
