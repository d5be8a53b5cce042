#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fleet/dynamics.hpp"
#include "fleet/speed_profile.hpp"

namespace fleet {

/// Directed road network: key points with elevation, sections with a
/// representative speed profile. Immutable once built.
class RoadGraph {
public:
    struct Vertex {
        std::string id;
        double elevation_m = 0.0;
    };
    struct Edge {
        int from = -1;
        int to = -1;
        SpeedProfile profile;
    };

    int add_vertex(std::string id, double elevation_m);
    void add_edge(const std::string& from, const std::string& to, SpeedProfile profile);

    int index_of(const std::string& id) const;  // -1 if unknown
    int require(const std::string& id) const;   // throws PathError if unknown

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge* edge_between(int from, int to) const;
    double delta_z(const Edge& e) const {
        return vertices_[e.to].elevation_m - vertices_[e.from].elevation_m;
    }

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
};

struct WeightedEdge {
    int from = -1;
    int to = -1;
    double weight = 0.0;
};

struct PathResult {
    std::vector<int> vertices;  // empty when src == dst
    double total = 0.0;
};

/// Single-source shortest path tolerating negative edge weights
/// (label-correcting Bellman-Ford). Throws ModelError when a negative cycle
/// is reachable from `src` and PathError when `dst` is not.
PathResult shortest_path(int vertex_count, const std::vector<WeightedEdge>& edges, int src, int dst);

/// Sum of edge energies along a vertex sequence. Throws PathError on a
/// missing edge.
double path_energy_kwh(const RoadGraph& graph, const VehicleParams& params,
                       const std::vector<int>& path, bool clamp_regen = false);

/// Minimum-consumption path between two key points. Edge energies may be
/// negative on downhill sections, hence the Bellman-Ford core.
PathResult min_energy_path(const RoadGraph& graph, const VehicleParams& params, int src, int dst,
                           bool clamp_regen = false);

}  // namespace fleet
