#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fleet/energy_graph.hpp"
#include "oracles.hpp"

using namespace fleet;

namespace {

SpeedProfile cruise(double v_mps, double duration_s) {
    const Eigen::Index n = static_cast<Eigen::Index>(duration_s * 5.0) + 1;
    return SpeedProfile::from_speeds(Eigen::ArrayXd::Constant(n, v_mps), 5.0);
}

// Small hilly test network; elevations make some edges net producers.
RoadGraph hill_graph() {
    RoadGraph g;
    g.add_vertex("a", 2600.0);
    g.add_vertex("b", 2590.0);
    g.add_vertex("c", 2640.0);
    g.add_vertex("d", 2605.0);
    g.add_edge("a", "b", cruise(10.0, 60.0));
    g.add_edge("b", "a", cruise(10.0, 60.0));
    g.add_edge("b", "c", cruise(8.0, 90.0));
    g.add_edge("c", "d", cruise(12.0, 45.0));
    g.add_edge("a", "d", cruise(14.0, 80.0));
    g.add_edge("d", "a", cruise(14.0, 80.0));
    return g;
}

std::vector<WeightedEdge> random_edges(Rng& rng, int n, double density, double lo, double hi) {
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rng.uniform() < density)
                edges.push_back({i, j, lo + (hi - lo) * rng.uniform()});
    return edges;
}

}  // namespace

TEST_CASE("path energy sums edge energies") {
    const RoadGraph g = hill_graph();
    const VehicleParams p;
    const double ab = edge_energy_kwh(p, cruise(10.0, 60.0), -10.0);
    const double bc = edge_energy_kwh(p, cruise(8.0, 90.0), 50.0);
    CHECK(path_energy_kwh(g, p, {0, 1}) == doctest::Approx(ab).epsilon(1e-12));
    CHECK(path_energy_kwh(g, p, {0, 1, 2}) == doctest::Approx(ab + bc).epsilon(1e-12));
    CHECK_THROWS_AS(path_energy_kwh(g, p, {0, 2}), PathError);
}

TEST_CASE("a closed loop with the regeneration clamp never gains energy") {
    const RoadGraph g = hill_graph();
    const VehicleParams p;
    CHECK(path_energy_kwh(g, p, {0, 1, 0}, true) >= 0.0);
    CHECK(path_energy_kwh(g, p, {0, 3, 0}, true) >= 0.0);
}

TEST_CASE("shortest path trivia") {
    const std::vector<WeightedEdge> edges = {{0, 1, 1.0}, {1, 2, -0.4}, {0, 2, 0.8}};
    const PathResult same = shortest_path(3, edges, 1, 1);
    CHECK(same.vertices.empty());
    CHECK(same.total == 0.0);

    const PathResult best = shortest_path(3, edges, 0, 2);
    CHECK(best.total == doctest::Approx(0.6));
    CHECK(best.vertices == std::vector<int>{0, 1, 2});

    CHECK_THROWS_AS(shortest_path(3, {{0, 1, 1.0}}, 1, 2), PathError);  // unreachable
}

TEST_CASE("negative cycles are a hard error") {
    const std::vector<WeightedEdge> edges = {{0, 1, 1.0}, {1, 2, -2.0}, {2, 1, 0.5}, {2, 3, 1.0}};
    CHECK_THROWS_AS(shortest_path(4, edges, 0, 3), ModelError);
}

TEST_CASE("shortest path matches exhaustive enumeration on mixed-sign graphs") {
    Rng rng(2026);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 8;
        auto edges = random_edges(rng, n, 0.45, -0.3, 1.0);
        if (oracles::has_negative_cycle(n, edges)) continue;
        const auto oracle = oracles::min_simple_path(n, edges, 0, n - 1);
        if (oracle.best == oracles::kInf) {
            CHECK_THROWS_AS(shortest_path(n, edges, 0, n - 1), PathError);
            continue;
        }
        const PathResult got = shortest_path(n, edges, 0, n - 1);
        CHECK(got.total == doctest::Approx(oracle.best).epsilon(1e-9));
        CHECK(got.total <= oracle.best + 1e-9);  // never worse than any simple path
        ++solved;
    }
    CHECK(solved > 20);
}

TEST_CASE("a net-downhill detour can beat the direct climb") {
    // Diamond: direct a->d vs a->b->c->d where a->b descends enough to go
    // net-negative. The solver must pick the detour, which plain Dijkstra
    // with non-negative assumptions would misprice.
    RoadGraph g;
    g.add_vertex("a", 2650.0);
    g.add_vertex("b", 2560.0);  // 90 m drop: net energy producer at low speed
    g.add_vertex("c", 2570.0);
    g.add_vertex("d", 2575.0);
    g.add_edge("a", "b", cruise(6.0, 40.0));
    g.add_edge("b", "c", cruise(6.0, 30.0));
    g.add_edge("c", "d", cruise(6.0, 30.0));
    g.add_edge("a", "d", cruise(16.0, 120.0));
    const VehicleParams p;

    std::vector<WeightedEdge> edges;
    for (const RoadGraph::Edge& e : g.edges())
        edges.push_back({e.from, e.to, edge_energy_kwh(p, e.profile, g.delta_z(e))});
    CHECK(edges[0].weight < 0.0);  // the descent really is net-negative

    const auto oracle = oracles::min_simple_path(4, edges, 0, 3);
    const PathResult got = min_energy_path(g, p, 0, 3);
    CHECK(got.total == doctest::Approx(oracle.best).epsilon(1e-12));
    CHECK(got.vertices == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("energy graph construction is reproducible and complete") {
    const RoadGraph g = hill_graph();
    const VehicleParams p;
    const std::vector<std::string> nodes = {"a", "c", "d"};
    const EnergyGraph e1 = build_energy_graph(g, p, nodes);
    const EnergyGraph e2 = build_energy_graph(g, p, nodes);
    CHECK(e1.energy_kwh == e2.energy_kwh);
    CHECK(e1.time_s == e2.time_s);
    CHECK(e1.size() == 3);
    // Travel times in profile mode are the summed section durations.
    CHECK(e1.time_s(0, 1) == doctest::Approx(150.0));  // a->b->c: 60 s + 90 s
    CHECK(e1.energy_kwh(0, 0) == 0.0);

    const EnergyGraph single = build_energy_graph(g, p, {"a"});
    CHECK(single.size() == 1);
    CHECK(single.energy_kwh(0, 0) == 0.0);
}

TEST_CASE("table mode reproduces the bundled case-study matrices") {
    const std::vector<std::string> names = {"Airport 1", "Airport 2", "Hotel", "Public RS", "Mall",
                                            "Terminal"};
    Eigen::MatrixXd energy(6, 6), distance(6, 6);
    energy << 0, 0.128, 0.574, 1.073, 0.79, 0.719,
        0.285, 0, 0.567, 1.076, 0.634, 0.656,
        0.593, 0.773, 0, 0.658, 0.183, 0.429,
        0.688, 0.828, 0.51, 0, 0.443, 0.727,
        0.805, 0.876, 0.321, 0.497, 0, 0.536,
        0.839, 0.925, 0.28, 0.72, 0.407, 0;
    distance << 0, 0.94, 5.92, 9.55, 7.62, 6.69,
        2.94, 0, 5.86, 9.54, 7.6, 6.66,
        6.2, 7.11, 0, 5.5, 1.79, 3.33,
        6.99, 7.87, 4.21, 0, 4.21, 5.9,
        7.74, 8.62, 2.61, 4.9, 0, 4.59,
        7.48, 8.37, 2.1, 6.03, 3.25, 0;

    const EnergyGraph eg = energy_graph_from_tables(names, energy, distance, 30.0);
    CHECK(eg.energy_kwh(eg.require("Hotel"), eg.require("Mall")) == doctest::Approx(0.183));
    CHECK(eg.energy_kwh(eg.require("Airport 1"), eg.require("Airport 2")) == doctest::Approx(0.128));
    CHECK(eg.energy_kwh(eg.require("Hotel"), eg.require("Airport 1")) == doctest::Approx(0.593));
    // 1.79 km at 30 km/h is 214.8 s.
    CHECK(eg.time_s(eg.require("Hotel"), eg.require("Mall")) == doctest::Approx(214.8).epsilon(1e-12));
}
