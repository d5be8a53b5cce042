// Brute-force reference implementations the tests check the real solvers
// against. Everything here favors obviousness over speed.
#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "fleet/evrp.hpp"
#include "fleet/road_graph.hpp"

namespace oracles {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PathOracle {
    double best = kInf;
    std::vector<int> best_path;
};

// Minimum-total-weight simple path by full enumeration.
inline void enumerate_paths(int n, const std::vector<fleet::WeightedEdge>& edges, int at, int dst,
                            std::vector<char>& used, std::vector<int>& path, double total,
                            PathOracle& out) {
    if (at == dst) {
        if (total < out.best) {
            out.best = total;
            out.best_path = path;
        }
        return;
    }
    for (const fleet::WeightedEdge& e : edges) {
        if (e.from != at || used[static_cast<std::size_t>(e.to)]) continue;
        used[static_cast<std::size_t>(e.to)] = 1;
        path.push_back(e.to);
        enumerate_paths(n, edges, e.to, dst, used, path, total + e.weight, out);
        path.pop_back();
        used[static_cast<std::size_t>(e.to)] = 0;
    }
}

inline PathOracle min_simple_path(int n, const std::vector<fleet::WeightedEdge>& edges, int src,
                                  int dst) {
    PathOracle out;
    if (src == dst) {
        out.best = 0.0;
        return out;
    }
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::vector<int> path = {src};
    used[static_cast<std::size_t>(src)] = 1;
    enumerate_paths(n, edges, src, dst, used, path, 0.0, out);
    return out;
}

// Independent negative-cycle detector (Floyd-Warshall diagonal).
inline bool has_negative_cycle(int n, const std::vector<fleet::WeightedEdge>& edges) {
    std::vector<std::vector<double>> d(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), kInf));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.0;
    for (const fleet::WeightedEdge& e : edges)
        d[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.to)] =
            std::min(d[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.to)], e.weight);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    for (int i = 0; i < n; ++i)
        if (d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] < -1e-12) return true;
    return false;
}

// All stop orders of one candidate route: permutations of the part's pickup
// and delivery stops that keep each pickup before its delivery.
inline void enumerate_orders(const fleet::EvrpInstance& instance, const std::vector<int>& part,
                             std::vector<int>& seq, std::vector<char>& picked,
                             std::vector<char>& done, double& best) {
    if (seq.size() == 2 * part.size() + 1) {
        std::vector<int> stops = seq;
        stops.push_back(instance.depot_end_stop());
        const fleet::RouteCheck check = fleet::validate_route(instance, stops, instance.battery_kwh);
        if (check.ok) best = std::min(best, check.route.energy_kwh);
        return;
    }
    for (std::size_t idx = 0; idx < part.size(); ++idx) {
        const int r = part[idx];
        if (!picked[idx]) {
            picked[idx] = 1;
            seq.push_back(instance.pickup_stop(r));
            enumerate_orders(instance, part, seq, picked, done, best);
            seq.pop_back();
            picked[idx] = 0;
        } else if (!done[idx]) {
            done[idx] = 1;
            seq.push_back(instance.delivery_stop(r));
            enumerate_orders(instance, part, seq, picked, done, best);
            seq.pop_back();
            done[idx] = 0;
        }
    }
}

inline double best_route_energy(const fleet::EvrpInstance& instance, const std::vector<int>& part) {
    std::vector<int> seq = {instance.depot_start_stop()};
    std::vector<char> picked(part.size(), 0), done(part.size(), 0);
    double best = kInf;
    enumerate_orders(instance, part, seq, picked, done, best);
    return best;
}

// Exact optimum by enumerating every partition of the requests into routes.
inline void enumerate_partitions(const fleet::EvrpInstance& instance, std::size_t next,
                                 std::vector<std::vector<int>>& parts, double& best) {
    if (next == instance.requests.size()) {
        double total = 0.0;
        for (const auto& part : parts) {
            const double e = best_route_energy(instance, part);
            if (e == kInf) return;
            total += e;
        }
        best = std::min(best, total);
        return;
    }
    for (std::size_t p = 0; p <= parts.size(); ++p) {
        if (p == parts.size()) parts.push_back({});
        parts[p].push_back(static_cast<int>(next));
        enumerate_partitions(instance, next + 1, parts, best);
        parts[p].pop_back();
        if (parts[p].empty()) parts.pop_back();
    }
}

inline std::optional<double> brute_force_optimum(const fleet::EvrpInstance& instance) {
    std::vector<std::vector<int>> parts;
    double best = kInf;
    enumerate_partitions(instance, 0, parts, best);
    if (best == kInf) return std::nullopt;
    return best;
}

}  // namespace oracles
