#pragma once

#include <cstdint>

#include "fleet/evrp.hpp"

namespace fleet {

struct ExactLimits {
    long node_limit = 20'000'000;  // DFS nodes while enumerating routes
    double time_limit_s = 120.0;
};

enum class SolveStatus { optimal, limit_exhausted, infeasible };

struct ExactResult {
    SolveStatus status = SolveStatus::infeasible;
    EvrpSolution solution;       // optimum, or the incumbent when limits ran out
    std::string detail;          // names the unserveable request on infeasibility
};

/// Provably minimum-energy solution: enumerates every feasible depot-to-depot
/// stop sequence (deduplicated to the cheapest per request set) and solves
/// the exact set-partition over them. Desk scale: at most 20 requests.
ExactResult solve_exact(const EvrpInstance& instance, const ExactLimits& limits = {});

/// Cheapest-feasible-insertion heuristic; request order is shuffled by
/// `seed`, so runs with equal seeds are identical. Throws ModelError when a
/// request fits no route at all.
EvrpSolution solve_insertion_heuristic(const EvrpInstance& instance, std::uint64_t seed);

}  // namespace fleet
