#pragma once

#include <optional>

#include "fleet/encoding.hpp"

namespace fleet {

/// Donor vector of the binary differential operator: x1 OR (x2 XOR x3).
/// The XOR is the binary difference of two individuals, the OR adds it onto
/// the base vector; every bit set in x1 stays set.
Bits de_mutate(const Bits& x1, const Bits& x2, const Bits& x3);

/// Run length of the exponential crossover: starts at 1 and keeps growing
/// while a uniform draw stays below the crossover rate, capped at length+1.
int draw_run_length(Rng& rng, double crossover_rate, int length);

/// Exponential crossover: copy a run of donor positions (wrapping around the
/// end) into a copy of the target. A run length of 1 copies nothing.
Bits de_crossover(const Bits& target, const Bits& donor, double crossover_rate, Rng& rng);

struct DeParams {
    int population = 0;        // 0 = ten times the vector length
    double crossover_rate = 0.3;
    int generations = 200;
    std::uint64_t seed = 1;
    int init_budget_factor = 50;  // structured random draws allowed per slot
};

struct DeResult {
    Schedule best;
    CostBreakdown cost;
    std::vector<double> best_cost_series;  // per generation, non-increasing
    bool greedy_seed_won = false;          // final best is the injected seed
    int init_random_feasible = 0;          // rejection-sampled individuals accepted
};

/// Deterministic first-fit schedule: routes go to the first free vehicle,
/// charging happens at the depot-most station whenever the vehicle is idle
/// and a full quantum fits. Empty when no such schedule is feasible.
std::optional<Schedule> greedy_schedule(const SchedulingInstance& instance);

/// Binary differential evolution over the encoded schedule.
///
/// The population is filled by rejection sampling of structured random
/// schedules plus one injected greedy-feasible individual (random mutants of
/// it fill any shortfall); infeasible trial vectors cost +infinity, and a
/// trial replaces its target when its cost is less than or equal. Throws
/// InitError when not even the greedy construction is feasible.
DeResult de_optimize(const SchedulingInstance& instance, const DeParams& params);

}  // namespace fleet
