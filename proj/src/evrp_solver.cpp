#include "fleet/evrp_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "fleet/common.hpp"

namespace fleet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;

struct RouteCandidate {
    std::uint32_t mask = 0;
    double energy_kwh = 0.0;
    std::vector<int> stops;
};

struct Enumerator {
    const EvrpInstance& instance;
    long node_budget;
    std::chrono::steady_clock::time_point deadline;
    bool exhausted = false;
    std::unordered_map<std::uint32_t, RouteCandidate> best_by_mask;

    std::vector<int> stops;
    std::vector<char> picked;
    std::vector<char> onboard;

    Enumerator(const EvrpInstance& inst, const ExactLimits& limits)
        : instance(inst),
          node_budget(limits.node_limit),
          deadline(std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(limits.time_limit_s))) {
        picked.assign(instance.request_count(), 0);
        onboard.assign(instance.request_count(), 0);
    }

    void run() {
        stops = {instance.depot_start_stop()};
        extend(instance.depot_start_stop(), 0.0, 0, instance.battery_kwh, 0.0, 0);
    }

    // DFS over partial routes; prunes on window, capacity and battery, all of
    // which are permanent once violated at a visited stop.
    void extend(int at_stop, double service, int load, double battery, double energy, int aboard) {
        if (--node_budget <= 0 ||
            ((node_budget & 0x3FF) == 0 && std::chrono::steady_clock::now() > deadline)) {
            exhausted = true;
            return;
        }
        if (aboard == 0 && stops.size() > 1) close_route(at_stop, service, battery, energy);

        for (int r = 0; r < instance.request_count(); ++r) {
            if (exhausted) return;
            int next_stop;
            if (!picked[r]) {
                if (load + instance.requests[r].passengers > instance.seat_capacity) continue;
                next_stop = instance.pickup_stop(r);
            } else if (onboard[r]) {
                next_stop = instance.delivery_stop(r);
            } else {
                continue;
            }
            const double arrive = std::max(instance.stop_open_s(next_stop),
                                           service + instance.dwell_s +
                                               instance.leg_time_s(at_stop, next_stop));
            if (arrive > instance.stop_close_s(next_stop) + 1e-9) continue;
            const double leg = instance.leg_energy_kwh(at_stop, next_stop);
            const double battery_next = battery - leg;
            if (battery_next < instance.min_reserve_kwh - 1e-9) continue;

            const bool was_picked = picked[r] != 0;
            picked[r] = 1;
            onboard[r] = was_picked ? 0 : 1;
            stops.push_back(next_stop);
            extend(next_stop, arrive, load + instance.stop_load_delta(next_stop), battery_next,
                   energy + leg, aboard + (was_picked ? -1 : 1));
            stops.pop_back();
            onboard[r] = was_picked ? 1 : 0;
            picked[r] = was_picked ? 1 : 0;
        }
    }

    void close_route(int at_stop, double service, double battery, double energy) {
        const int end = instance.depot_end_stop();
        const double arrive = service + instance.dwell_s + instance.leg_time_s(at_stop, end);
        if (arrive > instance.time_upper_bound_s) return;
        const double leg = instance.leg_energy_kwh(at_stop, end);
        if (battery - leg < instance.min_reserve_kwh - 1e-9) return;

        std::uint32_t mask = 0;
        for (int r = 0; r < instance.request_count(); ++r)
            if (picked[r]) mask |= (1u << r);

        std::vector<int> full = stops;
        full.push_back(end);
        const double total = energy + leg;

        auto it = best_by_mask.find(mask);
        if (it == best_by_mask.end() || total < it->second.energy_kwh - kTieTol ||
            (std::abs(total - it->second.energy_kwh) <= kTieTol && full < it->second.stops)) {
            best_by_mask[mask] = {mask, total, std::move(full)};
        }
    }
};

EvrpSolution materialize(const EvrpInstance& instance,
                         const std::vector<const RouteCandidate*>& chosen) {
    EvrpSolution solution;
    for (const RouteCandidate* rc : chosen) {
        RouteCheck check = validate_route(instance, rc->stops, instance.battery_kwh);
        if (!check.ok) throw ModelError("solve_exact: enumerated route failed re-validation");
        solution.routes.push_back(std::move(check.route));
        solution.total_energy_kwh += rc->energy_kwh;
    }
    std::sort(solution.routes.begin(), solution.routes.end(), [](const Route& a, const Route& b) {
        return a.depart_s != b.depart_s ? a.depart_s < b.depart_s : a.stops < b.stops;
    });
    return solution;
}

// Exact set partition over request subsets; `choice` encodes the chosen
// candidate and predecessor mask for reconstruction.
std::vector<const RouteCandidate*> partition_min_cost(const std::vector<RouteCandidate>& candidates,
                                                      int m, int max_routes, double* cost_out) {
    (void)max_routes;  // cannot bind when >= m
    const std::uint32_t full = (1u << m) - 1;
    std::vector<double> dp(static_cast<std::size_t>(full) + 1, kInf);
    std::vector<std::int64_t> choice(static_cast<std::size_t>(full) + 1, -1);
    dp[0] = 0.0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (dp[mask] == kInf) continue;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const RouteCandidate& rc = candidates[c];
            if (rc.mask & mask) continue;
            const std::uint32_t next = mask | rc.mask;
            const double cost = dp[mask] + rc.energy_kwh;
            if (cost < dp[next] - kTieTol) {
                dp[next] = cost;
                choice[next] = (static_cast<std::int64_t>(c) << 32) |
                               static_cast<std::int64_t>(mask);
            }
        }
    }
    if (dp[full] == kInf) return {};

    std::vector<const RouteCandidate*> chosen;
    for (std::uint32_t mask = full; mask != 0;) {
        const std::int64_t ch = choice[mask];
        chosen.push_back(&candidates[static_cast<std::size_t>(ch >> 32)]);
        mask = static_cast<std::uint32_t>(ch & 0xFFFFFFFFll);
    }
    *cost_out = dp[full];
    return chosen;
}

// Count-exact variant used only when the route budget binds: state is
// (mask, routes used) so a cheaper-but-longer partition cannot shadow a
// budget-respecting one.
std::vector<const RouteCandidate*> partition_min_cost_bounded(
    const std::vector<RouteCandidate>& candidates, int m, int max_routes, double* cost_out) {
    const std::uint32_t full = (1u << m) - 1;
    const std::size_t states = static_cast<std::size_t>(full) + 1;
    std::vector<std::vector<double>> dp(max_routes + 1, std::vector<double>(states, kInf));
    std::vector<std::vector<std::int64_t>> choice(max_routes + 1,
                                                  std::vector<std::int64_t>(states, -1));
    dp[0][0] = 0.0;
    for (int k = 0; k < max_routes; ++k) {
        for (std::uint32_t mask = 0; mask < full; ++mask) {
            if (dp[k][mask] == kInf) continue;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                const RouteCandidate& rc = candidates[c];
                if (rc.mask & mask) continue;
                const std::uint32_t next = mask | rc.mask;
                const double cost = dp[k][mask] + rc.energy_kwh;
                if (cost < dp[k + 1][next] - kTieTol) {
                    dp[k + 1][next] = cost;
                    choice[k + 1][next] = (static_cast<std::int64_t>(c) << 32) |
                                          static_cast<std::int64_t>(mask);
                }
            }
        }
    }
    int best_k = -1;
    double best = kInf;
    for (int k = 1; k <= max_routes; ++k) {
        if (dp[k][full] < best - kTieTol) {
            best = dp[k][full];
            best_k = k;
        }
    }
    if (best_k < 0) return {};

    std::vector<const RouteCandidate*> chosen;
    std::uint32_t mask = full;
    for (int k = best_k; k > 0; --k) {
        const std::int64_t ch = choice[k][mask];
        chosen.push_back(&candidates[static_cast<std::size_t>(ch >> 32)]);
        mask = static_cast<std::uint32_t>(ch & 0xFFFFFFFFll);
    }
    *cost_out = best;
    return chosen;
}

}  // namespace

ExactResult solve_exact(const EvrpInstance& instance, const ExactLimits& limits) {
    instance.validate();
    const int m = instance.request_count();
    if (m > 20) throw ParameterError("solve_exact: more than 20 requests is beyond desk scale");

    ExactResult result;
    if (m == 0) {
        result.status = SolveStatus::optimal;
        return result;
    }

    Enumerator enumerator(instance, limits);
    enumerator.run();

    if (enumerator.exhausted) {
        result.status = SolveStatus::limit_exhausted;
        result.detail = "route enumeration budget exhausted";
        try {
            result.solution = solve_insertion_heuristic(instance, 0);
        } catch (const ModelError&) {
        }
        return result;
    }

    // A request that appears in no feasible route makes the instance infeasible.
    std::uint32_t coverable = 0;
    for (const auto& [mask, rc] : enumerator.best_by_mask) coverable |= mask;
    for (int r = 0; r < m; ++r) {
        if (!(coverable & (1u << r))) {
            result.status = SolveStatus::infeasible;
            result.detail = "request " + std::to_string(r) + " fits no feasible route";
            return result;
        }
    }

    std::vector<RouteCandidate> candidates;
    candidates.reserve(enumerator.best_by_mask.size());
    for (auto& [mask, rc] : enumerator.best_by_mask) candidates.push_back(std::move(rc));
    std::sort(candidates.begin(), candidates.end(),
              [](const RouteCandidate& a, const RouteCandidate& b) { return a.stops < b.stops; });

    const int max_routes = instance.max_routes > 0 ? instance.max_routes : m;
    double best_cost = kInf;
    std::vector<const RouteCandidate*> chosen =
        max_routes >= m ? partition_min_cost(candidates, m, max_routes, &best_cost)
                        : partition_min_cost_bounded(candidates, m, max_routes, &best_cost);

    if (chosen.empty()) {
        result.status = SolveStatus::infeasible;
        result.detail = "no feasible partition of requests into routes";
        return result;
    }
    result.status = SolveStatus::optimal;
    result.solution = materialize(instance, chosen);
    return result;
}

EvrpSolution solve_insertion_heuristic(const EvrpInstance& instance, std::uint64_t seed) {
    instance.validate();
    const int m = instance.request_count();

    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    Rng rng(derive_seed(seed, 0x1a5e));
    for (int i = m - 1; i > 0; --i)
        std::swap(order[i], order[static_cast<int>(rng.uniform_int(0, i))]);

    std::vector<std::vector<int>> routes;
    std::vector<double> route_energy;

    for (const int r : order) {
        double best_delta = kInf;
        int best_route = -1;
        std::vector<int> best_stops;

        auto consider = [&](int route_idx, const std::vector<int>& stops, double old_energy) {
            RouteCheck check = validate_route(instance, stops, instance.battery_kwh);
            if (!check.ok) return;
            const double delta = check.route.energy_kwh - old_energy;
            if (delta < best_delta - kTieTol) {
                best_delta = delta;
                best_route = route_idx;
                best_stops = stops;
            }
        };

        for (std::size_t ri = 0; ri < routes.size(); ++ri) {
            const std::vector<int>& base = routes[ri];
            const int len = static_cast<int>(base.size());
            for (int pp = 1; pp < len; ++pp) {
                for (int dpos = pp + 1; dpos <= len; ++dpos) {
                    std::vector<int> trial = base;
                    trial.insert(trial.begin() + pp, instance.pickup_stop(r));
                    trial.insert(trial.begin() + dpos, instance.delivery_stop(r));
                    consider(static_cast<int>(ri), trial, route_energy[ri]);
                }
            }
        }
        if (instance.max_routes <= 0 || static_cast<int>(routes.size()) < instance.max_routes) {
            std::vector<int> fresh = {instance.depot_start_stop(), instance.pickup_stop(r),
                                      instance.delivery_stop(r), instance.depot_end_stop()};
            consider(-1, fresh, 0.0);
        }

        if (best_stops.empty())
            throw ModelError("insertion heuristic: request " + std::to_string(r) +
                             " fits no feasible route");
        if (best_route < 0) {
            routes.push_back(best_stops);
            route_energy.push_back(best_delta);
        } else {
            route_energy[static_cast<std::size_t>(best_route)] += best_delta;
            routes[static_cast<std::size_t>(best_route)] = best_stops;
        }
    }

    EvrpSolution solution;
    for (const auto& stops : routes) {
        RouteCheck check = validate_route(instance, stops, instance.battery_kwh);
        solution.routes.push_back(std::move(check.route));
        solution.total_energy_kwh += solution.routes.back().energy_kwh;
    }
    std::sort(solution.routes.begin(), solution.routes.end(), [](const Route& a, const Route& b) {
        return a.depart_s != b.depart_s ? a.depart_s < b.depart_s : a.stops < b.stops;
    });
    return solution;
}

}  // namespace fleet
