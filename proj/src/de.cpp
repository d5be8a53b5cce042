#include "fleet/de.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fleet {

Bits de_mutate(const Bits& x1, const Bits& x2, const Bits& x3) {
    if (x1.size() != x2.size() || x1.size() != x3.size())
        throw ParameterError("de_mutate: vector length mismatch");
    Bits out(x1.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = static_cast<std::uint8_t>(x1[j] | (x2[j] ^ x3[j]));
    return out;
}

int draw_run_length(Rng& rng, double crossover_rate, int length) {
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
        throw ParameterError("crossover rate must be in [0, 1]");
    int run = 0;
    do {
        ++run;
    } while (rng.uniform() < crossover_rate && run <= length);
    return run;
}

Bits de_crossover(const Bits& target, const Bits& donor, double crossover_rate, Rng& rng) {
    if (target.size() != donor.size()) throw ParameterError("de_crossover: vector length mismatch");
    const int m = static_cast<int>(target.size());
    Bits trial = target;
    if (m == 0) return trial;
    const int start = static_cast<int>(rng.uniform_int(1, m));  // 1-based
    const int run = draw_run_length(rng, crossover_rate, m);
    const int copies = std::min(run - 1, m);
    for (int j = 1; j <= copies; ++j) {
        const int pos = (start - 1 + j) % m;
        trial[static_cast<std::size_t>(pos)] = donor[static_cast<std::size_t>(pos)];
    }
    return trial;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> depot_stations(const SchedulingInstance& instance) {
    std::vector<int> out;
    for (int x = 0; x < instance.station_count(); ++x)
        if (instance.stations[static_cast<std::size_t>(x)].reroute_intervals == 0) out.push_back(x);
    return out;
}

// Random schedule in the same shape as the greedy one: a valid assignment by
// construction, charge actions scattered over idle intervals. Feasibility is
// left to the caller's rejection loop.
Schedule sample_schedule(const SchedulingInstance& instance, const std::vector<int>& depots,
                         Rng& rng) {
    Schedule s = empty_schedule(instance);
    const int fleet = instance.vehicle_count();
    const int n = instance.horizon.intervals;
    const double h = instance.horizon.interval_hours();

    for (int t = 0; t < instance.task_count(); ++t)
        s.assign[static_cast<std::size_t>(rng.uniform_int(0, fleet - 1))][static_cast<std::size_t>(t)] = 1;

    for (int k = 0; k < fleet; ++k) {
        double need = 0.0;
        for (int t = 0; t < instance.task_count(); ++t)
            if (s.assign[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)])
                need += instance.tasks[static_cast<std::size_t>(t)].total_kwh;

        std::vector<int> idle;
        for (int i = 0; i < n; ++i)
            if (!s.occupied(instance, k, i)) idle.push_back(i);
        for (int i = static_cast<int>(idle.size()) - 1; i > 0; --i)
            std::swap(idle[static_cast<std::size_t>(i)],
                      idle[static_cast<std::size_t>(rng.uniform_int(0, i))]);

        std::size_t cursor = 0;
        while (need > 1e-9 && cursor < idle.size() && !depots.empty()) {
            const int x = depots[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(depots.size()) - 1))];
            s.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(idle[cursor++])] = {
                +1, static_cast<std::int16_t>(x)};
            need -= instance.stations[static_cast<std::size_t>(x)].quantum_kwh(h);
        }
    }
    return s;
}

}  // namespace

std::optional<Schedule> greedy_schedule(const SchedulingInstance& instance) {
    Schedule s = empty_schedule(instance);
    const int fleet = instance.vehicle_count();
    const int n = instance.horizon.intervals;
    const double h = instance.horizon.interval_hours();

    // First-fit assignment in start order, balancing route counts so gaps
    // stay available for charging.
    std::vector<int> order(instance.tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const RouteTask& ta = instance.tasks[static_cast<std::size_t>(a)];
        const RouteTask& tb = instance.tasks[static_cast<std::size_t>(b)];
        return ta.start_interval != tb.start_interval ? ta.start_interval < tb.start_interval
                                                      : ta.id < tb.id;
    });
    std::vector<int> load(fleet, 0);
    for (const int t : order) {
        const RouteTask& task = instance.tasks[static_cast<std::size_t>(t)];
        int pick = -1;
        for (int k = 0; k < fleet; ++k) {
            bool clash = false;
            for (int i = task.start_interval; i <= task.end_interval && !clash; ++i)
                clash = s.occupied(instance, k, i);
            if (clash) continue;
            if (pick < 0 || load[static_cast<std::size_t>(k)] < load[static_cast<std::size_t>(pick)])
                pick = k;
        }
        if (pick < 0) return std::nullopt;
        s.assign[static_cast<std::size_t>(pick)][static_cast<std::size_t>(t)] = 1;
        ++load[static_cast<std::size_t>(pick)];
    }

    const std::vector<int> depots = depot_stations(instance);
    std::vector<int> spots_used(static_cast<std::size_t>(n) * instance.station_count(), 0);
    std::vector<double> soc;
    for (const VehicleSpec& v : instance.vehicles) soc.push_back(v.soc0_kwh);

    // Charge whenever idle and a full quantum fits; this maximizes the final
    // SOC, so if it misses the end condition nothing else will meet it with
    // depot charging alone.
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < fleet; ++k) {
            const VehicleSpec& v = instance.vehicles[static_cast<std::size_t>(k)];
            if (!s.occupied(instance, k, i)) {
                for (const int x : depots) {
                    const Station& st = instance.stations[static_cast<std::size_t>(x)];
                    const double quantum = st.quantum_kwh(h);
                    int& used = spots_used[static_cast<std::size_t>(i) * instance.station_count() + x];
                    if (used < st.availability(i) &&
                        soc[static_cast<std::size_t>(k)] + quantum <= v.soc_max_kwh + 1e-9) {
                        s.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = {
                            +1, static_cast<std::int16_t>(x)};
                        soc[static_cast<std::size_t>(k)] += quantum;
                        ++used;
                        break;
                    }
                }
            }
            for (int t = 0; t < instance.task_count(); ++t)
                if (s.assign[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)])
                    soc[static_cast<std::size_t>(k)] -=
                        instance.tasks[static_cast<std::size_t>(t)].energy_at(i);
        }
    }

    if (!check_schedule(instance, s).empty()) return std::nullopt;
    return s;
}

DeResult de_optimize(const SchedulingInstance& instance, const DeParams& params) {
    instance.validate();
    const EncodingLayout layout = encoding_layout(instance);
    const int m_v = static_cast<int>(layout.length());
    const int np = std::max(params.population > 0 ? params.population : 10 * m_v, 6);

    std::optional<Schedule> greedy = greedy_schedule(instance);
    if (!greedy)
        throw InitError(
            "de_optimize: no feasible schedule found by greedy construction; "
            "check route load vs charging capacity and the end-of-horizon condition");

    auto fitness = [&](const Bits& bits) { return evaluate_cost(instance, decode(instance, bits)); };

    std::vector<Bits> population;
    population.reserve(np);
    std::vector<double> cost(static_cast<std::size_t>(np), kInf);

    DeResult result;
    population.push_back(encode(instance, *greedy));
    cost[0] = fitness(population[0]).total;

    const std::vector<int> depots = depot_stations(instance);
    long budget = static_cast<long>(params.init_budget_factor) * np;
    Rng init_rng(derive_seed(params.seed, 0xfeed));
    while (static_cast<int>(population.size()) < np && budget-- > 0) {
        const Schedule candidate = sample_schedule(instance, depots, init_rng);
        const CostBreakdown cb = evaluate_cost(instance, candidate);
        if (!cb.feasible) continue;  // rejected, never enters the population
        cost[population.size()] = cb.total;
        population.push_back(encode(instance, candidate));
        ++result.init_random_feasible;
    }
    // Shortfall: perturbed copies of the greedy seed keep the population full
    // without admitting infeasible individuals.
    while (static_cast<int>(population.size()) < np) {
        Bits bits = population[0];
        const int flips = static_cast<int>(init_rng.uniform_int(1, std::max(1, m_v / 16)));
        for (int f = 0; f < flips; ++f) {
            const std::size_t j = static_cast<std::size_t>(init_rng.uniform_int(0, m_v - 1));
            bits[j] ^= 1;
        }
        const CostBreakdown cb = fitness(bits);
        if (!cb.feasible && budget-- > 0) continue;
        cost[population.size()] = cb.total;
        population.push_back(std::move(bits));
    }

    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < population.size(); ++i)
        if (cost[i] < cost[best_idx]) best_idx = i;
    Bits best_bits = population[best_idx];
    double best_cost = cost[best_idx];
    result.best_cost_series.push_back(best_cost);

    std::vector<Bits> next = population;
    for (int g = 1; g <= params.generations; ++g) {
        for (int i = 0; i < np; ++i) {
            Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(i)));
            int r1, r2, r3;
            do r1 = static_cast<int>(rng.uniform_int(0, np - 1)); while (r1 == i);
            do r2 = static_cast<int>(rng.uniform_int(0, np - 1)); while (r2 == i || r2 == r1);
            do r3 = static_cast<int>(rng.uniform_int(0, np - 1)); while (r3 == i || r3 == r1 || r3 == r2);

            const Bits donor = de_mutate(population[static_cast<std::size_t>(r1)],
                                         population[static_cast<std::size_t>(r2)],
                                         population[static_cast<std::size_t>(r3)]);
            Bits trial = de_crossover(population[static_cast<std::size_t>(i)], donor,
                                      params.crossover_rate, rng);
            const double trial_cost = fitness(trial).total;
            if (trial_cost <= cost[static_cast<std::size_t>(i)]) {
                next[static_cast<std::size_t>(i)] = std::move(trial);
                cost[static_cast<std::size_t>(i)] = trial_cost;
            } else {
                next[static_cast<std::size_t>(i)] = population[static_cast<std::size_t>(i)];
            }
        }
        std::swap(population, next);
        for (std::size_t i = 0; i < population.size(); ++i) {
            if (cost[i] < best_cost) {
                best_cost = cost[i];
                best_bits = population[i];
            }
        }
        result.best_cost_series.push_back(best_cost);
    }

    result.greedy_seed_won = false;
    {
        const Bits greedy_bits = encode(instance, *greedy);
        result.greedy_seed_won = (best_bits == greedy_bits);
    }
    result.best = decode(instance, best_bits);
    result.cost = evaluate_cost(instance, result.best);
    return result;
}

}  // namespace fleet
