#include "fleet/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fleet {

int unavailability(const RouteTask& task, int interval) {
    return (interval >= task.start_interval && interval <= task.end_interval) ? 1 : 0;
}

double SchedulingInstance::boundary_tol_kwh() const {
    if (soc_boundary_tol_kwh > 0.0) return soc_boundary_tol_kwh;
    double q = 0.0;
    for (const Station& s : stations) q = std::max(q, s.quantum_kwh(horizon.interval_hours()));
    return q;
}

void SchedulingInstance::validate() const {
    if (horizon.intervals < 1) throw ParameterError("scheduling: horizon needs at least one interval");
    if (!(horizon.interval_s > 0.0)) throw ParameterError("scheduling: interval length must be positive");
    if (vehicles.empty()) throw ParameterError("scheduling: no vehicles");
    for (const VehicleSpec& v : vehicles) {
        if (!(v.battery_kwh > 0.0) || v.soc_min_kwh < 0.0 || v.soc_max_kwh > v.battery_kwh ||
            v.soc_min_kwh >= v.soc_max_kwh)
            throw ParameterError("scheduling: vehicle '" + v.id + "' has inconsistent SOC limits");
    }
    for (const Station& s : stations) {
        if (!(s.rate_kw > 0.0) || !(s.efficiency > 0.0) || s.efficiency > 1.0)
            throw ParameterError("scheduling: station '" + s.id + "' rate/efficiency out of range");
        if (s.tariff.size() != horizon.intervals || s.availability.size() != horizon.intervals)
            throw ParameterError("scheduling: station '" + s.id + "' series length != horizon");
        if ((s.availability < 0).any())
            throw ParameterError("scheduling: station '" + s.id + "' negative availability");
        if (s.reroute_intervals < 0 || (s.reroute_intervals == 0 && s.reroute_kwh != 0.0))
            throw ParameterError("scheduling: station '" + s.id + "' reroute travel inconsistent");
    }
    for (const RouteTask& t : tasks) {
        if (t.start_interval > t.end_interval || t.start_interval < 0 ||
            t.end_interval >= horizon.intervals)
            throw ParameterError("scheduling: task interval span out of horizon");
        if (t.energy_kwh.size() !=
            static_cast<std::size_t>(t.end_interval - t.start_interval + 1))
            throw ParameterError("scheduling: task energy series length mismatch");
        double sum = 0.0;
        for (double e : t.energy_kwh) sum += e;
        if (std::abs(sum - t.total_kwh) > 1e-6)
            throw ParameterError("scheduling: task energy series does not add up");
    }
    if (use_degradation) degradation.validate();
}

int Schedule::vehicle_of(int task) const {
    int found = -1;
    for (std::size_t k = 0; k < assign.size(); ++k) {
        if (assign[k][static_cast<std::size_t>(task)]) {
            if (found >= 0) return -1;
            found = static_cast<int>(k);
        }
    }
    return found;
}

bool Schedule::occupied(const SchedulingInstance& instance, int vehicle, int interval) const {
    for (int s = 0; s < instance.task_count(); ++s)
        if (assign[static_cast<std::size_t>(vehicle)][static_cast<std::size_t>(s)] &&
            unavailability(instance.tasks[static_cast<std::size_t>(s)], interval))
            return true;
    return false;
}

Schedule empty_schedule(const SchedulingInstance& instance) {
    Schedule s;
    s.assign.assign(instance.vehicle_count(),
                    std::vector<std::uint8_t>(instance.task_count(), 0));
    s.actions.assign(instance.vehicle_count(),
                     std::vector<ChargeAction>(instance.horizon.intervals));
    return s;
}

namespace {

struct StationRun {
    int station = -1;
    int first = 0;
    int last = 0;
};

// Maximal stretches of consecutive actions at one station.
std::vector<StationRun> station_runs(const std::vector<ChargeAction>& actions) {
    std::vector<StationRun> runs;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (actions[i].dir == 0) continue;
        const int x = actions[i].station;
        if (!runs.empty() && runs.back().station == x &&
            runs.back().last == static_cast<int>(i) - 1) {
            runs.back().last = static_cast<int>(i);
        } else {
            runs.push_back({x, static_cast<int>(i), static_cast<int>(i)});
        }
    }
    return runs;
}

}  // namespace

SimDetail simulate_soc(const SchedulingInstance& instance, const Schedule& schedule) {
    const int n = instance.horizon.intervals;
    const int fleet = instance.vehicle_count();
    const double h = instance.horizon.interval_hours();

    SimDetail detail;
    detail.trace.kwh.resize(fleet, n + 1);
    detail.charge_power_kw.assign(fleet, {});
    detail.driving_hours.assign(fleet, 0.0);
    detail.action_hours.assign(fleet, 0.0);

    for (int k = 0; k < fleet; ++k) {
        const std::vector<ChargeAction>& acts = schedule.actions[static_cast<std::size_t>(k)];

        // Reroute travel drains are spread evenly over the approach and
        // return legs of each visit to a remote station.
        std::vector<double> travel_drain(static_cast<std::size_t>(n), 0.0);
        for (const StationRun& run : station_runs(acts)) {
            if (run.station < 0 || run.station >= instance.station_count())
                throw ScheduleError("simulate_soc: unknown station index " +
                                    std::to_string(run.station));
            const Station& st = instance.stations[static_cast<std::size_t>(run.station)];
            if (st.reroute_intervals == 0) continue;
            const double share = st.reroute_kwh / (2.0 * st.reroute_intervals);
            for (int d = 1; d <= st.reroute_intervals; ++d) {
                const int before = run.first - d;
                const int after = run.last + d;
                if (before >= 0) travel_drain[static_cast<std::size_t>(before)] += share;
                if (after < n) travel_drain[static_cast<std::size_t>(after)] += share;
            }
        }

        double soc = instance.vehicles[static_cast<std::size_t>(k)].soc0_kwh;
        detail.trace.kwh(k, 0) = soc;
        for (int i = 0; i < n; ++i) {
            const ChargeAction act = acts[static_cast<std::size_t>(i)];
            if (act.dir != 0) {
                if (act.station < 0 || act.station >= instance.station_count())
                    throw ScheduleError("simulate_soc: unknown station index " +
                                        std::to_string(act.station));
                const Station& st = instance.stations[static_cast<std::size_t>(act.station)];
                if (act.dir > 0)
                    soc += st.efficiency * st.rate_kw * h;
                else
                    soc -= st.rate_kw * h / st.efficiency;  // efficiency hits both directions
                detail.charge_power_kw[static_cast<std::size_t>(k)].push_back(st.rate_kw);
                detail.action_hours[static_cast<std::size_t>(k)] += h;
            }
            for (int s = 0; s < instance.task_count(); ++s) {
                if (schedule.assign[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)])
                    soc -= instance.tasks[static_cast<std::size_t>(s)].energy_at(i);
            }
            if (schedule.occupied(instance, k, i))
                detail.driving_hours[static_cast<std::size_t>(k)] += h;
            soc -= travel_drain[static_cast<std::size_t>(i)];
            detail.trace.kwh(k, i + 1) = soc;
        }
    }
    return detail;
}

std::vector<ScheduleViolation> check_schedule(const SchedulingInstance& instance,
                                              const Schedule& schedule) {
    using Kind = ScheduleViolation::Kind;
    std::vector<ScheduleViolation> out;
    const int n = instance.horizon.intervals;
    const int fleet = instance.vehicle_count();

    if (!schedule.structure_ok)
        out.push_back({Kind::structure, -1, -1, schedule.structure_note});

    for (int s = 0; s < instance.task_count(); ++s) {
        if (schedule.vehicle_of(s) < 0)
            out.push_back({Kind::assignment_cardinality, -1, -1,
                           "task " + std::to_string(s) + " not assigned to exactly one vehicle"});
    }

    for (int k = 0; k < fleet; ++k) {
        for (int i = 0; i < n; ++i) {
            int active = 0;
            for (int s = 0; s < instance.task_count(); ++s)
                if (schedule.assign[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)])
                    active += unavailability(instance.tasks[static_cast<std::size_t>(s)], i);
            if (active > 1) {
                out.push_back({Kind::route_overlap, k, i, "overlapping route tasks"});
                break;  // one report per vehicle is enough
            }
        }
    }

    for (int k = 0; k < fleet; ++k) {
        const auto& acts = schedule.actions[static_cast<std::size_t>(k)];
        for (int i = 0; i < n; ++i) {
            const ChargeAction act = acts[static_cast<std::size_t>(i)];
            if (act.dir == 0) continue;
            if (act.station < 0 || act.station >= instance.station_count()) {
                out.push_back({Kind::invalid_action, k, i, "unknown station"});
                continue;
            }
            const Station& st = instance.stations[static_cast<std::size_t>(act.station)];
            if (act.dir < 0 && !st.allow_discharge)
                out.push_back({Kind::invalid_action, k, i,
                               "discharge at station '" + st.id + "' not allowed"});
            if (schedule.occupied(instance, k, i))
                out.push_back({Kind::action_while_driving, k, i,
                               "charging action while on a route"});
        }

        // Reroutes need idle, action-free travel intervals on both sides.
        for (const StationRun& run : station_runs(acts)) {
            if (run.station < 0 || run.station >= instance.station_count()) continue;
            const Station& st = instance.stations[static_cast<std::size_t>(run.station)];
            if (st.reroute_intervals == 0) continue;
            if (run.first - st.reroute_intervals < 0 || run.last + st.reroute_intervals >= n) {
                out.push_back({Kind::reroute_horizon, k, run.first,
                               "reroute travel does not fit inside the horizon"});
                continue;
            }
            for (int d = 1; d <= st.reroute_intervals; ++d) {
                for (const int j : {run.first - d, run.last + d}) {
                    const ChargeAction other = acts[static_cast<std::size_t>(j)];
                    const bool busy_other_station = other.dir != 0 && other.station != run.station;
                    if (schedule.occupied(instance, k, j) || busy_other_station)
                        out.push_back({Kind::reroute_busy, k, j,
                                       "vehicle not free to travel to '" + st.id + "'"});
                }
            }
        }
    }

    for (int x = 0; x < instance.station_count(); ++x) {
        const Station& st = instance.stations[static_cast<std::size_t>(x)];
        for (int i = 0; i < n; ++i) {
            int head = 0;
            for (int k = 0; k < fleet; ++k) {
                const ChargeAction act = schedule.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
                if (act.dir != 0 && act.station == x) ++head;
            }
            if (head > st.availability(i))
                out.push_back({Kind::station_capacity, -1, i,
                               "station '" + st.id + "' over capacity"});
        }
    }

    bool sim_ok = true;
    for (int k = 0; k < fleet && sim_ok; ++k)
        for (const ChargeAction act : schedule.actions[static_cast<std::size_t>(k)])
            if (act.dir != 0 && (act.station < 0 || act.station >= instance.station_count()))
                sim_ok = false;
    if (sim_ok) {
        const SimDetail detail = simulate_soc(instance, schedule);
        const double tol = instance.boundary_tol_kwh();
        for (int k = 0; k < fleet; ++k) {
            const VehicleSpec& v = instance.vehicles[static_cast<std::size_t>(k)];
            if (std::abs(detail.trace.kwh(k, 0) - v.soc_max_kwh) > 1e-9)
                out.push_back({Kind::soc_boundary_start, k, 0, "horizon must start fully charged"});
            for (int i = 0; i <= n; ++i) {
                const double soc = detail.trace.kwh(k, i);
                if (soc < v.soc_min_kwh - 1e-9) {
                    out.push_back({Kind::soc_low, k, i, "SOC below minimum"});
                    break;
                }
                if (soc > v.soc_max_kwh + 1e-9) {
                    out.push_back({Kind::soc_high, k, i, "SOC above maximum"});
                    break;
                }
            }
            if (detail.trace.kwh(k, n) < v.soc_max_kwh - tol - 1e-9)
                out.push_back({Kind::soc_boundary_end, k, n,
                               "final SOC more than one charge quantum short of full"});
        }
    }
    return out;
}

CostBreakdown evaluate_cost(const SchedulingInstance& instance, const Schedule& schedule) {
    CostBreakdown cost;
    const std::vector<ScheduleViolation> violations = check_schedule(instance, schedule);
    for (const ScheduleViolation& v : violations) {
        if (v.kind == ScheduleViolation::Kind::invalid_action) {
            cost.total = std::numeric_limits<double>::infinity();
            return cost;
        }
    }
    const SimDetail detail = simulate_soc(instance, schedule);
    const int n = instance.horizon.intervals;

    for (int k = 0; k < instance.vehicle_count(); ++k) {
        for (int i = 0; i < n; ++i) {
            const ChargeAction act = schedule.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            if (act.dir == 0) continue;
            const double price = instance.stations[static_cast<std::size_t>(act.station)].tariff(i);
            cost.tariff += act.dir > 0 ? price : -price;  // discharge earns the local tariff
        }
    }

    if (instance.use_degradation) {
        for (int k = 0; k < instance.vehicle_count(); ++k) {
            const double t_max =
                instance.horizon.hours() - detail.driving_hours[static_cast<std::size_t>(k)];
            DegradationReport report = degradation_cost(
                detail.trace.kwh.row(k).transpose().array(),
                instance.vehicles[static_cast<std::size_t>(k)].battery_kwh,
                detail.charge_power_kw[static_cast<std::size_t>(k)],
                instance.horizon.interval_hours(), t_max, instance.degradation);
            cost.degradation += report.cost;
            cost.vehicle_degradation.push_back(report);
        }
    }

    cost.feasible = violations.empty();
    cost.total = cost.feasible ? cost.tariff + cost.degradation
                               : std::numeric_limits<double>::infinity();
    return cost;
}

}  // namespace fleet
