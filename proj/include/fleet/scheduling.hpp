#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

#include "fleet/degradation.hpp"

namespace fleet {

/// Discretized planning window (half-hour intervals by default).
struct Horizon {
    int intervals = 48;
    double interval_s = 1800.0;
    std::string start_clock = "07:00";  // wall-clock label of interval 0

    double interval_hours() const { return interval_s / kSecondsPerHour; }
    double hours() const { return intervals * interval_hours(); }
};

/// One route placed on the horizon: occupied intervals and the energy drawn
/// in each of them.
struct RouteTask {
    int id = 0;
    int start_interval = 0;
    int end_interval = 0;
    std::vector<double> energy_kwh;  // one entry per interval in [start, end]
    double total_kwh = 0.0;

    double energy_at(int interval) const {
        if (interval < start_interval || interval > end_interval) return 0.0;
        return energy_kwh[static_cast<std::size_t>(interval - start_interval)];
    }
};

/// 1 while the task keeps its vehicle busy during `interval`, else 0.
int unavailability(const RouteTask& task, int interval);

struct Station {
    std::string id;
    double rate_kw = 3.0;
    double efficiency = 0.9;
    Eigen::ArrayXd tariff;        // money per charging interval, length N
    Eigen::ArrayXi availability;  // free spots per interval, length N
    int reroute_intervals = 0;    // travel time depot -> station, in intervals
    double reroute_kwh = 0.0;     // round-trip travel energy
    bool allow_discharge = false;

    double quantum_kwh(double interval_hours) const { return efficiency * rate_kw * interval_hours; }
};

struct VehicleSpec {
    std::string id;
    double battery_kwh = 16.0;
    double soc_min_kwh = 1.6;
    double soc_max_kwh = 16.0;
    double soc0_kwh = 16.0;
};

struct SchedulingInstance {
    Horizon horizon;
    std::vector<VehicleSpec> vehicles;
    std::vector<Station> stations;
    std::vector<RouteTask> tasks;
    bool use_degradation = true;
    DegradationParams degradation;
    // End-of-horizon tolerance: charge comes in station-sized quanta, so the
    // trace can only return to soc_max within one quantum. 0 = largest
    // quantum over all stations.
    double soc_boundary_tol_kwh = 0.0;

    int vehicle_count() const { return static_cast<int>(vehicles.size()); }
    int station_count() const { return static_cast<int>(stations.size()); }
    int task_count() const { return static_cast<int>(tasks.size()); }
    double boundary_tol_kwh() const;
    void validate() const;
};

struct ChargeAction {
    std::int8_t dir = 0;       // +1 charge, -1 discharge, 0 idle
    std::int16_t station = -1;
};

/// Route-to-vehicle assignment plus per-interval charging actions. The raw
/// assignment bits are kept so that structurally invalid decodes can be
/// inspected rather than silently repaired.
struct Schedule {
    std::vector<std::vector<std::uint8_t>> assign;        // [vehicle][task]
    std::vector<std::vector<ChargeAction>> actions;       // [vehicle][interval]
    bool structure_ok = true;
    std::string structure_note;

    /// Vehicle the task is assigned to, or -1 unless exactly one bit is set.
    int vehicle_of(int task) const;
    bool occupied(const SchedulingInstance& instance, int vehicle, int interval) const;
};

Schedule empty_schedule(const SchedulingInstance& instance);

struct SocTrace {
    Eigen::MatrixXd kwh;  // vehicles x (intervals + 1)
};

/// Per-vehicle byproducts of a simulation that the cost model needs.
struct SimDetail {
    SocTrace trace;
    std::vector<std::vector<double>> charge_power_kw;  // |power| per acting interval
    std::vector<double> driving_hours;
    std::vector<double> action_hours;
};

/// Run the SOC recurrence: charge adds efficiency*rate*hours, discharge
/// removes rate*hours/efficiency, assigned tasks and reroute travel subtract
/// their energy. Throws ScheduleError on an unknown station reference.
SimDetail simulate_soc(const SchedulingInstance& instance, const Schedule& schedule);

struct ScheduleViolation {
    enum class Kind {
        structure,
        assignment_cardinality,
        route_overlap,
        action_while_driving,
        invalid_action,
        soc_low,
        soc_high,
        soc_boundary_start,
        soc_boundary_end,
        reroute_busy,
        reroute_horizon,
        station_capacity,
    };
    Kind kind;
    int vehicle = -1;
    int interval = -1;
    std::string detail;
};

/// All constraint checks; empty result means the schedule is feasible.
std::vector<ScheduleViolation> check_schedule(const SchedulingInstance& instance,
                                              const Schedule& schedule);

struct CostBreakdown {
    double tariff = 0.0;       // charge cost minus discharge revenue
    double degradation = 0.0;  // summed over the fleet (0 when disabled)
    double total = 0.0;        // +infinity when the schedule is infeasible
    bool feasible = false;
    std::vector<DegradationReport> vehicle_degradation;
};

CostBreakdown evaluate_cost(const SchedulingInstance& instance, const Schedule& schedule);

}  // namespace fleet
