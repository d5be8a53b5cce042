#pragma once

#include <optional>

#include "fleet/de.hpp"
#include "fleet/evrp_solver.hpp"
#include "fleet/io.hpp"

namespace fleet {

/// Everything one end-to-end run needs: fleet, stations with expanded tariff
/// and availability series, routing inputs (table mode) or precomputed route
/// tasks, optimizer settings and the reproducibility seed.
struct ScenarioConfig {
    std::string name;
    std::string hash;  // of the canonical JSON this config was loaded from
    std::uint64_t seed = 1;
    Horizon horizon;
    std::vector<VehicleSpec> vehicles;
    std::vector<Station> stations;
    bool use_degradation = true;
    bool allow_discharge = true;  // gates every station's discharge flag
    bool clamp_regen = false;
    DegradationParams degradation;
    DeParams de;
    double passenger_fee = 0.0;  // recorded in reports, never optimized

    std::optional<EvrpInstance> routing;  // table-mode routing inputs
    std::vector<RouteTask> tasks;         // used when no routing block is given

    // Synthetic speed-log stage (filter comparison) when non-empty.
    std::vector<SynthSegment> gps_segments;
    double gps_rate_hz = 10.0;
    int sg_window = 21;
    int sg_order = 3;
    double kalman_process_var = 0.25;
    double kalman_meas_var = 1.0;

    /// The scheduling view: stations with the discharge gate applied.
    SchedulingInstance scheduling_instance(std::vector<RouteTask> with_tasks) const;
};

ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Place solved routes on the horizon; each task drains its route's energy
/// proportionally to the time spent in every overlapped interval.
std::vector<RouteTask> route_tasks_from_solution(const EvrpSolution& solution,
                                                 const Horizon& horizon);

nlohmann::json tasks_to_json(const std::vector<RouteTask>& tasks);
std::vector<RouteTask> tasks_from_json(const nlohmann::json& j);

struct FilterComparison {
    double raw_rms_mps = 0.0;
    double savgol_rms_mps = 0.0;
    double kalman_rms_mps = 0.0;
};

struct RunReport {
    std::string scenario_name;
    std::uint64_t seed = 0;
    std::string config_hash;

    std::optional<FilterComparison> filter_comparison;
    std::optional<EvrpSolution> solution;
    std::vector<RouteTask> tasks;
    Schedule schedule;
    CostBreakdown cost;
    std::vector<DegradationReport> vehicle_degradation;  // always computed for reporting
    std::vector<double> convergence;
    bool greedy_seed_won = false;
    SocTrace trace;
    double fare_revenue = 0.0;

    // Console diagnostics only; deliberately kept out of the emitted files.
    std::vector<std::pair<std::string, double>> stage_seconds;
};

/// Full pipeline: filter comparison, routing (table mode), task placement,
/// charge scheduling, degradation accounting. Stage failures surface as
/// exceptions naming the stage.
RunReport run_scenario(const ScenarioConfig& config);

/// Deterministic file set: run_report.json, solution.json, soc_trace.csv,
/// cost_breakdown.csv, convergence.csv, summary.txt.
void emit_report(const ScenarioConfig& config, const RunReport& report,
                 const std::filesystem::path& out_dir);

nlohmann::json report_to_json(const ScenarioConfig& config, const RunReport& report);

/// FNV-1a over the canonical JSON dump; ties a report to its exact inputs.
std::string config_hash(const nlohmann::json& canonical);

}  // namespace fleet
