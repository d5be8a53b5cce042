#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "fleet/filters.hpp"
#include "fleet/scenario.hpp"

namespace {

using nlohmann::json;

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const fleet::ParseError*>(&e)) return "parse_error";
    if (dynamic_cast<const fleet::ParameterError*>(&e)) return "parameter_error";
    if (dynamic_cast<const fleet::PathError*>(&e)) return "path_error";
    if (dynamic_cast<const fleet::ModelError*>(&e)) return "model_error";
    if (dynamic_cast<const fleet::ScheduleError*>(&e)) return "schedule_error";
    if (dynamic_cast<const fleet::InitError*>(&e)) return "init_error";
    if (dynamic_cast<const fleet::IoError*>(&e)) return "io_error";
    return "error";
}

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("FLEET_OUT_DIR")) return env;
    return "out";
}

std::filesystem::path data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
#ifdef FLEET_DATA_DIR
    return FLEET_DATA_DIR;
#else
    return "data";
#endif
}

void print_stage_times(const fleet::RunReport& report) {
    for (const auto& [name, seconds] : report.stage_seconds)
        std::cerr << "stage " << name << ": " << seconds << " s\n";
}

int run_filter(const std::string& gps_path, bool synthetic, const std::string& segments_path,
               std::uint64_t seed, int window, int order, double process_var, double meas_var,
               const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    if (synthetic) {
        std::vector<fleet::SynthSegment> segments;
        if (!segments_path.empty()) {
            segments = fleet::synth_segments_from_json(json::parse(fleet::read_text(segments_path)));
        } else {
            segments = {{90.0, 8.0, 0.8}, {60.0, 13.9, 0.8}, {45.0, 5.0, 0.8}, {60.0, 11.0, 0.8}};
        }
        const fleet::SpeedProfile noisy = fleet::synth_gps(segments, seed);
        const fleet::SpeedProfile clean = fleet::synth_gps_clean(segments);
        const fleet::SpeedProfile smoothed = fleet::savitzky_golay(noisy, window, order);
        const fleet::SpeedProfile filtered = fleet::kalman_smooth(noisy, process_var, meas_var);
        fleet::write_gps(noisy, out / "profile_raw.csv");
        fleet::write_gps(clean, out / "profile_clean.csv");
        fleet::write_gps(smoothed, out / "profile_savgol.csv");
        fleet::write_gps(filtered, out / "profile_kalman.csv");

        auto rms = [](const fleet::SpeedProfile& a, const fleet::SpeedProfile& b) {
            return std::sqrt((a.v() - b.v()).square().mean());
        };
        std::ostringstream csv;
        csv << "method,rms_error_mps\n";
        csv << "raw," << fleet::format_double(rms(noisy, clean)) << '\n';
        csv << "savitzky_golay," << fleet::format_double(rms(smoothed, clean)) << '\n';
        csv << "kalman," << fleet::format_double(rms(filtered, clean)) << '\n';
        fleet::write_text(out / "filter_comparison.csv", csv.str());
        std::cout << "filter comparison written to " << (out / "filter_comparison.csv").string()
                  << "\n";
        return 0;
    }
    const fleet::SpeedProfile profile = fleet::ingest_gps(gps_path);
    fleet::write_gps(fleet::savitzky_golay(profile, window, order), out / "profile_savgol.csv");
    fleet::write_gps(fleet::kalman_smooth(profile, process_var, meas_var), out / "profile_kalman.csv");
    std::cout << "filtered profiles written to " << out.string() << "\n";
    return 0;
}

int run_energy_matrix(const std::string& graph_path, const std::string& vehicle_path,
                      const std::string& nodes_csv, double avg_speed_kmh, bool clamp_regen,
                      const std::filesystem::path& out) {
    const fleet::RoadGraph graph = fleet::read_road_graph(graph_path);
    const fleet::VehicleParams params = fleet::read_vehicle_params(vehicle_path);
    std::vector<std::string> nodes;
    std::stringstream ss(nodes_csv);
    std::string node;
    while (std::getline(ss, node, ',')) nodes.push_back(node);
    if (nodes.empty()) for (const auto& v : graph.vertices()) nodes.push_back(v.id);

    const fleet::TimeBasis basis = avg_speed_kmh > 0.0
                                       ? fleet::TimeBasis::average_speed(avg_speed_kmh)
                                       : fleet::TimeBasis::profile_duration();
    const fleet::EnergyGraph eg = fleet::build_energy_graph(graph, params, nodes, basis, clamp_regen);
    std::filesystem::create_directories(out);
    fleet::write_matrix_csv({eg.names, eg.energy_kwh}, out / "energy_kwh.csv");
    fleet::write_matrix_csv({eg.names, eg.time_s}, out / "time_s.csv");
    std::cout << "matrices written to " << out.string() << "\n";
    return 0;
}

int run_route(const std::string& instance_path, bool heuristic, std::uint64_t seed,
              const std::filesystem::path& out) {
    const fleet::EvrpInstance instance = fleet::read_evrp_instance(instance_path);
    fleet::EvrpSolution solution;
    if (heuristic) {
        solution = fleet::solve_insertion_heuristic(instance, seed);
    } else {
        const fleet::ExactResult result = fleet::solve_exact(instance);
        if (result.status == fleet::SolveStatus::infeasible)
            throw fleet::ModelError("instance infeasible: " + result.detail);
        if (result.status == fleet::SolveStatus::limit_exhausted)
            std::cerr << "warning: limits exhausted, reporting incumbent\n";
        solution = result.solution;
    }
    std::filesystem::create_directories(out);
    fleet::write_text(out / "solution.json",
                      fleet::solution_to_json(instance, solution).dump(2) + "\n");
    std::cout << "routes: " << solution.routes.size()
              << ", total energy: " << solution.total_energy_kwh << " kWh\n";
    return 0;
}

int run_schedule(const std::string& scenario_path, std::uint64_t seed, bool seed_set,
                 const std::filesystem::path& out) {
    fleet::ScenarioConfig config = fleet::load_scenario(scenario_path);
    if (seed_set) {
        config.seed = seed;
        config.de.seed = seed;
    }
    const fleet::RunReport report = fleet::run_scenario(config);
    fleet::emit_report(config, report, out);
    print_stage_times(report);
    std::cout << "scenario '" << config.name << "' total cost " << report.cost.total
              << ", report in " << out.string() << "\n";
    return report.cost.feasible ? 0 : 3;
}

int run_report_cmd(const std::string& scenario_path, const std::string& run_path,
                   const std::filesystem::path& out) {
    fleet::ScenarioConfig config = fleet::load_scenario(scenario_path);
    const json run = json::parse(fleet::read_text(run_path));

    fleet::RunReport report;
    report.scenario_name = run.at("scenario").get<std::string>();
    report.seed = run.at("seed").get<std::uint64_t>();
    report.config_hash = run.at("config_hash").get<std::string>();
    report.tasks = fleet::tasks_from_json(run.at("tasks"));
    const fleet::SchedulingInstance instance = config.scheduling_instance(report.tasks);
    report.schedule = fleet::schedule_from_json(instance, run.at("schedule"));

    const auto violations = fleet::check_schedule(instance, report.schedule);
    if (!violations.empty())
        throw fleet::ModelError("stored schedule fails re-validation: " + violations.front().detail);

    report.cost = fleet::evaluate_cost(instance, report.schedule);
    report.trace = fleet::simulate_soc(instance, report.schedule).trace;
    if (run.contains("convergence")) report.convergence = run.at("convergence").get<std::vector<double>>();
    report.greedy_seed_won = run.value("greedy_seed_won", false);
    report.fare_revenue = run.value("fare_revenue", 0.0);
    if (run.contains("filter_comparison")) {
        fleet::FilterComparison cmp;
        cmp.raw_rms_mps = run.at("filter_comparison").at("raw_rms_mps").get<double>();
        cmp.savgol_rms_mps = run.at("filter_comparison").at("savgol_rms_mps").get<double>();
        cmp.kalman_rms_mps = run.at("filter_comparison").at("kalman_rms_mps").get<double>();
        report.filter_comparison = cmp;
    }
    const fleet::SimDetail detail = fleet::simulate_soc(instance, report.schedule);
    for (int k = 0; k < instance.vehicle_count(); ++k) {
        const double t_max = instance.horizon.hours() - detail.driving_hours[static_cast<std::size_t>(k)];
        report.vehicle_degradation.push_back(fleet::degradation_cost(
            detail.trace.kwh.row(k).transpose().array(),
            instance.vehicles[static_cast<std::size_t>(k)].battery_kwh,
            detail.charge_power_kw[static_cast<std::size_t>(k)], instance.horizon.interval_hours(),
            t_max, config.degradation));
    }
    fleet::emit_report(config, report, out);
    std::cout << "schedule re-validated; report re-emitted to " << out.string() << "\n";
    return 0;
}

int run_demo(const std::string& scenario_name, std::uint64_t seed, bool seed_set,
             const std::filesystem::path& data, const std::filesystem::path& out) {
    const std::filesystem::path scenario_path =
        data / "case_study" / "scenarios" / (scenario_name + ".json");
    return run_schedule(scenario_path.string(), seed, seed_set, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fleet planning for battery-electric shuttles: speed-log conditioning, "
                 "energy matrices, pickup-and-delivery routing and charge scheduling"};
    app.require_subcommand(1);

    std::string out_dir_flag;
    std::string config_flag;
    std::uint64_t seed = 1;
    bool seed_set = false;
    app.add_option("--out-dir", out_dir_flag, "output directory (env FLEET_OUT_DIR, default ./out)");
    app.add_option("--config", config_flag, "configuration file for the chosen subcommand");
    app.add_option("--seed", seed, "override the configured random seed")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* filter = app.add_subcommand("filter", "smooth a speed log, or compare filters on a synthetic one");
    std::string gps_path, segments_path;
    bool synthetic = false;
    int window = 21, order = 3;
    double process_var = 0.25, meas_var = 1.0;
    filter->add_option("--gps", gps_path, "speed log CSV (t_s,v_mps)");
    filter->add_flag("--synthetic", synthetic, "generate a seeded synthetic log instead");
    filter->add_option("--segments", segments_path, "synthetic drive segments JSON");
    filter->add_option("--window", window, "smoothing window (odd sample count)");
    filter->add_option("--order", order, "polynomial order");
    filter->add_option("--process-var", process_var, "Kalman process variance (m/s^2)^2");
    filter->add_option("--meas-var", meas_var, "Kalman measurement variance (m/s)^2");

    auto* ematrix = app.add_subcommand("energy-matrix", "all-pairs minimum-energy matrix from a road graph");
    std::string graph_path, vehicle_path, nodes_csv;
    double avg_speed_kmh = 0.0;
    bool clamp_regen = false;
    ematrix->add_option("--graph", graph_path, "road graph JSON")->required();
    ematrix->add_option("--vehicle", vehicle_path, "vehicle parameters JSON")->required();
    ematrix->add_option("--nodes", nodes_csv, "comma-separated node ids (default: all)");
    ematrix->add_option("--avg-speed-kmh", avg_speed_kmh,
                        "derive times from distance at this speed (default: profile durations)");
    ematrix->add_flag("--clamp-regen", clamp_regen, "ignore recovered energy when braking");

    auto* route = app.add_subcommand("route", "solve the pickup-and-delivery routing instance");
    std::string instance_path;
    bool heuristic = false;
    route->add_option("--instance", instance_path, "routing instance JSON")->required();
    route->add_flag("--heuristic", heuristic, "cheapest-insertion heuristic instead of the exact solver");

    auto* schedule = app.add_subcommand("schedule", "run a scenario end to end and emit its report");
    std::string scenario_path;
    schedule->add_option("--scenario", scenario_path, "scenario JSON")->required();

    auto* report_cmd = app.add_subcommand("report", "re-validate a stored run and re-emit its files");
    std::string run_path, report_scenario;
    report_cmd->add_option("--scenario", report_scenario, "scenario JSON the run was produced from")
        ->required();
    report_cmd->add_option("--run", run_path, "run_report.json of the stored run")->required();

    auto* demo = app.add_subcommand("demo-case-study", "bundled six-node shuttle dataset, end to end");
    std::string demo_scenario = "sc2";
    std::string data_flag;
    demo->add_option("--scenario", demo_scenario, "sc1 | sc2 | sc3 | sc4 (default sc2)");
    demo->add_option("--data-dir", data_flag, "override the bundled data directory");

    CLI11_PARSE(app, argc, argv);
    const std::filesystem::path out = resolve_out_dir(out_dir_flag);

    try {
        if (filter->parsed())
            return run_filter(gps_path, synthetic, segments_path, seed, window, order, process_var,
                              meas_var, out);
        if (ematrix->parsed())
            return run_energy_matrix(graph_path, vehicle_path, nodes_csv, avg_speed_kmh, clamp_regen, out);
        if (route->parsed()) return run_route(instance_path, heuristic, seed, out);
        if (schedule->parsed()) return run_schedule(scenario_path, seed, seed_set, out);
        if (report_cmd->parsed()) return run_report_cmd(report_scenario, run_path, out);
        if (demo->parsed()) return run_demo(demo_scenario, seed, seed_set, data_dir(data_flag), out);
    } catch (const std::exception& e) {
        json err = {{"error", {{"type", error_kind(e)}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 1;
}
