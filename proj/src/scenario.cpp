#include "fleet/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fleet/filters.hpp"

namespace fleet {

namespace {

Eigen::ArrayXd expand_series(const nlohmann::json& j, int n, const char* what) {
    Eigen::ArrayXd out(n);
    if (j.is_array()) {
        if (static_cast<int>(j.size()) != n)
            throw ParseError(std::string(what) + ": series length != horizon intervals");
        for (int i = 0; i < n; ++i) out(i) = j.at(static_cast<std::size_t>(i)).get<double>();
        return out;
    }
    out.setConstant(j.at("base").get<double>());
    for (const auto& span : j.value("spans", nlohmann::json::array())) {
        const int from = span.at("from").get<int>();
        const int to = span.at("to").get<int>();
        if (from < 0 || to >= n || from > to)
            throw ParseError(std::string(what) + ": span out of range");
        out.segment(from, to - from + 1).setConstant(span.at("value").get<double>());
    }
    return out;
}

double rms_diff(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
    return std::sqrt((a - b).square().mean());
}

class StageTimer {
public:
    explicit StageTimer(RunReport& report) : report_(report) {}
    template <typename F>
    auto run(const std::string& name, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        try {
            auto result = f();
            report_.stage_seconds.emplace_back(
                name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
            return result;
        } catch (const std::exception& e) {
            throw ModelError("stage '" + name + "' failed: " + e.what());
        }
    }

private:
    RunReport& report_;
};

}  // namespace

SchedulingInstance ScenarioConfig::scheduling_instance(std::vector<RouteTask> with_tasks) const {
    SchedulingInstance instance;
    instance.horizon = horizon;
    instance.vehicles = vehicles;
    instance.stations = stations;
    for (Station& s : instance.stations) s.allow_discharge = s.allow_discharge && allow_discharge;
    instance.tasks = std::move(with_tasks);
    instance.use_degradation = use_degradation;
    instance.degradation = degradation;
    instance.validate();
    return instance;
}

ScenarioConfig scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    ScenarioConfig config;
    config.name = j.at("name").get<std::string>();
    config.hash = config_hash(j);
    config.seed = j.at("seed").get<std::uint64_t>();

    const auto& h = j.at("horizon");
    config.horizon.intervals = h.at("intervals").get<int>();
    config.horizon.interval_s = h.value("interval_s", config.horizon.interval_s);
    config.horizon.start_clock = h.value("start_clock", config.horizon.start_clock);

    for (const auto& v : j.at("fleet")) {
        VehicleSpec spec;
        spec.id = v.at("id").get<std::string>();
        spec.battery_kwh = v.at("battery_kwh").get<double>();
        spec.soc_min_kwh = v.at("soc_min_kwh").get<double>();
        spec.soc_max_kwh = v.at("soc_max_kwh").get<double>();
        spec.soc0_kwh = v.value("soc0_kwh", spec.soc_max_kwh);
        config.vehicles.push_back(spec);
    }
    for (const auto& s : j.at("stations")) {
        Station station;
        station.id = s.at("id").get<std::string>();
        station.rate_kw = s.at("rate_kw").get<double>();
        station.efficiency = s.at("efficiency").get<double>();
        station.tariff = expand_series(s.at("tariff"), config.horizon.intervals, "tariff");
        const Eigen::ArrayXd avail =
            expand_series(s.at("availability"), config.horizon.intervals, "availability");
        station.availability = avail.cast<int>();
        station.reroute_intervals = s.value("reroute_intervals", 0);
        station.reroute_kwh = s.value("reroute_kwh", 0.0);
        station.allow_discharge = s.value("allow_discharge", false);
        config.stations.push_back(station);
    }

    const auto& flags = j.value("flags", nlohmann::json::object());
    config.use_degradation = flags.value("use_degradation", true);
    config.allow_discharge = flags.value("allow_discharge", true);
    config.clamp_regen = flags.value("clamp_regen", false);

    if (j.contains("degradation")) config.degradation = degradation_params_from_json(j.at("degradation"));

    const auto& de = j.value("de", nlohmann::json::object());
    config.de.population = de.value("population", 0);
    config.de.crossover_rate = de.value("crossover_rate", 0.3);
    config.de.generations = de.value("generations", 200);
    config.de.seed = config.seed;

    config.passenger_fee = j.value("passenger_fee", 0.0);

    if (j.contains("routing")) {
        if (j.at("routing").is_string()) {
            std::filesystem::path p = j.at("routing").get<std::string>();
            if (!p.is_absolute()) p = base_dir / p;
            config.routing = read_evrp_instance(p);
        } else {
            config.routing = evrp_instance_from_json(j.at("routing"), base_dir);
        }
    } else if (j.contains("tasks")) {
        config.tasks = tasks_from_json(j.at("tasks"));
    } else {
        throw ParseError("scenario: needs either a 'routing' block or a 'tasks' list");
    }

    if (j.contains("gps")) {
        const auto& gps = j.at("gps");
        config.gps_segments = synth_segments_from_json(gps.at("segments"));
        config.gps_rate_hz = gps.value("rate_hz", config.gps_rate_hz);
        config.sg_window = gps.value("sg_window", config.sg_window);
        config.sg_order = gps.value("sg_order", config.sg_order);
        config.kalman_process_var = gps.value("kalman_process_var", config.kalman_process_var);
        config.kalman_meas_var = gps.value("kalman_meas_var", config.kalman_meas_var);
    }
    return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return scenario_from_json(j, path.parent_path());
}

std::vector<RouteTask> route_tasks_from_solution(const EvrpSolution& solution,
                                                 const Horizon& horizon) {
    std::vector<RouteTask> tasks;
    for (std::size_t r = 0; r < solution.routes.size(); ++r) {
        const Route& route = solution.routes[r];
        RouteTask task;
        task.id = static_cast<int>(r);
        const double depart = std::max(0.0, route.depart_s);
        const double ret = std::max(depart, route.return_s);
        task.start_interval = std::clamp(static_cast<int>(depart / horizon.interval_s), 0,
                                         horizon.intervals - 1);
        task.end_interval = std::clamp(static_cast<int>(std::ceil(ret / horizon.interval_s)) - 1,
                                       task.start_interval, horizon.intervals - 1);
        task.total_kwh = route.energy_kwh;

        const double duration = ret - depart;
        task.energy_kwh.assign(static_cast<std::size_t>(task.end_interval - task.start_interval + 1),
                               0.0);
        if (duration <= 0.0) {
            task.energy_kwh.front() = task.total_kwh;
        } else {
            for (int i = task.start_interval; i <= task.end_interval; ++i) {
                const double lo = std::max(depart, i * horizon.interval_s);
                const double hi = std::min(ret, (i + 1) * horizon.interval_s);
                task.energy_kwh[static_cast<std::size_t>(i - task.start_interval)] =
                    task.total_kwh * std::max(0.0, hi - lo) / duration;
            }
        }
        tasks.push_back(std::move(task));
    }
    return tasks;
}

nlohmann::json tasks_to_json(const std::vector<RouteTask>& tasks) {
    nlohmann::json out = nlohmann::json::array();
    for (const RouteTask& t : tasks)
        out.push_back({{"id", t.id},
                       {"start_interval", t.start_interval},
                       {"end_interval", t.end_interval},
                       {"energy_kwh", t.energy_kwh},
                       {"total_kwh", t.total_kwh}});
    return out;
}

std::vector<RouteTask> tasks_from_json(const nlohmann::json& j) {
    std::vector<RouteTask> tasks;
    for (const auto& t : j) {
        RouteTask task;
        task.id = t.at("id").get<int>();
        task.start_interval = t.at("start_interval").get<int>();
        task.end_interval = t.at("end_interval").get<int>();
        task.energy_kwh = t.at("energy_kwh").get<std::vector<double>>();
        task.total_kwh = t.at("total_kwh").get<double>();
        tasks.push_back(std::move(task));
    }
    return tasks;
}

RunReport run_scenario(const ScenarioConfig& config) {
    RunReport report;
    report.scenario_name = config.name;
    report.seed = config.seed;
    report.config_hash = config.hash;
    StageTimer timer(report);

    if (!config.gps_segments.empty()) {
        report.filter_comparison = timer.run("filter", [&] {
            const SpeedProfile noisy = synth_gps(config.gps_segments, config.seed, config.gps_rate_hz);
            const SpeedProfile clean = synth_gps_clean(config.gps_segments, config.gps_rate_hz);
            const SpeedProfile smoothed = savitzky_golay(noisy, config.sg_window, config.sg_order);
            const SpeedProfile filtered =
                kalman_smooth(noisy, config.kalman_process_var, config.kalman_meas_var);
            FilterComparison cmp;
            cmp.raw_rms_mps = rms_diff(noisy.v(), clean.v());
            cmp.savgol_rms_mps = rms_diff(smoothed.v(), clean.v());
            cmp.kalman_rms_mps = rms_diff(filtered.v(), clean.v());
            return cmp;
        });
    }

    std::vector<RouteTask> tasks = config.tasks;
    if (config.routing) {
        report.solution = timer.run("routing", [&] {
            const ExactResult result = solve_exact(*config.routing);
            if (result.status == SolveStatus::infeasible)
                throw ModelError("routing infeasible: " + result.detail);
            if (result.status == SolveStatus::limit_exhausted)
                throw ModelError("routing limits exhausted: " + result.detail);
            return result.solution;
        });
        tasks = route_tasks_from_solution(*report.solution, config.horizon);
        double passengers = 0.0;
        for (const TransportRequest& r : config.routing->requests) passengers += r.passengers;
        report.fare_revenue = passengers * config.passenger_fee;
    }
    report.tasks = tasks;

    const SchedulingInstance instance = config.scheduling_instance(tasks);
    const DeResult de_result = timer.run("scheduling", [&] { return de_optimize(instance, config.de); });
    report.schedule = de_result.best;
    report.cost = de_result.cost;
    report.convergence = de_result.best_cost_series;
    report.greedy_seed_won = de_result.greedy_seed_won;

    timer.run("degradation", [&] {
        const SimDetail detail = simulate_soc(instance, report.schedule);
        report.trace = detail.trace;
        // Reported for every scenario, even when the objective ignores it.
        for (int k = 0; k < instance.vehicle_count(); ++k) {
            const double t_max =
                instance.horizon.hours() - detail.driving_hours[static_cast<std::size_t>(k)];
            report.vehicle_degradation.push_back(degradation_cost(
                detail.trace.kwh.row(k).transpose().array(),
                instance.vehicles[static_cast<std::size_t>(k)].battery_kwh,
                detail.charge_power_kw[static_cast<std::size_t>(k)],
                instance.horizon.interval_hours(), t_max, config.degradation));
        }
        return 0;
    });
    return report;
}

std::string config_hash(const nlohmann::json& canonical) {
    const std::string dump = canonical.dump();
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : dump) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << hash;
    return out.str();
}

nlohmann::json report_to_json(const ScenarioConfig& config, const RunReport& report) {
    nlohmann::json j;
    j["scenario"] = report.scenario_name;
    j["seed"] = report.seed;
    j["config_hash"] = report.config_hash;
    if (report.filter_comparison) {
        j["filter_comparison"] = {{"raw_rms_mps", report.filter_comparison->raw_rms_mps},
                                  {"savgol_rms_mps", report.filter_comparison->savgol_rms_mps},
                                  {"kalman_rms_mps", report.filter_comparison->kalman_rms_mps}};
    }
    if (report.solution && config.routing)
        j["solution"] = solution_to_json(*config.routing, *report.solution);
    j["tasks"] = tasks_to_json(report.tasks);
    const SchedulingInstance instance = config.scheduling_instance(report.tasks);
    j["schedule"] = schedule_to_json(instance, report.schedule);
    j["cost"] = {{"tariff", report.cost.tariff},
                 {"degradation", report.cost.degradation},
                 {"total", report.cost.total},
                 {"feasible", report.cost.feasible}};
    nlohmann::json deg = nlohmann::json::array();
    for (const DegradationReport& d : report.vehicle_degradation)
        deg.push_back({{"temperature_loss", d.temperature_loss},
                       {"soc_loss", d.soc_loss},
                       {"dod_loss", d.dod_loss},
                       {"cost", d.cost},
                       {"soc_avg_fraction", d.soc_avg_fraction},
                       {"dod_avg", d.dod_avg},
                       {"subcycles", d.subcycles}});
    j["vehicle_degradation"] = deg;
    j["convergence"] = report.convergence;
    j["greedy_seed_won"] = report.greedy_seed_won;
    j["fare_revenue"] = report.fare_revenue;
    return j;
}

void emit_report(const ScenarioConfig& config, const RunReport& report,
                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const SchedulingInstance instance = config.scheduling_instance(report.tasks);

    write_text(out_dir / "run_report.json", report_to_json(config, report).dump(2) + "\n");

    if (report.solution && config.routing)
        write_text(out_dir / "solution.json",
                   solution_to_json(*config.routing, *report.solution).dump(2) + "\n");
    else
        write_text(out_dir / "solution.json", nlohmann::json({{"routes", nlohmann::json::array()},
                                                              {"total_energy_kwh", 0.0}})
                                                      .dump(2) +
                                                  "\n");

    {
        std::ostringstream csv;
        csv << "interval,t_start_s,vehicle,soc_kwh,action,station,driving\n";
        if (report.trace.kwh.size() > 0) {
            for (int i = 0; i < instance.horizon.intervals; ++i) {
                for (int k = 0; k < instance.vehicle_count(); ++k) {
                    const ChargeAction act =
                        report.schedule.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
                    csv << i << ',' << format_double(i * instance.horizon.interval_s) << ','
                        << instance.vehicles[static_cast<std::size_t>(k)].id << ','
                        << format_double(report.trace.kwh(k, i + 1)) << ','
                        << static_cast<int>(act.dir) << ','
                        << (act.dir != 0 ? instance.stations[static_cast<std::size_t>(act.station)].id
                                         : std::string())
                        << ',' << (report.schedule.occupied(instance, k, i) ? 1 : 0) << '\n';
                }
            }
        }
        write_text(out_dir / "soc_trace.csv", csv.str());
    }
    {
        std::ostringstream csv;
        csv << "component,vehicle,value\n";
        csv << "tariff,fleet," << format_double(report.cost.tariff) << '\n';
        csv << "degradation,fleet," << format_double(report.cost.degradation) << '\n';
        csv << "total,fleet," << format_double(report.cost.total) << '\n';
        csv << "fare_revenue,fleet," << format_double(report.fare_revenue) << '\n';
        for (std::size_t k = 0; k < report.vehicle_degradation.size(); ++k) {
            const DegradationReport& d = report.vehicle_degradation[k];
            const std::string id = instance.vehicles[k].id;
            csv << "degradation_cost," << id << ',' << format_double(d.cost) << '\n';
            csv << "dod_avg," << id << ',' << format_double(d.dod_avg) << '\n';
            csv << "soc_avg_fraction," << id << ',' << format_double(d.soc_avg_fraction) << '\n';
            csv << "subcycles," << id << ',' << d.subcycles << '\n';
        }
        write_text(out_dir / "cost_breakdown.csv", csv.str());
    }
    {
        std::ostringstream csv;
        csv << "generation,best_cost\n";
        for (std::size_t g = 0; g < report.convergence.size(); ++g)
            csv << g << ',' << format_double(report.convergence[g]) << '\n';
        write_text(out_dir / "convergence.csv", csv.str());
    }
    {
        std::ostringstream txt;
        txt << "scenario: " << report.scenario_name << "\n";
        txt << "seed: " << report.seed << "\n";
        txt << "config_hash: " << report.config_hash << "\n";
        if (report.solution) {
            txt << "routes: " << report.solution->routes.size() << "\n";
            txt << "routing_energy_kwh: " << format_double(report.solution->total_energy_kwh) << "\n";
        }
        txt << "schedule_feasible: " << (report.cost.feasible ? "yes" : "no") << "\n";
        txt << "tariff_cost: " << format_double(report.cost.tariff) << "\n";
        txt << "degradation_cost: " << format_double(report.cost.degradation) << "\n";
        txt << "total_cost: " << format_double(report.cost.total) << "\n";
        if (report.fare_revenue > 0.0)
            txt << "fare_revenue (not optimized): " << format_double(report.fare_revenue) << "\n";
        if (report.filter_comparison) {
            txt << "filter_rms_raw: " << format_double(report.filter_comparison->raw_rms_mps) << "\n";
            txt << "filter_rms_savgol: " << format_double(report.filter_comparison->savgol_rms_mps)
                << "\n";
            txt << "filter_rms_kalman: " << format_double(report.filter_comparison->kalman_rms_mps)
                << "\n";
        }
        for (std::size_t k = 0; k < report.vehicle_degradation.size(); ++k) {
            const DegradationReport& d = report.vehicle_degradation[k];
            txt << instance.vehicles[k].id << ": dod_avg=" << format_double(d.dod_avg)
                << " subcycles=" << d.subcycles
                << " implied_cycle_life=" << (d.dod_loss > 0.0 ? format_double(1.0 / d.dod_loss) : "n/a")
                << "\n";
        }
        txt << "greedy_seed_won: " << (report.greedy_seed_won ? "yes" : "no") << "\n";
        write_text(out_dir / "summary.txt", txt.str());
    }
}

}  // namespace fleet
