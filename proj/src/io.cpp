#include "fleet/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fleet {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t lead = 0;
        while (lead < cell.size() && cell[lead] == ' ') ++lead;
        cells.push_back(cell.substr(lead));
    }
    return cells;
}

double parse_double(const std::string& cell, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": not a number: '" + cell + "'");
    }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw IoError("format_double failed");
    return std::string(buf, ptr);
}

SpeedProfile ingest_gps(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ParseError(path.string() + ": empty file");
    {
        const auto header = split_csv_line(lines[0]);
        if (header.size() != 2 || header[0] != "t_s" || header[1] != "v_mps")
            throw ParseError(path.string() + ": line 1: expected header 't_s,v_mps'");
    }
    std::vector<double> t, v;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty() || lines[i] == "\r") continue;
        const std::string where = path.string() + ": line " + std::to_string(i + 1);
        const auto cells = split_csv_line(lines[i]);
        if (cells.size() != 2) throw ParseError(where + ": expected 2 columns");
        const double ti = parse_double(cells[0], where);
        const double vi = parse_double(cells[1], where);
        if (vi < 0.0) throw ParseError(where + ": negative speed");
        if (!t.empty() && ti <= t.back()) throw ParseError(where + ": non-monotone timestamp");
        t.push_back(ti);
        v.push_back(vi);
    }
    if (t.size() < 2) throw ParseError(path.string() + ": need at least 2 samples");
    const double rate = static_cast<double>(t.size() - 1) / (t.back() - t.front());
    try {
        return SpeedProfile(Eigen::Map<Eigen::ArrayXd>(t.data(), static_cast<Eigen::Index>(t.size())),
                            Eigen::Map<Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size())),
                            rate);
    } catch (const ParameterError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_gps(const SpeedProfile& profile, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "t_s,v_mps\n";
    for (Eigen::Index i = 0; i < profile.size(); ++i)
        out << format_double(profile.t()(i)) << ',' << format_double(profile.v()(i)) << '\n';
    write_text(path, out.str());
}

NamedMatrix read_matrix_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ParseError(path.string() + ": empty file");
    NamedMatrix m;
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2) throw ParseError(path.string() + ": header too short");
    m.names.assign(header.begin() + 1, header.end());
    const std::size_t n = m.names.size();
    m.values.resize(n, n);
    std::size_t row = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty() || lines[i] == "\r") continue;
        const std::string where = path.string() + ": line " + std::to_string(i + 1);
        const auto cells = split_csv_line(lines[i]);
        if (cells.size() != n + 1) throw ParseError(where + ": expected " + std::to_string(n + 1) + " columns");
        if (row >= n) throw ParseError(where + ": too many rows");
        if (cells[0] != m.names[row])
            throw ParseError(where + ": row name '" + cells[0] + "' does not match column order");
        for (std::size_t j = 0; j < n; ++j)
            m.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
                parse_double(cells[j + 1], where);
        ++row;
    }
    if (row != n) throw ParseError(path.string() + ": expected " + std::to_string(n) + " rows");
    return m;
}

void write_matrix_csv(const NamedMatrix& matrix, const std::filesystem::path& path) {
    std::ostringstream out;
    for (const std::string& name : matrix.names) out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
        out << matrix.names[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < matrix.values.cols(); ++j)
            out << ',' << format_double(matrix.values(i, j));
        out << '\n';
    }
    write_text(path, out.str());
}

RoadGraph read_road_graph(const std::filesystem::path& path) {
    const nlohmann::json j = read_json(path);
    RoadGraph graph;
    for (const auto& v : j.at("vertices"))
        graph.add_vertex(v.at("id").get<std::string>(), v.at("z_m").get<double>());
    const std::filesystem::path base = path.parent_path();
    for (const auto& e : j.at("edges")) {
        const std::filesystem::path profile_file = e.at("profile_file").get<std::string>();
        graph.add_edge(e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                       ingest_gps(profile_file.is_absolute() ? profile_file : base / profile_file));
    }
    return graph;
}

VehicleParams vehicle_params_from_json(const nlohmann::json& j) {
    VehicleParams p;
    p.mass_kg = j.at("mass_kg").get<double>();
    p.frontal_area_m2 = j.at("frontal_area_m2").get<double>();
    p.drag_coeff = j.at("drag_coeff").get<double>();
    p.rolling_coeff = j.at("rolling_coeff").get<double>();
    p.powertrain_eff = j.at("powertrain_eff").get<double>();
    p.air_density_kgm3 = j.value("air_density_kgm3", p.air_density_kgm3);
    p.gravity_ms2 = j.value("gravity_ms2", p.gravity_ms2);
    p.validate();
    return p;
}

VehicleParams read_vehicle_params(const std::filesystem::path& path) {
    return vehicle_params_from_json(read_json(path));
}

DegradationParams degradation_params_from_json(const nlohmann::json& j) {
    DegradationParams p;
    p.battery_cost = j.value("battery_cost", p.battery_cost);
    p.lifespan_a = j.value("lifespan_a", p.lifespan_a);
    p.lifespan_b = j.value("lifespan_b", p.lifespan_b);
    p.soc_slope = j.value("soc_slope", p.soc_slope);
    p.soc_offset = j.value("soc_offset", p.soc_offset);
    p.projected_years = j.value("projected_years", p.projected_years);
    p.capacity_fade_limit = j.value("capacity_fade_limit", p.capacity_fade_limit);
    p.thermal_resistance_c_per_kw = j.value("thermal_resistance_c_per_kw", p.thermal_resistance_c_per_kw);
    p.ambient_c = j.value("ambient_c", p.ambient_c);
    p.hours_per_year = j.value("hours_per_year", p.hours_per_year);
    p.cycle_fit_scale = j.value("cycle_fit_scale", p.cycle_fit_scale);
    p.cycle_fit_exponent = j.value("cycle_fit_exponent", p.cycle_fit_exponent);
    p.temperatures_in_kelvin = j.value("temperatures_in_kelvin", p.temperatures_in_kelvin);
    p.validate();
    return p;
}

std::vector<SynthSegment> synth_segments_from_json(const nlohmann::json& j) {
    std::vector<SynthSegment> segments;
    for (const auto& s : j) {
        SynthSegment seg;
        seg.duration_s = s.at("duration_s").get<double>();
        seg.target_mps = s.at("target_mps").get<double>();
        seg.noise_mps = s.value("noise_mps", 0.0);
        segments.push_back(seg);
    }
    return segments;
}

EvrpInstance evrp_instance_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    EvrpInstance instance;

    auto resolve = [&](const std::string& rel) {
        const std::filesystem::path p = rel;
        return p.is_absolute() ? p : base_dir / p;
    };
    const NamedMatrix energy = read_matrix_csv(resolve(j.at("energy_matrix_csv").get<std::string>()));
    const NamedMatrix distance =
        read_matrix_csv(resolve(j.at("distance_matrix_csv").get<std::string>()));
    if (energy.names != distance.names)
        throw ParseError("evrp instance: energy and distance matrices disagree on node names");
    instance.graph = energy_graph_from_tables(energy.names, energy.values, distance.values,
                                              j.at("average_speed_kmh").get<double>());

    instance.depot_node = instance.graph.require(j.at("depot").get<std::string>());
    instance.seat_capacity = j.at("seat_capacity").get<int>();
    instance.battery_kwh = j.at("battery_kwh").get<double>();
    instance.min_reserve_kwh = j.at("min_reserve_kwh").get<double>();
    instance.time_upper_bound_s = j.value("time_upper_bound_s", instance.time_upper_bound_s);
    instance.max_routes = j.value("max_routes", 0);
    instance.dwell_s = j.value("dwell_s", 0.0);
    for (const auto& station : j.value("stations", nlohmann::json::array()))
        instance.station_nodes.push_back(instance.graph.require(station.get<std::string>()));

    for (const auto& r : j.at("requests")) {
        TransportRequest req;
        req.pickup_node = instance.graph.require(r.at("pickup").get<std::string>());
        req.delivery_node = instance.graph.require(r.at("delivery").get<std::string>());
        req.passengers = r.at("q").get<int>();
        req.pickup_open_s = r.at("a").get<double>();
        req.pickup_close_s = r.at("b").get<double>();
        req.delivery_open_s = r.value("da", req.pickup_open_s);
        req.delivery_close_s = r.value("db", instance.time_upper_bound_s);
        instance.requests.push_back(req);
    }
    instance.validate();
    return instance;
}

EvrpInstance read_evrp_instance(const std::filesystem::path& path) {
    return evrp_instance_from_json(read_json(path), path.parent_path());
}

nlohmann::json solution_to_json(const EvrpInstance& instance, const EvrpSolution& solution) {
    nlohmann::json routes = nlohmann::json::array();
    for (const Route& route : solution.routes) {
        nlohmann::json stops = nlohmann::json::array();
        for (std::size_t p = 0; p < route.stops.size(); ++p) {
            const int stop = route.stops[p];
            std::string kind = "depot_start";
            if (instance.is_pickup(stop)) kind = "pickup";
            else if (instance.is_delivery(stop)) kind = "delivery";
            else if (instance.is_station(stop)) kind = "station";
            else if (stop == instance.depot_end_stop()) kind = "depot_end";
            stops.push_back({{"node", instance.graph.names[static_cast<std::size_t>(
                                 instance.stop_node(stop))]},
                             {"kind", kind},
                             {"w_s", route.service_time_s[p]},
                             {"y", route.load[p]},
                             {"e_kwh", route.battery_kwh[p]}});
        }
        routes.push_back({{"stops", stops},
                          {"energy_kwh", route.energy_kwh},
                          {"depart_s", route.depart_s},
                          {"return_s", route.return_s},
                          {"requests", route.requests_served}});
    }
    return {{"routes", routes}, {"total_energy_kwh", solution.total_energy_kwh}};
}

nlohmann::json schedule_to_json(const SchedulingInstance& instance, const Schedule& schedule) {
    nlohmann::json assign = nlohmann::json::array();
    for (int s = 0; s < instance.task_count(); ++s) assign.push_back(schedule.vehicle_of(s));
    nlohmann::json actions = nlohmann::json::array();
    for (int k = 0; k < instance.vehicle_count(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < instance.horizon.intervals; ++i) {
            const ChargeAction act = schedule.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            if (act.dir == 0) continue;
            row.push_back({{"interval", i},
                           {"dir", static_cast<int>(act.dir)},
                           {"station", instance.stations[static_cast<std::size_t>(act.station)].id}});
        }
        actions.push_back(row);
    }
    return {{"vehicle_of_task", assign}, {"actions", actions}};
}

Schedule schedule_from_json(const SchedulingInstance& instance, const nlohmann::json& j) {
    Schedule schedule = empty_schedule(instance);
    const auto& assign = j.at("vehicle_of_task");
    for (int s = 0; s < instance.task_count(); ++s) {
        const int k = assign.at(static_cast<std::size_t>(s)).get<int>();
        if (k < 0 || k >= instance.vehicle_count())
            throw ParseError("schedule: task assigned to unknown vehicle");
        schedule.assign[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] = 1;
    }
    const auto& actions = j.at("actions");
    for (int k = 0; k < instance.vehicle_count(); ++k) {
        for (const auto& a : actions.at(static_cast<std::size_t>(k))) {
            const int i = a.at("interval").get<int>();
            const std::string station_id = a.at("station").get<std::string>();
            int x = -1;
            for (int c = 0; c < instance.station_count(); ++c)
                if (instance.stations[static_cast<std::size_t>(c)].id == station_id) x = c;
            if (x < 0) throw ParseError("schedule: unknown station '" + station_id + "'");
            if (i < 0 || i >= instance.horizon.intervals)
                throw ParseError("schedule: action interval out of range");
            schedule.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = {
                static_cast<std::int8_t>(a.at("dir").get<int>()), static_cast<std::int16_t>(x)};
        }
    }
    return schedule;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fleet
