#include "fleet/evrp.hpp"

#include <algorithm>
#include <cmath>

namespace fleet {

void EvrpInstance::validate() const {
    if (seat_capacity <= 0) throw ParameterError("evrp: seat capacity must be positive");
    if (!(battery_kwh > min_reserve_kwh) || min_reserve_kwh < 0.0)
        throw ParameterError("evrp: need battery capacity > reserve >= 0");
    if (depot_node < 0 || depot_node >= graph.size()) throw ParameterError("evrp: depot node out of range");
    double latest = 0.0;
    for (const TransportRequest& r : requests) {
        if (r.pickup_node < 0 || r.pickup_node >= graph.size() || r.delivery_node < 0 ||
            r.delivery_node >= graph.size())
            throw ParameterError("evrp: request node out of range");
        if (r.passengers <= 0) throw ParameterError("evrp: request passengers must be positive");
        if (r.pickup_open_s > r.pickup_close_s || r.delivery_open_s > r.delivery_close_s)
            throw ParameterError("evrp: empty time window");
        latest = std::max({latest, r.pickup_close_s, r.delivery_close_s});
    }
    if (time_upper_bound_s <= latest)
        throw ParameterError("evrp: time upper bound must exceed every window");
    for (int s : station_nodes)
        if (s < 0 || s >= graph.size()) throw ParameterError("evrp: station node out of range");
}

int EvrpInstance::stop_node(int stop) const {
    if (stop == depot_start_stop() || stop == depot_end_stop()) return depot_node;
    if (is_pickup(stop)) return requests[stop - 1].pickup_node;
    if (is_delivery(stop)) return requests[stop - request_count() - 1].delivery_node;
    if (is_station(stop) && stop < stop_count())
        return station_nodes[stop - 2 * request_count() - 2];
    throw ParameterError("evrp: unknown stop index " + std::to_string(stop));
}

double EvrpInstance::stop_open_s(int stop) const {
    if (is_pickup(stop)) return requests[stop - 1].pickup_open_s;
    if (is_delivery(stop)) return requests[stop - request_count() - 1].delivery_open_s;
    return 0.0;
}

double EvrpInstance::stop_close_s(int stop) const {
    if (is_pickup(stop)) return requests[stop - 1].pickup_close_s;
    if (is_delivery(stop)) return requests[stop - request_count() - 1].delivery_close_s;
    return time_upper_bound_s;
}

int EvrpInstance::stop_load_delta(int stop) const {
    if (is_pickup(stop)) return requests[stop - 1].passengers;
    if (is_delivery(stop)) return -requests[stop - request_count() - 1].passengers;
    return 0;
}

double EvrpInstance::leg_energy_kwh(int stop_from, int stop_to) const {
    return graph.energy_kwh(stop_node(stop_from), stop_node(stop_to));
}

double EvrpInstance::leg_time_s(int stop_from, int stop_to) const {
    return graph.time_s(stop_node(stop_from), stop_node(stop_to));
}

RouteCheck validate_route(const EvrpInstance& instance, const std::vector<int>& stops,
                          double initial_energy_kwh) {
    RouteCheck check;
    std::vector<RouteViolation>& bad = check.violations;

    for (int s : stops) instance.stop_node(s);  // throws on unknown stops

    if (stops.size() < 2 || stops.front() != instance.depot_start_stop() ||
        stops.back() != instance.depot_end_stop()) {
        bad.push_back({RouteViolation::Kind::structure, 0, "route must run depot start -> depot end"});
        return check;
    }

    Route& route = check.route;
    route.stops = stops;
    const int n = static_cast<int>(stops.size());
    route.service_time_s.assign(n, 0.0);
    route.load.assign(n, 0);
    route.battery_kwh.assign(n, initial_energy_kwh);

    std::vector<char> picked(instance.request_count(), 0);
    std::vector<char> delivered(instance.request_count(), 0);

    double service = 0.0;
    int load = 0;
    double battery = initial_energy_kwh;

    for (int pos = 0; pos < n; ++pos) {
        const int stop = stops[pos];
        if (pos > 0) {
            if (stop == instance.depot_start_stop() ||
                (stop == instance.depot_end_stop() && pos != n - 1)) {
                bad.push_back({RouteViolation::Kind::structure, pos, "depot revisited mid-route"});
                continue;
            }
            const int prev = stops[pos - 1];
            service = std::max(instance.stop_open_s(stop),
                               service + instance.dwell_s + instance.leg_time_s(prev, stop));
            const double leg = instance.leg_energy_kwh(prev, stop);
            battery -= leg;
            route.energy_kwh += leg;
        }

        if (instance.is_station(stop)) {
            if (!instance.allow_midroute_charging)
                bad.push_back({RouteViolation::Kind::structure, pos, "mid-route charging disabled"});
        } else if (instance.is_pickup(stop)) {
            const int r = instance.request_of(stop);
            if (picked[r])
                bad.push_back({RouteViolation::Kind::structure, pos, "pickup visited twice"});
            picked[r] = 1;
        } else if (instance.is_delivery(stop)) {
            const int r = instance.request_of(stop);
            if (delivered[r])
                bad.push_back({RouteViolation::Kind::structure, pos, "delivery visited twice"});
            if (!picked[r])
                bad.push_back({RouteViolation::Kind::pairing, pos,
                               "delivery before pickup of request " + std::to_string(r)});
            delivered[r] = 1;
        }

        if (service > instance.stop_close_s(stop) + 1e-9)
            bad.push_back({RouteViolation::Kind::window, pos,
                           "arrives at " + std::to_string(service) + " s after window close"});

        load += instance.stop_load_delta(stop);
        if (load > instance.seat_capacity)
            bad.push_back({RouteViolation::Kind::capacity, pos, "load exceeds seat capacity"});
        if (load < 0) bad.push_back({RouteViolation::Kind::capacity, pos, "negative load"});

        if (battery < instance.min_reserve_kwh - 1e-9)
            bad.push_back({RouteViolation::Kind::battery, pos,
                           "battery " + std::to_string(battery) + " kWh below reserve"});
        if (instance.is_station(stop)) {
            const double refill = instance.station_charge_kwh > 0.0 ? instance.station_charge_kwh
                                                                    : instance.battery_kwh;
            battery = std::min(instance.battery_kwh, battery + refill);
        }

        route.service_time_s[pos] = service;
        route.load[pos] = load;
        route.battery_kwh[pos] = battery;
    }

    for (int r = 0; r < instance.request_count(); ++r) {
        if (picked[r] && !delivered[r])
            bad.push_back({RouteViolation::Kind::pairing, n - 1,
                           "request " + std::to_string(r) + " picked up but not delivered"});
        if (picked[r] && delivered[r]) route.requests_served.push_back(r);
    }

    if (!bad.empty()) return check;

    // The depot departure is anchored to the first timed stop; waiting happens
    // at the depot, not on the road.
    if (n > 2) {
        route.depart_s = route.service_time_s[1] - instance.leg_time_s(stops[0], stops[1]);
        route.service_time_s[0] = route.depart_s;
    }
    route.return_s = route.service_time_s[n - 1];
    check.ok = true;
    return check;
}

}  // namespace fleet
