#pragma once

#include <string>
#include <vector>

#include "fleet/energy_graph.hpp"

namespace fleet {

/// One pickup-and-delivery request: `passengers` board at the pickup node
/// within its window and leave at the delivery node within theirs.
struct TransportRequest {
    int pickup_node = -1;
    int delivery_node = -1;
    int passengers = 1;
    double pickup_open_s = 0.0;
    double pickup_close_s = 0.0;
    double delivery_open_s = 0.0;
    double delivery_close_s = 0.0;
};

/// Pickup-and-delivery instance with seat, window and battery constraints.
///
/// Stops are indexed 0 = depot start, 1..m = pickups, m+1..2m = deliveries,
/// 2m+1 = depot end, 2m+2+k = visit to charging station k (only meaningful
/// when mid-route charging is enabled).
struct EvrpInstance {
    EnergyGraph graph;
    int depot_node = 0;
    std::vector<TransportRequest> requests;
    int seat_capacity = 4;            // Q
    double battery_kwh = 16.0;        // every route starts fully charged
    double min_reserve_kwh = 0.0;     // battery level must never drop below this
    double time_upper_bound_s = 172800.0;  // stands in for "no deadline"
    int max_routes = 0;               // 0 = one per request
    double dwell_s = 0.0;             // service duration per stop
    bool allow_midroute_charging = false;
    std::vector<int> station_nodes;
    double station_charge_kwh = 0.0;  // energy added per station visit; 0 = fill to capacity

    void validate() const;

    int request_count() const { return static_cast<int>(requests.size()); }
    int depot_start_stop() const { return 0; }
    int depot_end_stop() const { return 2 * request_count() + 1; }
    int pickup_stop(int request) const { return 1 + request; }
    int delivery_stop(int request) const { return 1 + request_count() + request; }
    int station_stop(int station) const { return 2 * request_count() + 2 + station; }
    int stop_count() const {
        return 2 * request_count() + 2 + static_cast<int>(station_nodes.size());
    }

    bool is_pickup(int stop) const { return stop >= 1 && stop <= request_count(); }
    bool is_delivery(int stop) const {
        return stop > request_count() && stop <= 2 * request_count();
    }
    bool is_station(int stop) const { return stop >= 2 * request_count() + 2; }
    int request_of(int stop) const {
        return is_pickup(stop) ? stop - 1 : stop - request_count() - 1;
    }

    int stop_node(int stop) const;
    double stop_open_s(int stop) const;
    double stop_close_s(int stop) const;
    int stop_load_delta(int stop) const;
    double leg_energy_kwh(int stop_from, int stop_to) const;
    double leg_time_s(int stop_from, int stop_to) const;
};

/// A depot-to-depot stop sequence annotated with per-stop service time,
/// onboard load and remaining battery.
struct Route {
    std::vector<int> stops;
    std::vector<double> service_time_s;
    std::vector<int> load;
    std::vector<double> battery_kwh;
    std::vector<int> requests_served;  // sorted request indices
    double energy_kwh = 0.0;
    double depart_s = 0.0;  // leaves the depot no earlier than needed
    double return_s = 0.0;
};

struct RouteViolation {
    enum class Kind { structure, pairing, window, capacity, battery };
    Kind kind;
    int stop_pos;  // index into the stop sequence
    std::string detail;
};

struct RouteCheck {
    bool ok = false;
    Route route;
    std::vector<RouteViolation> violations;
};

/// Forward-propagate earliest service times, loads and battery along `stops`
/// and check every constraint. Returns the annotated route when clean,
/// otherwise the full violation list. Unknown stop indices throw.
RouteCheck validate_route(const EvrpInstance& instance, const std::vector<int>& stops,
                          double initial_energy_kwh);

struct EvrpSolution {
    std::vector<Route> routes;
    double total_energy_kwh = 0.0;
};

}  // namespace fleet
