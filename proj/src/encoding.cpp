#include "fleet/encoding.hpp"

#include <numeric>

namespace fleet {

std::size_t EncodingLayout::slot_offset(int vehicle, int interval, int station) const {
    std::size_t base = (static_cast<std::size_t>(vehicle) * intervals + interval) *
                       static_cast<std::size_t>(bits_per_interval);
    for (int x = 0; x < station; ++x) base += static_cast<std::size_t>(station_slot_bits[x]);
    return base;
}

EncodingLayout encoding_layout(const SchedulingInstance& instance) {
    EncodingLayout layout;
    layout.vehicles = instance.vehicle_count();
    layout.intervals = instance.horizon.intervals;
    layout.tasks = instance.task_count();
    layout.station_slot_bits.reserve(instance.stations.size());
    for (const Station& s : instance.stations)
        layout.station_slot_bits.push_back(s.allow_discharge ? 2 : 1);
    layout.bits_per_interval =
        std::accumulate(layout.station_slot_bits.begin(), layout.station_slot_bits.end(), 0);
    return layout;
}

Bits encode(const SchedulingInstance& instance, const Schedule& schedule) {
    const EncodingLayout layout = encoding_layout(instance);
    Bits bits(layout.length(), 0);

    for (int k = 0; k < layout.vehicles; ++k) {
        for (int i = 0; i < layout.intervals; ++i) {
            const ChargeAction act = schedule.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            if (act.dir == 0) continue;
            if (act.station < 0 || act.station >= instance.station_count())
                throw ParameterError("encode: action at unknown station");
            const std::size_t slot = layout.slot_offset(k, i, act.station);
            if (act.dir > 0) {
                bits[slot] = 1;
            } else {
                if (!instance.stations[static_cast<std::size_t>(act.station)].allow_discharge)
                    throw ParameterError("encode: discharge at charge-only station");
                bits[slot + 1] = 1;
            }
        }
        for (int s = 0; s < layout.tasks; ++s)
            if (schedule.assign[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)])
                bits[layout.assign_offset(s, k)] = 1;
    }
    return bits;
}

Schedule decode(const SchedulingInstance& instance, const Bits& bits) {
    const EncodingLayout layout = encoding_layout(instance);
    if (bits.size() != layout.length())
        throw ParameterError("decode: bit vector length mismatch");

    Schedule schedule = empty_schedule(instance);
    for (int k = 0; k < layout.vehicles; ++k) {
        for (int i = 0; i < layout.intervals; ++i) {
            int active_station = -1;
            int dir = 0;
            bool clean = true;
            for (int x = 0; x < instance.station_count(); ++x) {
                const std::size_t slot = layout.slot_offset(k, i, x);
                const bool charge = bits[slot] != 0;
                const bool discharge =
                    layout.station_slot_bits[static_cast<std::size_t>(x)] == 2 && bits[slot + 1] != 0;
                if (!charge && !discharge) continue;
                if (charge && discharge) clean = false;       // contradictory slot
                if (active_station >= 0) clean = false;       // two stations at once
                active_station = x;
                dir = discharge ? -1 : +1;
            }
            if (!clean) {
                schedule.structure_ok = false;
                schedule.structure_note = "conflicting charge bits at vehicle " +
                                          std::to_string(k) + ", interval " + std::to_string(i);
            } else if (active_station >= 0) {
                schedule.actions[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = {
                    static_cast<std::int8_t>(dir), static_cast<std::int16_t>(active_station)};
            }
        }
    }
    for (int s = 0; s < layout.tasks; ++s) {
        int owners = 0;
        for (int k = 0; k < layout.vehicles; ++k) {
            if (bits[layout.assign_offset(s, k)]) {
                schedule.assign[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] = 1;
                ++owners;
            }
        }
        if (owners != 1) {
            schedule.structure_ok = false;
            schedule.structure_note = "task " + std::to_string(s) + " has " +
                                      std::to_string(owners) + " owners";
        }
    }
    return schedule;
}

}  // namespace fleet
