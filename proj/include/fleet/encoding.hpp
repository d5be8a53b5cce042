#pragma once

#include "fleet/scheduling.hpp"

namespace fleet {

using Bits = std::vector<std::uint8_t>;

/// Bit layout of a schedule.
///
/// Charging block first, vehicle-major: for each vehicle, interval, station
/// one slot of one bit (charge?) or, where the station allows discharge, two
/// bits (charge, discharge; both set is invalid). The assignment block
/// follows, route-major: for each task one bit per vehicle, exactly one of
/// which may be set.
struct EncodingLayout {
    int vehicles = 0;
    int intervals = 0;
    std::vector<int> station_slot_bits;  // 1 or 2 per station
    int bits_per_interval = 0;           // sum over stations
    int tasks = 0;

    std::size_t charge_block_bits() const {
        return static_cast<std::size_t>(vehicles) * intervals * bits_per_interval;
    }
    std::size_t length() const {
        return charge_block_bits() + static_cast<std::size_t>(tasks) * vehicles;
    }
    std::size_t slot_offset(int vehicle, int interval, int station) const;
    std::size_t assign_offset(int task, int vehicle) const {
        return charge_block_bits() + static_cast<std::size_t>(task) * vehicles + vehicle;
    }
};

EncodingLayout encoding_layout(const SchedulingInstance& instance);

/// Throws ParameterError when the schedule cannot be represented (e.g. a
/// discharge at a charge-only station).
Bits encode(const SchedulingInstance& instance, const Schedule& schedule);

/// Never throws on content: structurally invalid bit patterns come back as a
/// schedule with structure_ok = false.
Schedule decode(const SchedulingInstance& instance, const Bits& bits);

}  // namespace fleet
