#pragma once

#include <cstdint>
#include <vector>

#include "fleet/speed_profile.hpp"

namespace fleet {

/// One leg of a synthetic drive: hold `target_mps` for `duration_s`, with
/// white speed noise of `noise_mps` standard deviation on top.
struct SynthSegment {
    double duration_s = 60.0;
    double target_mps = 10.0;
    double noise_mps = 0.0;
};

/// Deterministic synthetic speed log; stands in for field recordings in
/// tests and demos. Consecutive segments are joined by a short linear ramp.
/// noise = 0 and a single segment yields an exactly constant profile.
SpeedProfile synth_gps(const std::vector<SynthSegment>& segments, std::uint64_t seed,
                       double sample_rate_hz = 10.0);

/// The same drive without noise; reference signal for filter comparisons.
SpeedProfile synth_gps_clean(const std::vector<SynthSegment>& segments, double sample_rate_hz = 10.0);

}  // namespace fleet
