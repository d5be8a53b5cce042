#include "fleet/synth.hpp"

#include <algorithm>
#include <cmath>

namespace fleet {

namespace {

Eigen::ArrayXd target_series(const std::vector<SynthSegment>& segments, double rate_hz) {
    if (segments.empty()) throw ParameterError("synth_gps: no segments");
    double total_s = 0.0;
    for (const SynthSegment& s : segments) {
        if (!(s.duration_s > 0.0) || s.target_mps < 0.0 || s.noise_mps < 0.0)
            throw ParameterError("synth_gps: bad segment");
        total_s += s.duration_s;
    }
    const Eigen::Index n = static_cast<Eigen::Index>(std::llround(total_s * rate_hz)) + 1;
    Eigen::ArrayXd v(n);

    double seg_start = 0.0;
    std::size_t seg = 0;
    double prev_target = segments[0].target_mps;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate_hz;
        while (seg + 1 < segments.size() && t >= seg_start + segments[seg].duration_s) {
            seg_start += segments[seg].duration_s;
            prev_target = segments[seg].target_mps;
            ++seg;
        }
        const SynthSegment& s = segments[seg];
        // Ramp from the previous segment's speed over the first few seconds.
        const double ramp_s = std::min(6.0, 0.5 * s.duration_s);
        const double into = t - seg_start;
        double target = s.target_mps;
        if (seg > 0 && into < ramp_s)
            target = prev_target + (s.target_mps - prev_target) * (into / ramp_s);
        v(i) = target;
    }
    return v;
}

}  // namespace

SpeedProfile synth_gps(const std::vector<SynthSegment>& segments, std::uint64_t seed,
                       double sample_rate_hz) {
    Eigen::ArrayXd v = target_series(segments, sample_rate_hz);
    Rng rng(derive_seed(seed, 0x6b5));

    double seg_start = 0.0;
    std::size_t seg = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double t = static_cast<double>(i) / sample_rate_hz;
        while (seg + 1 < segments.size() && t >= seg_start + segments[seg].duration_s) {
            seg_start += segments[seg].duration_s;
            ++seg;
        }
        if (segments[seg].noise_mps > 0.0) v(i) += segments[seg].noise_mps * rng.normal();
        v(i) = std::max(0.0, v(i));
    }
    return SpeedProfile::from_speeds(std::move(v), sample_rate_hz);
}

SpeedProfile synth_gps_clean(const std::vector<SynthSegment>& segments, double sample_rate_hz) {
    return SpeedProfile::from_speeds(target_series(segments, sample_rate_hz), sample_rate_hz);
}

}  // namespace fleet
