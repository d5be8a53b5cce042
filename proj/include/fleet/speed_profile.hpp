#pragma once

#include <Eigen/Core>

#include "fleet/common.hpp"

namespace fleet {

struct SpeedSample {
    double t_s = 0.0;    // time since section start
    double v_mps = 0.0;  // ground speed
};

/// Uniformly sampled speed trace for one road section.
///
/// Timestamps must be strictly increasing and spaced 1/sample_rate_hz apart
/// (within 1 ns); speeds are non-negative. At least two samples.
class SpeedProfile {
public:
    SpeedProfile(Eigen::ArrayXd t_s, Eigen::ArrayXd v_mps, double sample_rate_hz);

    /// Build from speeds only, timestamps 0, 1/rate, 2/rate, ...
    static SpeedProfile from_speeds(Eigen::ArrayXd v_mps, double sample_rate_hz);

    const Eigen::ArrayXd& t() const { return t_s_; }
    const Eigen::ArrayXd& v() const { return v_mps_; }
    double sample_rate_hz() const { return sample_rate_hz_; }
    double dt_s() const { return 1.0 / sample_rate_hz_; }
    Eigen::Index size() const { return v_mps_.size(); }

    double duration_s() const { return t_s_(t_s_.size() - 1) - t_s_(0); }
    /// Trapezoidal distance covered by the profile.
    double distance_m() const;

    /// Same timestamps, new speeds (validated).
    SpeedProfile with_speeds(Eigen::ArrayXd v_mps) const;

private:
    Eigen::ArrayXd t_s_;
    Eigen::ArrayXd v_mps_;
    double sample_rate_hz_;
};

}  // namespace fleet
