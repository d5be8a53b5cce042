#include "fleet/speed_profile.hpp"

#include <cmath>

namespace fleet {

namespace {
constexpr double kSpacingTol = 1e-9;  // seconds
}

SpeedProfile::SpeedProfile(Eigen::ArrayXd t_s, Eigen::ArrayXd v_mps, double sample_rate_hz)
    : t_s_(std::move(t_s)), v_mps_(std::move(v_mps)), sample_rate_hz_(sample_rate_hz) {
    if (v_mps_.size() < 2) throw ParameterError("speed profile needs at least 2 samples");
    if (t_s_.size() != v_mps_.size()) throw ParameterError("speed profile: t/v size mismatch");
    if (!(sample_rate_hz_ > 0.0)) throw ParameterError("speed profile: sample rate must be positive");
    const double dt = 1.0 / sample_rate_hz_;
    for (Eigen::Index i = 0; i < v_mps_.size(); ++i) {
        if (!std::isfinite(t_s_(i)) || !std::isfinite(v_mps_(i)))
            throw ParameterError("speed profile: non-finite sample");
        if (v_mps_(i) < 0.0) throw ParameterError("speed profile: negative speed");
        if (t_s_(i) < 0.0) throw ParameterError("speed profile: negative timestamp");
        if (i > 0) {
            const double step = t_s_(i) - t_s_(i - 1);
            if (step <= 0.0) throw ParameterError("speed profile: timestamps not strictly increasing");
            if (std::abs(step - dt) > kSpacingTol)
                throw ParameterError("speed profile: non-uniform sample spacing");
        }
    }
}

SpeedProfile SpeedProfile::from_speeds(Eigen::ArrayXd v_mps, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) throw ParameterError("speed profile: sample rate must be positive");
    Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(v_mps.size(), 0.0,
                                                 static_cast<double>(v_mps.size() - 1) / sample_rate_hz);
    return SpeedProfile(std::move(t), std::move(v_mps), sample_rate_hz);
}

double SpeedProfile::distance_m() const {
    const double dt = dt_s();
    double d = 0.0;
    for (Eigen::Index i = 0; i + 1 < v_mps_.size(); ++i)
        d += 0.5 * (v_mps_(i) + v_mps_(i + 1)) * dt;
    return d;
}

SpeedProfile SpeedProfile::with_speeds(Eigen::ArrayXd v_mps) const {
    return SpeedProfile(t_s_, std::move(v_mps), sample_rate_hz_);
}

}  // namespace fleet
