#include "fleet/dynamics.hpp"

#include <cmath>

namespace fleet {

void VehicleParams::validate() const {
    const double fields[] = {mass_kg, frontal_area_m2, drag_coeff, rolling_coeff,
                             powertrain_eff, air_density_kgm3, gravity_ms2};
    for (double f : fields)
        if (!(f > 0.0) || !std::isfinite(f))
            throw ParameterError("vehicle params must be strictly positive and finite");
    if (powertrain_eff > 1.0) throw ParameterError("powertrain efficiency must be in (0, 1]");
}

double instantaneous_power_w(const VehicleParams& params, double v_mps, double dv_dt_mps2,
                             double grade_angle_rad) {
    if (v_mps < 0.0) throw ParameterError("instantaneous_power: speed must be non-negative");
    if (std::abs(grade_angle_rad) >= 1.5707963267948966)
        throw ParameterError("instantaneous_power: grade angle must be within (-pi/2, pi/2)");
    const double aero = 0.5 * params.air_density_kgm3 * params.frontal_area_m2 * params.drag_coeff *
                        v_mps * v_mps * v_mps;
    const double rolling = params.mass_kg * params.gravity_ms2 * params.rolling_coeff * v_mps;
    const double inertial = params.mass_kg * dv_dt_mps2 * v_mps;
    const double grade = params.mass_kg * params.gravity_ms2 * std::tan(grade_angle_rad) * v_mps;
    return (aero + rolling + inertial + grade) / params.powertrain_eff;
}

double edge_energy_kwh(const VehicleParams& params, const SpeedProfile& profile,
                       double delta_z_m, bool clamp_regen) {
    if (profile.size() < 2) throw ParameterError("edge_energy: profile needs at least 2 samples");
    params.validate();

    const Eigen::ArrayXd& v = profile.v();
    const Eigen::Index n = v.size();
    const double dt = profile.dt_s();

    // Speed-dependent traction power per sample; derivative by central
    // differences (one-sided at the ends) so the inertial term telescopes
    // exactly on start-at-rest/end-at-rest profiles.
    auto dv_dt = [&](Eigen::Index i) {
        if (i == 0) return (v(1) - v(0)) / dt;
        if (i == n - 1) return (v(n - 1) - v(n - 2)) / dt;
        return (v(i + 1) - v(i - 1)) / (2.0 * dt);
    };
    auto traction_w = [&](Eigen::Index i) {
        const double aero = 0.5 * params.air_density_kgm3 * params.frontal_area_m2 *
                            params.drag_coeff * v(i) * v(i) * v(i);
        const double rolling = params.mass_kg * params.gravity_ms2 * params.rolling_coeff * v(i);
        const double inertial = params.mass_kg * dv_dt(i) * v(i);
        double p = (aero + rolling + inertial) / params.powertrain_eff;
        if (clamp_regen && p < 0.0) p = 0.0;
        return p;
    };

    double joules = 0.0;
    double prev = traction_w(0);
    for (Eigen::Index i = 1; i < n; ++i) {
        const double cur = traction_w(i);
        joules += 0.5 * (prev + cur) * dt;
        prev = cur;
    }
    joules -= params.mass_kg * params.gravity_ms2 * delta_z_m / params.powertrain_eff;
    return joules / kJoulesPerKwh;
}

}  // namespace fleet
