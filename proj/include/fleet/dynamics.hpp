#pragma once

#include "fleet/speed_profile.hpp"

namespace fleet {

/// Longitudinal-dynamics parameters of one vehicle type.
struct VehicleParams {
    double mass_kg = 1312.0;
    double frontal_area_m2 = 1.86;
    double drag_coeff = 0.32;
    double rolling_coeff = 0.0117;
    double powertrain_eff = 0.9;
    // Not part of the measured vehicle data; configurable because the case
    // study sits at ~2600 m altitude where air is noticeably thinner.
    double air_density_kgm3 = 1.225;
    double gravity_ms2 = 9.81;

    void validate() const;
};

/// Tractive power demand at one instant: aerodynamic drag, rolling
/// resistance, inertia and grade, all divided by powertrain efficiency.
/// Negative while decelerating or rolling downhill.
double instantaneous_power_w(const VehicleParams& params, double v_mps, double dv_dt_mps2,
                             double grade_angle_rad = 0.0);

/// Energy to traverse one road section (kWh).
///
/// Integrates the speed-dependent terms (aero + rolling + inertia) with the
/// trapezoidal rule at the native sample spacing, then applies the
/// elevation-change term -m*g*delta_z/eff analytically. With `clamp_regen`
/// set, negative instantaneous traction power is clamped to zero before
/// integration, i.e. braking recovers nothing.
double edge_energy_kwh(const VehicleParams& params, const SpeedProfile& profile,
                       double delta_z_m, bool clamp_regen = false);

}  // namespace fleet
