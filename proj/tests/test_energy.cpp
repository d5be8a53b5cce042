#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fleet/dynamics.hpp"

using namespace fleet;

namespace {

VehicleParams measured_vehicle() {
    // Saloon test vehicle: 1312 kg, 1.86 m^2, cd 0.32, fr 0.0117, eff 0.9.
    return VehicleParams{};
}

SpeedProfile constant_profile(double v_mps, double duration_s, double rate_hz) {
    const Eigen::Index n = static_cast<Eigen::Index>(duration_s * rate_hz) + 1;
    return SpeedProfile::from_speeds(Eigen::ArrayXd::Constant(n, v_mps), rate_hz);
}

// Accelerate from rest to peak and back to rest, symmetric triangle.
SpeedProfile triangle_profile(double peak_mps, double duration_s, double rate_hz) {
    const Eigen::Index n = static_cast<Eigen::Index>(duration_s * rate_hz) + 1;
    Eigen::ArrayXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        v(i) = peak_mps * (1.0 - std::abs(2.0 * x - 1.0));
    }
    return SpeedProfile::from_speeds(v, rate_hz);
}

}  // namespace

TEST_CASE("instantaneous power vanishes at standstill") {
    const VehicleParams p = measured_vehicle();
    CHECK(instantaneous_power_w(p, 0.0, 0.0, 0.0) == 0.0);
    CHECK(instantaneous_power_w(p, 0.0, 3.0, 0.0) == 0.0);
    CHECK(instantaneous_power_w(p, 0.0, -2.0, 0.4) == 0.0);
}

TEST_CASE("instantaneous power at 10 m/s matches the hand evaluation") {
    const VehicleParams p = measured_vehicle();
    // aero: 0.5 * 1.225 * 1.86 * 0.32 * 10^3 = 364.56 W
    // rolling: 1312 * 9.81 * 0.0117 * 10 = 1505.874 W
    const double aero = 0.5 * 1.225 * 1.86 * 0.32 * 1000.0;
    const double rolling = 1312.0 * 9.81 * 0.0117 * 10.0;
    const double expected = (aero + rolling) / 0.9;
    CHECK(expected == doctest::Approx(2078.26).epsilon(1e-4));
    CHECK(instantaneous_power_w(p, 10.0, 0.0, 0.0) == doctest::Approx(expected).epsilon(1e-12));

    // Adding 1 m/s^2 of acceleration adds m*a*v / eff.
    const double inertial = 1312.0 * 1.0 * 10.0 / 0.9;
    CHECK(instantaneous_power_w(p, 10.0, 1.0, 0.0) ==
          doctest::Approx(expected + inertial).epsilon(1e-12));
}

TEST_CASE("instantaneous power rejects singular grades and negative speed") {
    const VehicleParams p = measured_vehicle();
    CHECK_THROWS_AS(instantaneous_power_w(p, 1.0, 0.0, 1.5708), ParameterError);
    CHECK_THROWS_AS(instantaneous_power_w(p, 1.0, 0.0, -2.0), ParameterError);
    CHECK_THROWS_AS(instantaneous_power_w(p, -1.0, 0.0, 0.0), ParameterError);
}

TEST_CASE("edge energy of a constant cruise matches the closed form") {
    const VehicleParams p = measured_vehicle();
    const SpeedProfile profile = constant_profile(10.0, 100.0, 100.0);
    const double watts = (0.5 * 1.225 * 1.86 * 0.32 * 1000.0 + 1312.0 * 9.81 * 0.0117 * 10.0) / 0.9;
    const double expected_kwh = watts * 100.0 / 3.6e6;  // ~0.05773 kWh
    CHECK(expected_kwh == doctest::Approx(0.05773).epsilon(1e-3));
    CHECK(edge_energy_kwh(p, profile, 0.0) == doctest::Approx(expected_kwh).epsilon(1e-6));
}

TEST_CASE("edge energy applies the elevation term exactly as written") {
    const VehicleParams p = measured_vehicle();
    const SpeedProfile at_rest = constant_profile(0.0, 10.0, 10.0);
    // Zero traction, rising endpoint: the result is -m*g*dz/eff. The sign
    // follows the consumption formula literally: a positive elevation gain
    // *reduces* the reported edge energy.
    const double expected = -1312.0 * 9.81 * 10.0 / 0.9 / 3.6e6;
    CHECK(edge_energy_kwh(p, at_rest, 10.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(edge_energy_kwh(p, at_rest, -10.0) == doctest::Approx(-expected).epsilon(1e-12));
}

TEST_CASE("inertial term cancels over a start-at-rest end-at-rest profile") {
    const VehicleParams p = measured_vehicle();
    const SpeedProfile tri = triangle_profile(15.0, 60.0, 50.0);
    const double total = edge_energy_kwh(p, tri, 0.0);

    // Reference: aero + rolling only, integrated over the same samples.
    const Eigen::ArrayXd& v = tri.v();
    Eigen::ArrayXd integrand(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        integrand(i) = (0.5 * p.air_density_kgm3 * p.frontal_area_m2 * p.drag_coeff * v(i) * v(i) * v(i) +
                        p.mass_kg * p.gravity_ms2 * p.rolling_coeff * v(i)) /
                       p.powertrain_eff;
    }
    double joules = 0.0;
    for (Eigen::Index i = 0; i + 1 < v.size(); ++i)
        joules += 0.5 * (integrand(i) + integrand(i + 1)) * tri.dt_s();
    CHECK(total == doctest::Approx(joules / 3.6e6).epsilon(1e-9));
}

TEST_CASE("clamped edge energy is monotone in rolling and drag coefficients") {
    const SpeedProfile tri = triangle_profile(12.0, 40.0, 20.0);
    VehicleParams lo = measured_vehicle();
    for (double dz : {-5.0, 0.0, 5.0}) {
        VehicleParams hi_fr = lo;
        hi_fr.rolling_coeff *= 1.5;
        VehicleParams hi_cd = lo;
        hi_cd.drag_coeff *= 1.5;
        CHECK(edge_energy_kwh(hi_fr, tri, dz, true) >= edge_energy_kwh(lo, tri, dz, true));
        CHECK(edge_energy_kwh(hi_cd, tri, dz, true) >= edge_energy_kwh(lo, tri, dz, true));
    }
}

TEST_CASE("regeneration clamp never reduces the traction integral") {
    const VehicleParams p = measured_vehicle();
    // Hard deceleration: large negative inertial power mid-profile.
    Eigen::ArrayXd v(101);
    for (Eigen::Index i = 0; i < 101; ++i)
        v(i) = i < 50 ? 20.0 : 20.0 * (1.0 - static_cast<double>(i - 50) / 50.0);
    const SpeedProfile profile = SpeedProfile::from_speeds(v, 10.0);
    CHECK(edge_energy_kwh(p, profile, 0.0, true) >= edge_energy_kwh(p, profile, 0.0, false));
}

TEST_CASE("speed profiles require at least two samples") {
    CHECK_THROWS_AS(SpeedProfile::from_speeds(Eigen::ArrayXd::Constant(1, 3.0), 1.0), ParameterError);
}
