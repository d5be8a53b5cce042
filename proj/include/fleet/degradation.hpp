#pragma once

#include <Eigen/Core>

#include <vector>

#include "fleet/common.hpp"

namespace fleet {

/// Lithium-ion lifetime-loss model constants. Defaults are the published
/// fit; every value can be overridden from configuration.
struct DegradationParams {
    double battery_cost = 10000.0;         // money
    double lifespan_a = 3.73e-4;           // years, pre-exponential
    double lifespan_b = 636.0;             // temperature scale of the exponent
    double soc_slope = 1.6e-5;             // m_a
    double soc_offset = 6.4e-6;            // d_a
    double projected_years = 15.0;         // y_p
    double capacity_fade_limit = 0.80;     // usable-capacity fraction at end of life
    double thermal_resistance_c_per_kw = 2.0;
    double ambient_c = 25.0;
    double hours_per_year = 8760.0;
    double cycle_fit_scale = 145.71;       // cycles-to-failure power-law scale
    double cycle_fit_exponent = 0.6844;    // cycles-to-failure power-law exponent
    bool temperatures_in_kelvin = true;    // lifespan_years() unit for T

    void validate() const;
};

/// Battery lifespan in years at a constant temperature: a * exp(b / T).
/// `temperature_c` is ambient + heating in degrees Celsius; the exponent is
/// evaluated in Kelvin unless the params say otherwise.
double lifespan_years(double temperature_c, const DegradationParams& params);

/// Cycles to failure at a given depth of discharge (fraction of capacity).
double cycles_to_failure(double dod, const DegradationParams& params);

/// Fraction of battery life consumed by heating during charging plus the
/// idle-calendar remainder. `charge_power_kw` holds one piecewise-constant
/// |power| value per charging step of `step_hours`; `t_max_hours` is the
/// total non-driving time the charge could have used.
double lifetime_loss_temperature(const std::vector<double>& charge_power_kw, double step_hours,
                                 double t_max_hours, const DegradationParams& params);

/// Fraction of battery life consumed per day by holding an average state of
/// charge (fraction of capacity); affine with root at soc_offset/soc_slope.
double lifetime_loss_soc(double soc_avg_fraction, const DegradationParams& params);

/// Discharge subcycles of one day: each maximal monotone-decreasing segment
/// of the trace, as a fraction of capacity.
struct CycleDecomposition {
    std::vector<double> dods;
    double dod_avg = 0.0;
    int count() const { return static_cast<int>(dods.size()); }
};

CycleDecomposition extract_subcycles(const Eigen::ArrayXd& soc_trace_kwh, double capacity_kwh);

/// Energy-throughput lifetime loss: sum of subcycle DODs over the throughput
/// a battery sustains at the day's average DOD.
double lifetime_loss_dod(const CycleDecomposition& decomp, const DegradationParams& params);

struct DegradationReport {
    double temperature_loss = 0.0;
    double soc_loss = 0.0;
    double dod_loss = 0.0;
    double cost = 0.0;
    double soc_avg_fraction = 0.0;
    double dod_avg = 0.0;
    int subcycles = 0;
};

/// Money cost of one day's operation for a single battery: battery cost
/// times the three lifetime-loss terms, reported separately.
DegradationReport degradation_cost(const Eigen::ArrayXd& soc_trace_kwh, double capacity_kwh,
                                   const std::vector<double>& charge_power_kw, double step_hours,
                                   double t_max_hours, const DegradationParams& params);

}  // namespace fleet
