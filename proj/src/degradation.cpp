#include "fleet/degradation.hpp"

#include <cmath>

namespace fleet {

namespace {
constexpr double kKelvinOffset = 273.15;
}

void DegradationParams::validate() const {
    const double positive[] = {battery_cost == 0.0 ? 1.0 : battery_cost,  // zero cost is allowed
                               lifespan_a,
                               lifespan_b,
                               soc_slope,
                               soc_offset,
                               projected_years,
                               capacity_fade_limit,
                               thermal_resistance_c_per_kw,
                               hours_per_year,
                               cycle_fit_scale,
                               cycle_fit_exponent};
    for (double v : positive)
        if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("degradation params must be positive");
    if (battery_cost < 0.0) throw ParameterError("degradation: battery cost must be >= 0");
    if (capacity_fade_limit > 1.0) throw ParameterError("degradation: capacity fade limit in (0, 1]");
}

double lifespan_years(double temperature_c, const DegradationParams& params) {
    const double t = params.temperatures_in_kelvin ? temperature_c + kKelvinOffset : temperature_c;
    if (!(t > 0.0)) throw ParameterError("lifespan_years: non-physical temperature");
    return params.lifespan_a * std::exp(params.lifespan_b / t);
}

double cycles_to_failure(double dod, const DegradationParams& params) {
    if (!(dod > 0.0) || dod > 1.0)
        throw ParameterError("cycles_to_failure: depth of discharge must be in (0, 1]");
    return std::pow(dod / params.cycle_fit_scale, -1.0 / params.cycle_fit_exponent);
}

double lifetime_loss_temperature(const std::vector<double>& charge_power_kw, double step_hours,
                                 double t_max_hours, const DegradationParams& params) {
    if (step_hours < 0.0 || t_max_hours < 0.0)
        throw ParameterError("lifetime_loss_temperature: negative duration");
    const double t_ch = step_hours * static_cast<double>(charge_power_kw.size());
    if (t_ch > t_max_hours + 1e-9)
        throw ParameterError("lifetime_loss_temperature: charge time exceeds available time");

    double loss = 0.0;
    for (double p : charge_power_kw) {
        const double pack_temp = params.ambient_c + params.thermal_resistance_c_per_kw * std::abs(p);
        loss += step_hours / (params.hours_per_year * lifespan_years(pack_temp, params));
    }
    loss += (t_max_hours - t_ch) /
            (params.hours_per_year * lifespan_years(params.ambient_c, params));
    return loss;
}

double lifetime_loss_soc(double soc_avg_fraction, const DegradationParams& params) {
    return (params.soc_slope * soc_avg_fraction - params.soc_offset) /
           (params.capacity_fade_limit * params.projected_years * params.hours_per_year);
}

CycleDecomposition extract_subcycles(const Eigen::ArrayXd& soc_trace_kwh, double capacity_kwh) {
    if (!(capacity_kwh > 0.0)) throw ParameterError("extract_subcycles: capacity must be positive");
    CycleDecomposition decomp;
    double drop = 0.0;
    for (Eigen::Index i = 1; i < soc_trace_kwh.size(); ++i) {
        const double delta = soc_trace_kwh(i) - soc_trace_kwh(i - 1);
        if (delta < 0.0) {
            drop -= delta;
        } else if (delta > 0.0 && drop > 0.0) {
            decomp.dods.push_back(drop / capacity_kwh);
            drop = 0.0;
        }
        // flat stretches extend the current segment
    }
    if (drop > 0.0) decomp.dods.push_back(drop / capacity_kwh);

    if (!decomp.dods.empty()) {
        double sum = 0.0;
        for (double d : decomp.dods) sum += d;
        decomp.dod_avg = sum / static_cast<double>(decomp.dods.size());
    }
    return decomp;
}

double lifetime_loss_dod(const CycleDecomposition& decomp, const DegradationParams& params) {
    if (decomp.count() == 0) return 0.0;
    double throughput = 0.0;  // in capacity units; capacity cancels
    for (double d : decomp.dods) throughput += d;
    return throughput / (cycles_to_failure(decomp.dod_avg, params) * decomp.dod_avg);
}

DegradationReport degradation_cost(const Eigen::ArrayXd& soc_trace_kwh, double capacity_kwh,
                                   const std::vector<double>& charge_power_kw, double step_hours,
                                   double t_max_hours, const DegradationParams& params) {
    params.validate();
    if (!(capacity_kwh > 0.0)) throw ParameterError("degradation_cost: capacity must be positive");

    DegradationReport report;
    // Trapezoidal time average of the trace; samples are equally spaced.
    double mean = 0.0;
    const Eigen::Index n = soc_trace_kwh.size();
    if (n >= 2) {
        mean = (soc_trace_kwh.segment(1, n - 2).sum() +
                0.5 * (soc_trace_kwh(0) + soc_trace_kwh(n - 1))) /
               static_cast<double>(n - 1);
    } else if (n == 1) {
        mean = soc_trace_kwh(0);
    }
    report.soc_avg_fraction = mean / capacity_kwh;

    const CycleDecomposition decomp = extract_subcycles(soc_trace_kwh, capacity_kwh);
    report.dod_avg = decomp.dod_avg;
    report.subcycles = decomp.count();

    report.temperature_loss =
        lifetime_loss_temperature(charge_power_kw, step_hours, t_max_hours, params);
    report.soc_loss = lifetime_loss_soc(report.soc_avg_fraction, params);
    report.dod_loss = lifetime_loss_dod(decomp, params);
    report.cost =
        params.battery_cost * (report.temperature_loss + report.soc_loss + report.dod_loss);
    return report;
}

}  // namespace fleet
