#include "fleet/filters.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

namespace fleet {

namespace {

// Row of the least-squares smoothing operator: weights w such that w.dot(y)
// is the fitted polynomial evaluated at offset `eval` (offsets are sample
// positions within the window, relative to its first sample).
Eigen::VectorXd fit_weights(int window, int poly_order, int eval) {
    Eigen::MatrixXd a(window, poly_order + 1);
    for (int r = 0; r < window; ++r) {
        double p = 1.0;
        for (int c = 0; c <= poly_order; ++c) {
            a(r, c) = p;
            p *= static_cast<double>(r - window / 2);  // centred abscissa for conditioning
        }
    }
    Eigen::VectorXd basis(poly_order + 1);
    double p = 1.0;
    for (int c = 0; c <= poly_order; ++c) {
        basis(c) = p;
        p *= static_cast<double>(eval - window / 2);
    }
    // w = A (A^T A)^{-1} basis
    return a * (a.transpose() * a).ldlt().solve(basis);
}

}  // namespace

SpeedProfile savitzky_golay(const SpeedProfile& profile, int window, int poly_order) {
    const Eigen::Index n = profile.size();
    if (window % 2 == 0) throw ParameterError("savitzky_golay: window must be odd");
    if (poly_order < 0) throw ParameterError("savitzky_golay: poly_order must be >= 0");
    if (window <= poly_order) throw ParameterError("savitzky_golay: window must exceed poly_order");
    if (window > n) throw ParameterError("savitzky_golay: window larger than profile");

    const int half = window / 2;
    // One weight vector per in-window evaluation offset; interior samples all
    // use the centred one (offset = half).
    std::vector<Eigen::VectorXd> weights(window);
    for (int e = 0; e < window; ++e) weights[e] = fit_weights(window, poly_order, e);

    const Eigen::ArrayXd& v = profile.v();
    Eigen::ArrayXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index start = std::clamp<Eigen::Index>(i - half, 0, n - window);
        const int eval = static_cast<int>(i - start);
        const double fitted = weights[eval].dot(v.segment(start, window).matrix());
        out(i) = std::max(0.0, fitted);
    }
    return profile.with_speeds(std::move(out));
}

SpeedProfile kalman_smooth(const SpeedProfile& profile, double process_var_mps2sq,
                           double meas_var_mpssq) {
    if (!(process_var_mps2sq > 0.0)) throw ParameterError("kalman_smooth: process variance must be > 0");
    if (!(meas_var_mpssq > 0.0)) throw ParameterError("kalman_smooth: measurement variance must be > 0");

    const double dt = profile.dt_s();
    const double q = process_var_mps2sq * dt * dt;  // speed random walk driven by acceleration noise
    const double r = meas_var_mpssq;
    const Eigen::ArrayXd& z = profile.v();

    Eigen::ArrayXd out(profile.size());
    double x = z(0);
    double p = r;
    out(0) = std::max(0.0, x);
    for (Eigen::Index i = 1; i < profile.size(); ++i) {
        const double p_pred = p + q;
        const double gain = p_pred / (p_pred + r);
        x = x + gain * (z(i) - x);
        p = (1.0 - gain) * p_pred;
        out(i) = std::max(0.0, x);
    }
    return profile.with_speeds(std::move(out));
}

}  // namespace fleet
