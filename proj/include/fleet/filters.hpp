#pragma once

#include "fleet/speed_profile.hpp"

namespace fleet {

/// Least-squares polynomial smoothing over a sliding window.
///
/// Every output sample is the value at its own position of a polynomial of
/// degree `poly_order` fitted to the surrounding `window` samples; near the
/// ends the window is shifted inward instead of shrunk, so signals that are
/// already polynomials of degree <= poly_order pass through unchanged.
/// Smoothed speeds are clamped at zero.
SpeedProfile savitzky_golay(const SpeedProfile& profile, int window, int poly_order);

/// Scalar constant-velocity Kalman filter over the speed series.
///
/// Process noise is white acceleration with variance `process_var_mps2sq`
/// ((m/s^2)^2); measurement noise variance is `meas_var_mpssq` ((m/s)^2).
/// Comparison baseline for savitzky_golay, not the default pipeline.
/// Smoothed speeds are clamped at zero.
SpeedProfile kalman_smooth(const SpeedProfile& profile, double process_var_mps2sq,
                           double meas_var_mpssq);

}  // namespace fleet
