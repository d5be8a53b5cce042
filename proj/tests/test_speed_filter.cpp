#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fleet/filters.hpp"
#include "fleet/synth.hpp"

using namespace fleet;

namespace {

double rms(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
    return std::sqrt((a - b).square().mean());
}

}  // namespace

TEST_CASE("savitzky_golay keeps a constant profile fixed") {
    SpeedProfile profile = SpeedProfile::from_speeds(Eigen::ArrayXd::Constant(200, 10.0), 10.0);
    const SpeedProfile out = savitzky_golay(profile, 21, 3);
    for (Eigen::Index i = 0; i < out.size(); ++i) CHECK(out.v()(i) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(out.t()(5) == profile.t()(5));
}

TEST_CASE("savitzky_golay reproduces a linear ramp everywhere") {
    Eigen::ArrayXd v(60);
    for (Eigen::Index i = 0; i < 60; ++i) v(i) = 0.25 * static_cast<double>(i);
    SpeedProfile profile = SpeedProfile::from_speeds(v, 1.0);
    const SpeedProfile out = savitzky_golay(profile, 5, 2);
    // Interior samples must match exactly; the shifted edge windows also
    // reproduce polynomials, so check everything.
    for (Eigen::Index i = 0; i < out.size(); ++i)
        CHECK(out.v()(i) == doctest::Approx(v(i)).epsilon(1e-10));
}

TEST_CASE("savitzky_golay leaves low-degree polynomials unchanged on interior samples") {
    const int window = 11, order = 4;
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::ArrayXd coeff(order + 1);
        for (int c = 0; c <= order; ++c) coeff(c) = rng.uniform() * 0.1;
        Eigen::ArrayXd v(80);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double x = static_cast<double>(i) / 40.0;
            double acc = 1.0;  // keep strictly positive so the zero clamp stays inert
            double xp = 1.0;
            for (int c = 0; c <= order; ++c) {
                acc += coeff(c) * xp;
                xp *= x;
            }
            v(i) = acc;
        }
        const SpeedProfile out = savitzky_golay(SpeedProfile::from_speeds(v, 2.0), window, order);
        for (Eigen::Index i = window / 2; i < v.size() - window / 2; ++i)
            CHECK(out.v()(i) == doctest::Approx(v(i)).epsilon(1e-9));
    }
}

TEST_CASE("savitzky_golay denoises a corrupted sine") {
    const Eigen::Index n = 600;
    Eigen::ArrayXd clean(n);
    for (Eigen::Index i = 0; i < n; ++i)
        clean(i) = 12.0 + 4.0 * std::sin(2.0 * 3.14159265358979 * static_cast<double>(i) / 150.0);
    Rng rng(4242);
    Eigen::ArrayXd noisy = clean;
    for (Eigen::Index i = 0; i < n; ++i) noisy(i) += 0.8 * rng.normal();

    const SpeedProfile out = savitzky_golay(SpeedProfile::from_speeds(noisy, 10.0), 21, 3);
    CHECK(rms(out.v(), clean) < rms(noisy, clean));
}

TEST_CASE("savitzky_golay clamps negative fits to zero") {
    // A sharp dip to zero can make the local polynomial fit undershoot.
    Eigen::ArrayXd v = Eigen::ArrayXd::Constant(40, 5.0);
    v.segment(18, 4) = 0.0;
    const SpeedProfile out = savitzky_golay(SpeedProfile::from_speeds(v, 1.0), 7, 2);
    CHECK((out.v() >= 0.0).all());
}

TEST_CASE("savitzky_golay rejects bad parameters") {
    SpeedProfile profile = SpeedProfile::from_speeds(Eigen::ArrayXd::Constant(30, 1.0), 1.0);
    CHECK_THROWS_AS(savitzky_golay(profile, 8, 3), ParameterError);   // even window
    CHECK_THROWS_AS(savitzky_golay(profile, 5, 5), ParameterError);   // order >= window
    CHECK_THROWS_AS(savitzky_golay(profile, 31, 3), ParameterError);  // window > samples
}

TEST_CASE("kalman_smooth tracks a constant input exactly in the low-noise limit") {
    SpeedProfile profile = SpeedProfile::from_speeds(Eigen::ArrayXd::Constant(50, 7.0), 10.0);
    const SpeedProfile out = kalman_smooth(profile, 0.1, 1e-12);
    for (Eigen::Index i = 10; i < out.size(); ++i)
        CHECK(std::abs(out.v()(i) - 7.0) < 1e-6);
}

TEST_CASE("kalman_smooth pulls an outlier toward the signal") {
    Eigen::ArrayXd v = Eigen::ArrayXd::Constant(40, 5.0);
    v(25) = 50.0;
    const SpeedProfile out = kalman_smooth(SpeedProfile::from_speeds(v, 1.0), 0.5, 4.0);
    const double at_outlier = out.v()(25);
    CHECK(std::abs(at_outlier - 5.0) < std::abs(at_outlier - 50.0));
}

TEST_CASE("kalman_smooth denoises the same corrupted sine") {
    const Eigen::Index n = 600;
    Eigen::ArrayXd clean(n);
    for (Eigen::Index i = 0; i < n; ++i)
        clean(i) = 12.0 + 4.0 * std::sin(2.0 * 3.14159265358979 * static_cast<double>(i) / 150.0);
    Rng rng(4242);  // same seed as the smoothing test above
    Eigen::ArrayXd noisy = clean;
    for (Eigen::Index i = 0; i < n; ++i) noisy(i) += 0.8 * rng.normal();

    // The sine swings quickly, so the model needs generous acceleration noise.
    const SpeedProfile out = kalman_smooth(SpeedProfile::from_speeds(noisy, 10.0), 25.0, 0.64);
    const double raw_rms = rms(noisy, clean);
    const double filtered_rms = rms(out.v(), clean);
    CHECK(filtered_rms < raw_rms);
    MESSAGE("comparison record: raw ", raw_rms, " kalman ", filtered_rms);
}

TEST_CASE("kalman_smooth rejects non-positive variances") {
    SpeedProfile profile = SpeedProfile::from_speeds(Eigen::ArrayXd::Constant(10, 1.0), 1.0);
    CHECK_THROWS_AS(kalman_smooth(profile, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(kalman_smooth(profile, 1.0, -2.0), ParameterError);
}

TEST_CASE("synth_gps is deterministic and respects zero noise") {
    const std::vector<SynthSegment> segments = {{30.0, 9.0, 0.0}};
    const SpeedProfile a = synth_gps(segments, 7);
    const SpeedProfile b = synth_gps(segments, 7);
    CHECK((a.v() == b.v()).all());
    for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a.v()(i) == 9.0);

    const std::vector<SynthSegment> noisy = {{30.0, 9.0, 1.0}, {20.0, 4.0, 1.0}};
    const SpeedProfile c = synth_gps(noisy, 11);
    const SpeedProfile d = synth_gps(noisy, 12);
    CHECK(rms(c.v(), d.v()) > 0.0);
}
