#include <cmath>

#include <gtest/gtest.h>

#include "limlab/diagnostics.hpp"
#include "reference.hpp"

using namespace limlab;

namespace {

BallSampling balls_in(int d, int n = 32) {
    BallSampling b;
    b.n_balls = n;
    b.center_box = Cube{Vec::zeros(d), 4.0};
    return b;
}

}  // namespace

TEST(ApConstant, ConstantWeightIsOne) {
    for (double p : {1.0, 2.0, 3.0})
        EXPECT_NEAR(estimate_ap_constant(WeightSpec::constant(3), p, QuadratureConfig{}, balls_in(3)).value, 1.0, 1e-9);
}

TEST(ApConstant, StableUnderRefinementForLinearPower) {
    const WeightSpec w = WeightSpec::power(2, 1.0);
    QuadratureConfig q;
    const double coarse = estimate_ap_constant(w, 2.0, q, balls_in(2, 32)).value;
    const double fine = estimate_ap_constant(w, 2.0, q.with_samples(2 * q.samples_per_region), balls_in(2, 64)).value;
    EXPECT_TRUE(std::isfinite(coarse));
    EXPECT_NEAR(fine / coarse, 1.0, 0.1);
}

TEST(ApConstant, ScaleInvariant) {
    const WeightSpec w = WeightSpec::corridor(3, 1.0, 0.5);
    for (double p : {1.0, 2.0}) {
        const double a = estimate_ap_constant(w, p, QuadratureConfig{}, balls_in(3, 8)).value;
        const double b = estimate_ap_constant(w.scaled(3.7), p, QuadratureConfig{}, balls_in(3, 8)).value;
        EXPECT_NEAR(b / a, 1.0, 1e-12);
    }
}

TEST(ApConstant, MonotoneInBallCount) {
    const WeightSpec w = WeightSpec::power(3, 1.5);
    double previous = 0.0;
    for (int n : {4, 8, 16, 32}) {
        const double v = estimate_ap_constant(w, 2.0, QuadratureConfig{}, balls_in(3, n)).value;
        EXPECT_GE(v, previous) << "n_balls=" << n;
        previous = v;
    }
}

TEST(ApConstant, RejectsBadSampling) {
    BallSampling b = balls_in(3);
    b.r_min = 0.0;
    EXPECT_THROW(estimate_ap_constant(WeightSpec::constant(3), 2.0, QuadratureConfig{}, b), SpecError);
    EXPECT_THROW(estimate_ap_constant(WeightSpec::constant(2), 2.0, QuadratureConfig{}, balls_in(3)), SpecError);
}

TEST(ApMembership, LinearPowerFailsAOne) {
    EXPECT_EQ(ap_membership_sweep(WeightSpec::power(2, 1.0), 1.0, 3, 16, QuadratureConfig{}).verdict,
              MembershipVerdict::Growing);
}

TEST(ApMembership, PowerGridMatchesAdmissibleInterval) {
    for (int d : {2, 3})
        for (double p : {1.0, 2.0})
            for (double alpha : {-0.5 * d, -0.5, 0.5 * d * (p - 1.0), d * (p - 1.0) + 1.0, d * (p - 1.0) + 2.0}) {
                if (p == 1.0 && alpha == 0.0) continue;
                const bool inside = alpha > -d && alpha < d * (p - 1.0);
                const auto m = ap_membership_sweep(WeightSpec::power(d, alpha), p, 3, 16, QuadratureConfig{});
                EXPECT_EQ(m.verdict, inside ? MembershipVerdict::Bounded : MembershipVerdict::Growing)
                    << "d=" << d << " p=" << p << " alpha=" << alpha << " slope=" << m.slope;
            }
}

TEST(Doubling, ConstantWeight) {
    for (int d : {2, 3}) {
        QuadratureConfig q;
        q.force_monte_carlo = true;
        const double v = estimate_doubling(WeightSpec::constant(d), q, balls_in(d)).value;
        EXPECT_NEAR(v, std::ldexp(1.0, d), 0.02 * std::ldexp(1.0, d));
    }
}

TEST(Doubling, LinearPowerOnOriginBalls) {
    BallSampling b = balls_in(2);
    b.origin_every = 1;
    EXPECT_NEAR(estimate_doubling(WeightSpec::power(2, 1.0), QuadratureConfig{}, b).value, 8.0, 1e-9);
}

TEST(UnitCubeInfimum, ConstantWeight) {
    const InfimumReport r = unit_cube_infimum(WeightSpec::constant(3), 64.0, 1.0, QuadratureConfig{});
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_EQ(r.trend, InfimumTrend::BoundedBelow);
}

TEST(UnitCubeInfimum, HalfLineWeightVanishes) {
    EXPECT_EQ(unit_cube_infimum(WeightSpec::half_line_power(2, 0.5), 1024.0, 1.0, QuadratureConfig{}).trend,
              InfimumTrend::Vanishing);
}

TEST(UnitCubeInfimum, LinearPowerMinimumAtOrigin) {
    const WeightSpec w = WeightSpec::power(2, 1.0);
    const InfimumReport r = unit_cube_infimum(w, 256.0, 1.0, QuadratureConfig{});
    const double origin = ref::grid_integral([](const Vec& x) { return x.norm(); },
                                             Cube{Vec::zeros(2), 1.0}.box(), 1000);
    EXPECT_EQ(r.trend, InfimumTrend::BoundedBelow);
    EXPECT_NEAR(r.value / origin, 1.0, 2e-3);
}

TEST(UnitCubeInfimum, PowerTrendsMatchSign) {
    QuadratureConfig q;
    q.samples_per_region = 2048;
    for (double alpha : {-2.5, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        const InfimumReport r = unit_cube_infimum(WeightSpec::power(3, alpha), 1024.0, 1.0, q);
        EXPECT_EQ(r.trend, alpha < 0.0 ? InfimumTrend::Vanishing : InfimumTrend::BoundedBelow) << "alpha=" << alpha;
        if (alpha < 0.0) {
            const InfimumReport s = strip_infimum(WeightSpec::power(3, alpha), Cube{Vec::zeros(2), 1.0}, 1024, q);
            EXPECT_EQ(s.trend, InfimumTrend::Vanishing) << "alpha=" << alpha;
        }
    }
}

TEST(StripInfimum, ConstantWeight) {
    const InfimumReport r = strip_infimum(WeightSpec::constant(3), Cube{Vec::zeros(2), 1.0}, 64, QuadratureConfig{});
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_EQ(r.trend, InfimumTrend::BoundedBelow);
}

TEST(StripInfimum, HalfLineWeightMatchesClosedForm) {
    const InfimumReport r =
        strip_infimum(WeightSpec::half_line_power(3, 0.5), Cube{Vec::zeros(2), 1.0}, 1024, QuadratureConfig{});
    ASSERT_EQ(r.scales.size(), 1024u);
    for (std::size_t k = 0; k < r.scales.size(); ++k)
        EXPECT_NEAR(r.minima[k] / ref::inverse_sqrt_window(r.scales[k]), 1.0, 1e-9);
    EXPECT_EQ(r.trend, InfimumTrend::Vanishing);
    EXPECT_NEAR(r.slope, -0.5, 0.1);
}

TEST(StripInfimum, LinearPowerGrows) {
    const InfimumReport r = strip_infimum(WeightSpec::power(3, 1.0), Cube{Vec::zeros(2), 1.0}, 256, QuadratureConfig{});
    EXPECT_EQ(r.trend, InfimumTrend::BoundedBelow);
    EXPECT_NEAR(r.minima.back() / r.minima[r.minima.size() / 2 - 1], 2.0, 0.05);
}

TEST(StripInfimum, RejectsWrongBaseDimension) {
    EXPECT_THROW(strip_infimum(WeightSpec::constant(3), Cube{Vec::zeros(3), 1.0}, 64, QuadratureConfig{}), SpecError);
}

TEST(RadialWindow, ConstantProfile) {
    const InfimumReport r = radial_window_infimum(WeightSpec::radial(3, RadialProfile::constant(1.0)), 256.0);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_EQ(r.trend, InfimumTrend::BoundedBelow);
}

TEST(RadialWindow, CappedPowerVanishes) {
    const InfimumReport r = radial_window_infimum(WeightSpec::radial(3, RadialProfile::capped_power(0.5)), 1024.0);
    EXPECT_EQ(r.trend, InfimumTrend::Vanishing);
    const double s = r.scales.back();
    EXPECT_NEAR(r.minima.back() / ref::inverse_sqrt_window(s), 1.0, 1e-6);
}

TEST(RadialWindow, SinusoidBoundedBelow) {
    const InfimumReport r = radial_window_infimum(WeightSpec::radial(3, RadialProfile::sinusoid(2.0, 1.0, 1.0)), 1024.0);
    EXPECT_EQ(r.trend, InfimumTrend::BoundedBelow);
    EXPECT_GE(r.value, 2.0 - 2.0 * std::sin(0.5) - 1e-6);
    EXPECT_LE(r.value, 2.0 - 2.0 * std::sin(0.5) + 1e-3);
}

TEST(RadialWindow, RejectsNonRadial) {
    EXPECT_THROW(radial_window_infimum(WeightSpec::half_line_power(3, 0.5), 64.0), SpecError);
}
