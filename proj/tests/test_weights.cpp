#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "limlab/weights.hpp"
#include "reference.hpp"

using namespace limlab;

namespace {

QuadratureConfig mc_quad(std::uint64_t seed = 7) {
    QuadratureConfig q;
    q.seed = seed;
    q.force_monte_carlo = true;
    return q;
}

Region annulus(int i, int d) { return Region{DyadicAnnulus(i, d).shell()}; }

Region unit_cube(int d) { return Region{Cube{Vec::zeros(d), 1.0}.box()}; }

}  // namespace

TEST(WeightEval, ConstantIsConstant) { EXPECT_EQ(eval_weight(WeightSpec::constant(2), Vec{3.0, 7.0}), 1.0); }

TEST(WeightEval, PowerOfNorm) { EXPECT_DOUBLE_EQ(eval_weight(WeightSpec::power(3, 2.0), Vec{0.0, 0.0, 2.0}), 4.0); }

TEST(WeightEval, CorridorPiecewiseFormula) {
    const double v = eval_weight(WeightSpec::corridor(2, 1.0, 0.5), Vec{0.0, 3.0});
    EXPECT_NEAR(v, std::exp2(-2.5), 1e-12);
}

TEST(WeightEval, NegativePowerIsSingularAtOrigin) {
    EXPECT_THROW(eval_weight(WeightSpec::power(3, -0.5), Vec::zeros(3)), SingularPointError);
}

TEST(WeightEval, RejectsMalformedSpecs) {
    EXPECT_THROW(WeightSpec::power(3, std::nan("")), SpecError);
    EXPECT_THROW(WeightSpec::constant(2, -1.0), SpecError);
    EXPECT_THROW(WeightSpec::power(3, -3.0), SpecError);
    EXPECT_THROW(WeightSpec::constant(9), std::invalid_argument);
}

TEST(RegionMass, ConstantDiskAnnulus) {
    const MassEstimate m = annulus_mass(WeightSpec::constant(2), DyadicAnnulus(0, 2), QuadratureConfig{});
    EXPECT_NEAR(m.value, 3.0 * std::numbers::pi, 1e-12);
    EXPECT_EQ(m.std_error, 0.0);
    EXPECT_EQ(m.method, MassMethod::ClosedForm);
}

TEST(RegionMass, PowerAnnulusClosedFormMatchesOracle) {
    for (int d : {2, 3, 4})
        for (double alpha : {-1.5, -1.0, 0.0, 0.5, 2.0})
            for (int i : {0, 3, 10}) {
                const double exact = ref::power_annulus_mass(d, alpha, i);
                const MassEstimate m = annulus_mass(WeightSpec::power(d, alpha), DyadicAnnulus(i, d), QuadratureConfig{});
                EXPECT_NEAR(m.value / exact, 1.0, 1e-12) << "d=" << d << " alpha=" << alpha << " i=" << i;
            }
}

TEST(RegionMass, PowerAnnulusMonteCarloWithinThreeSigma) {
    for (double alpha : {-1.5, 0.5, 2.0}) {
        const double exact = ref::power_annulus_mass(3, alpha, 2);
        const MassEstimate m = region_mass(WeightSpec::power(3, alpha), annulus(2, 3), mc_quad());
        EXPECT_EQ(m.method, MassMethod::StratifiedMC);
        EXPECT_LE(std::fabs(m.value - exact), 3.0 * m.std_error + 1e-12 * exact) << "alpha=" << alpha;
    }
}

TEST(RegionMass, ProductOfConstantsIsArea) {
    const WeightSpec w = WeightSpec::product(WeightSpec::constant(1), WeightSpec::constant(1));
    EXPECT_NEAR(region_mass(w, annulus(1, 2), QuadratureConfig{}).value, 12.0 * std::numbers::pi, 1e-9);
}

TEST(RegionMass, CubeExamples) {
    const QuadratureConfig q;
    EXPECT_DOUBLE_EQ(region_mass(WeightSpec::constant(3), unit_cube(3), q).value, 1.0);
    const Box strip{Vec{0.0, 4.0}, Vec{1.0, 9.0}};
    EXPECT_NEAR(region_mass(WeightSpec::half_line_power(2, 0.5), Region{strip}, q).value, 2.0, 1e-12);
    const Cube c{Vec{5.0, -2.0, 1.0}, 2.5};
    EXPECT_NEAR(region_mass(WeightSpec::power(3, 0.0), c, q).value, std::pow(2.5, 3), 1e-12);
}

TEST(RegionMass, ConstantScalingIsExact) {
    const Cube c{Vec{1.0, 2.0}, 3.0};
    EXPECT_DOUBLE_EQ(region_mass(WeightSpec::constant(2, 2.5), c, QuadratureConfig{}).value, 2.5 * 9.0);
}

TEST(RegionMass, DeterministicUnderFixedSeed) {
    const WeightSpec w = WeightSpec::power(3, -0.5);
    const MassEstimate a = region_mass(w, annulus(3, 3), mc_quad(11));
    const MassEstimate b = region_mass(w, annulus(3, 3), mc_quad(11));
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    const MassEstimate c = region_mass(w, annulus(3, 3), mc_quad(12));
    EXPECT_NE(a.value, c.value);
}

TEST(RegionMass, AdditivityOverDyadicChildren) {
    const Cube parent{Vec{3.0, 1.0, 2.0}, 2.0};
    const WeightSpec closed = WeightSpec::power(3, 0.0);
    const WeightSpec mc = WeightSpec::corridor(3, 1.0, 0.5);
    double closed_sum = 0.0, mc_sum = 0.0, var = 0.0;
    for (int k = 0; k < 8; ++k) {
        Vec c = parent.center;
        for (int a = 0; a < 3; ++a) c[a] += ((k >> a) & 1) ? 0.5 : -0.5;
        closed_sum += region_mass(closed, Cube{c, 1.0}, QuadratureConfig{}).value;
        const MassEstimate m = region_mass(mc, Cube{c, 1.0}, mc_quad(k + 1));
        mc_sum += m.value;
        var += m.std_error * m.std_error;
    }
    EXPECT_NEAR(closed_sum, region_mass(closed, parent, QuadratureConfig{}).value, 1e-12);
    const MassEstimate whole = region_mass(mc, parent, mc_quad(99));
    EXPECT_LE(std::fabs(mc_sum - whole.value), 3.0 * std::sqrt(var + whole.std_error * whole.std_error));
}

TEST(RegionMass, BoxMonteCarloMatchesGridOracle) {
    const WeightSpec w = WeightSpec::corridor(3, 1.0, 0.5);
    const Box box{Vec{-1.0, -1.0, 2.0}, Vec{1.0, 1.0, 4.0}};
    const double grid = ref::grid_integral([&](const Vec& x) { return w(x); }, box, 60);
    const MassEstimate m = region_mass(w, Region{box}, mc_quad());
    EXPECT_LE(std::fabs(m.value - grid), 3.0 * m.std_error + 1e-3 * grid);
}

TEST(RegionMass, RejectsDimensionMismatch) {
    EXPECT_THROW(region_mass(WeightSpec::constant(3), annulus(0, 2), QuadratureConfig{}), SpecError);
}

TEST(DualMass, ConstantDiskAnnulus) {
    const MassEstimate m = dual_mass(WeightSpec::constant(2), annulus(0, 2), 2.0, QuadratureConfig{});
    EXPECT_NEAR(m.value, 1.0 / (3.0 * std::numbers::pi), 1e-12);
}

TEST(DualMass, PEqualsTwoIsReciprocalMass) {
    const WeightSpec w = WeightSpec::power(3, 0.7);
    const double mass = region_mass(w, annulus(4, 3), QuadratureConfig{}).value;
    EXPECT_EQ(dual_mass(w, annulus(4, 3), 2.0, QuadratureConfig{}).value, 1.0 / mass);
}

TEST(DualMass, PowerClosedFormAndMonteCarlo) {
    const double mass = ref::sphere_measure(3) * (std::exp2(12.0) - std::exp2(8.0)) / 4.0;
    const double exact = 1.0 / std::sqrt(mass);
    const WeightSpec w = WeightSpec::power(3, 1.0);
    EXPECT_NEAR(dual_mass(w, annulus(2, 3), 3.0, QuadratureConfig{}).value / exact, 1.0, 1e-12);
    const MassEstimate m = dual_mass(w, annulus(2, 3), 3.0, mc_quad());
    EXPECT_LE(std::fabs(m.value - exact), 3.0 * m.std_error + 1e-12);
}

TEST(DualMass, InverseIdentityInClosedForm) {
    const WeightSpec w = WeightSpec::power(3, -0.5);
    for (double p : {1.5, 2.0, 3.0}) {
        const double mass = region_mass(w, annulus(5, 3), QuadratureConfig{}).value;
        const double dual = dual_mass(w, annulus(5, 3), p, QuadratureConfig{}).value;
        EXPECT_NEAR(dual * std::pow(mass, 1.0 / (p - 1.0)), 1.0, 1e-12);
    }
}

TEST(DualMass, RejectsPAtMostOne) {
    EXPECT_THROW(dual_mass(WeightSpec::constant(2), annulus(0, 2), 1.0, QuadratureConfig{}), SpecError);
}

TEST(InvEssSup, Examples) {
    const QuadratureConfig q;
    EXPECT_DOUBLE_EQ(inv_ess_sup(WeightSpec::constant(3), unit_cube(3), q).value, 1.0);
    EXPECT_DOUBLE_EQ(inv_ess_sup(WeightSpec::constant(3, 2.0), unit_cube(3), q).value, 0.5);
    EXPECT_NEAR(inv_ess_sup(WeightSpec::power(2, 0.0), annulus(0, 2), q).value, 1.0 / (3.0 * std::numbers::pi), 1e-12);
}

TEST(Quadrature, RejectsInvalidConfig) {
    QuadratureConfig q;
    q.samples_per_region = 0;
    EXPECT_THROW(q.validate(), SpecError);
}
