#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "limlab/rng.hpp"
#include "limlab/witnesses.hpp"
#include "reference.hpp"

using namespace limlab;

namespace {

double euclidean_gap(const Box& a, const Box& b) {
    double s = 0.0;
    for (int k = 0; k < a.dim(); ++k) {
        const double gap = std::fmax(0.0, std::fmax(b.lo[k] - a.hi[k], a.lo[k] - b.hi[k]));
        s += gap * gap;
    }
    return std::sqrt(s);
}

}  // namespace

TEST(LogLog, ValueAtOrigin) { EXPECT_NEAR(loglog_function(3).value(Vec::zeros(3)), std::log(std::log(2.0)), 1e-15); }

TEST(LogLog, GradientAtUnitRadius) {
    EXPECT_NEAR(loglog_function(3).grad_norm(Vec{0.0, 1.0, 0.0}), 2.0 / (3.0 * std::log(3.0)), 1e-14);
}

TEST(LogLog, GradientMatchesFiniteDifference) {
    const TestFunction u = loglog_function(2);
    for (double r : {0.3, 1.0, 7.0, 100.0}) {
        const double h = 1e-6 * r;
        const double fd = (u.value(Vec{r + h, 0.0}) - u.value(Vec{r - h, 0.0})) / (2.0 * h);
        EXPECT_NEAR(u.grad_norm(Vec{r, 0.0}) / fd, 1.0, 1e-6) << "r=" << r;
    }
}

TEST(HatBump, CenterPlateauAndSupport) {
    const Cube q{Vec{1.0, -2.0, 3.0}, 2.0};
    const TestFunction b = hat_bump(q);
    EXPECT_EQ(b.value(q.center), 1.0);
    EXPECT_EQ(b.value(Vec{1.49, -2.49, 3.49}), 1.0);
    EXPECT_EQ(b.value(Vec{2.01, -2.0, 3.0}), 0.0);
    EXPECT_EQ(b.value(Vec{10.0, 10.0, 10.0}), 0.0);
}

TEST(HatBump, GradientBoundedByLipschitzConstant) {
    const Cube q{Vec::zeros(3), 0.5};
    const TestFunction b = hat_bump(q);
    Rng rng(3);
    const Box box = q.box();
    double worst = 0.0;
    for (int k = 0; k < 20000; ++k) worst = std::fmax(worst, b.grad_norm(rng.in_box(box)));
    EXPECT_LE(worst, 2.0 * 3 / q.edge);
    EXPECT_GT(worst, 0.0);
}

TEST(BumpChain, AxisChainValues) {
    const TestFunction u = axis_chain(3, 2, 20);
    for (int i = 2; i <= 20; ++i) EXPECT_EQ(u.value(Vec{0.0, 0.0, std::ldexp(1.0, i)}), 1.0) << "i=" << i;
    for (int i = 3; i <= 20; ++i) EXPECT_EQ(u.value(Vec{0.0, 0.0, 1.5 * std::ldexp(1.0, i)}), 0.0) << "i=" << i;
}

TEST(BumpChain, EmptyChainIsZero) {
    const TestFunction u = bump_chain({}, {});
    EXPECT_EQ(u.value(Vec{1.0, 2.0}), 0.0);
    EXPECT_EQ(u.grad_norm(Vec{1.0, 2.0}), 0.0);
}

TEST(BumpChain, RejectsOverlapAndBadAmplitude) {
    const Cube a{Vec{0.0, 0.0}, 2.0}, b{Vec{1.0, 0.0}, 2.0};
    EXPECT_THROW(bump_chain({a, b}, {1.0, 1.0}), SpecError);
    EXPECT_THROW(bump_chain({a}, {0.0}), SpecError);
}

TEST(Energy, SingleBumpMatchesGridOracle) {
    const Cube q{Vec::zeros(2), 1.0};
    const TestFunction b = hat_bump(q);
    const WeightSpec w = WeightSpec::constant(2);
    const MassEstimate e = energy(b, w, 2.0, QuadratureConfig{}, 10.0);
    const double grid = ref::grid_integral([&](const Vec& x) { return std::pow(b.grad_norm(x), 2); }, q.box(), 400);
    EXPECT_LE(e.value, 4.0 * 4.0);
    EXPECT_LE(std::fabs(e.value - grid), 3.0 * e.std_error + 1e-9 * grid);
}

TEST(Energy, ConstantFunctionIsZero) {
    EXPECT_EQ(energy(TestFunction::constant(3, 2.5), WeightSpec::power(3, 0.5), 2.0, QuadratureConfig{}, 64.0).value,
              0.0);
}

TEST(Energy, TailPlusInnerIsTotalForBumpChain) {
    const TestFunction u = axis_chain(3, 2, 12);
    const WeightSpec w = WeightSpec::power(3, -0.5);
    const QuadratureConfig q;
    const double total = energy(u, w, 2.0, q, 1e5).value;
    const double inner = energy(u, w, 2.0, q, 300.0).value;
    const double tail = tail_energy(u, w, 2.0, q, 300.0, 1e5).value;
    EXPECT_NEAR(inner + tail, total, 1e-12 * total);
}

TEST(DivergenceWitness, PowerWeightProperties) {
    const WeightSpec w = WeightSpec::power(3, -1.5);
    const DivergenceWitness wit = divergence_witness(w, 2.0, 40, QuadratureConfig{});
    ASSERT_GE(wit.blocks.size(), 3u);
    const TestFunction& u = wit.function;
    EXPECT_EQ(u.value(Vec::zeros(3)), 0.0);
    double previous = 0.0;
    for (int k = 0; k <= 400; ++k) {
        const double r = std::exp2(0.1 * k);
        const double v = u.value(Vec{r, 0.0, 0.0});
        EXPECT_GE(v, previous) << "r=" << r;
        previous = v;
        const Vec x{r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)};
        EXPECT_NEAR(u.value(x), v, 1e-9 * std::fmax(1.0, v));
    }
    EXPECT_GT(wit.kappa, 0.0);
}

TEST(DivergenceWitness, GradientMatchesFiniteDifference) {
    const DivergenceWitness wit = divergence_witness(WeightSpec::power(3, -1.5), 2.0, 40, QuadratureConfig{});
    const TestFunction& u = wit.function;
    for (double r : {3.0, 11.0, 90.0, 1000.0, 5e4}) {
        const double h = 1e-7 * r;
        const double fd = (u.value(Vec{0.0, r + h, 0.0}) - u.value(Vec{0.0, r - h, 0.0})) / (2.0 * h);
        EXPECT_NEAR(u.grad_norm(Vec{0.0, r, 0.0}), fd, 1e-5 * std::fmax(1.0, fd)) << "r=" << r;
    }
}

TEST(DivergenceWitness, RefusesConvergentWeight) {
    EXPECT_THROW(divergence_witness(WeightSpec::power(3, 0.5), 2.0, 40, QuadratureConfig{}), PreconditionError);
}

TEST(GaussianFamily, EdgesGapsAndSpacing) {
    const GaussianCubeFamily f = gaussian_cube_family(17, 40, 3, 2.0, 2.0, 2.0);
    ASSERT_EQ(f.cubes.size(), 40u);
    EXPECT_EQ(f.cubes[0].edge, 0.5);
    for (std::size_t i = 0; i < f.cubes.size(); ++i)
        EXPECT_NEAR(f.cubes[i].edge, 0.5 / std::sqrt(static_cast<double>(i + 1)), 1e-15);
    for (std::size_t i = 0; i + 1 < f.centers.size(); ++i)
        EXPECT_EQ(f.centers[i + 1].last() - f.centers[i].last(), 4.0);
    for (std::size_t i = 0; i < f.cubes.size(); ++i)
        for (std::size_t j = i + 1; j < f.cubes.size(); ++j)
            EXPECT_GE(euclidean_gap(f.cubes[i].box(), f.cubes[j].box()), 2.0);
}

TEST(GaussianFamily, Reproducible) {
    const GaussianCubeFamily a = gaussian_cube_family(5, 10, 4, 2.5, 2.5, 2.5);
    const GaussianCubeFamily b = gaussian_cube_family(5, 10, 4, 2.5, 2.5, 2.5);
    for (std::size_t i = 0; i < a.centers.size(); ++i)
        for (int k = 0; k < 4; ++k) EXPECT_EQ(a.centers[i][k], b.centers[i][k]);
}

TEST(GaussianFamily, RejectsAlphaOutsideInterval) {
    EXPECT_THROW(gaussian_cube_family(1, 5, 3, 1.0, 2.0, 2.0), SpecError);
    EXPECT_THROW(gaussian_cube_family(1, 5, 3, 3.0, 2.0, 2.0), SpecError);
}

TEST(TowerFamily, ParameterConditions) {
    EXPECT_NO_THROW(tower_family(TowerWeight::Product, 3, 2.0, 0.6, 0.1));
    EXPECT_THROW(tower_family(TowerWeight::Product, 3, 2.0, 0.6, 0.2), SpecError);
}

TEST(TowerFamily, CubesCenteredOnAxis) {
    const TowerFamily e = tower_family(TowerWeight::Product, 3, 2.0, 0.6, 0.1, 10);
    ASSERT_EQ(e.cubes.size(), 10u);
    for (std::size_t k = 0; k < e.cubes.size(); ++k) {
        const int i = static_cast<int>(k) + 2;
        EXPECT_EQ(e.cubes[k].center.last(), std::ldexp(1.0, i));
        EXPECT_NEAR(e.cubes[k].edge, std::exp2(0.1 * i), 1e-12);
    }
}

TEST(Corridor, ParameterRangesAndConvergence) {
    const WeightSpec w = corridor_counterexample(3, 2.0, 2.0, 1.0, 0.5);
    EXPECT_EQ(rp_terms(w, 2.0, IndexRange{1, 30}, QuadratureConfig{}).verdict, SeriesVerdict::Converged);
    EXPECT_THROW(corridor_counterexample(3, 2.0, 1.0, 0.1, 0.5), SpecError);
    EXPECT_THROW(corridor_counterexample(3, 2.0, 2.0, 2.0, 0.5), SpecError);
}
