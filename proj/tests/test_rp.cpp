#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "limlab/diagnostics.hpp"
#include "limlab/rp.hpp"
#include "reference.hpp"

using namespace limlab;

namespace {

const std::vector<double> kGrid{-2.5, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

std::vector<double> powers(double ratio, int n) {
    std::vector<double> v;
    for (int i = 1; i <= n; ++i) v.push_back(std::pow(ratio, i));
    return v;
}

}  // namespace

TEST(ClassifySeries, GeometricConverges) {
    EXPECT_EQ(classify_series(powers(0.5, 30)).verdict, SeriesVerdict::Converged);
}

TEST(ClassifySeries, ConstantDiverges) {
    EXPECT_EQ(classify_series(std::vector<double>(30, 1.0)).verdict, SeriesVerdict::Diverged);
}

TEST(ClassifySeries, NearUnitRatioIsInconclusive) {
    EXPECT_EQ(classify_series(powers(0.999, 12)).verdict, SeriesVerdict::Inconclusive);
}

TEST(ClassifySeries, TooShortIsInconclusive) {
    const auto c = classify_series(powers(0.5, 5));
    EXPECT_TRUE(c.too_short);
    EXPECT_EQ(c.verdict, SeriesVerdict::Inconclusive);
}

TEST(ClassifySeries, SupremumRulesForPEqualsOne) {
    EXPECT_EQ(classify_series(std::vector<double>(30, 1.0), 1.0).verdict, SeriesVerdict::Converged);
    EXPECT_EQ(classify_series(powers(1.5, 30), 1.0).verdict, SeriesVerdict::Diverged);
}

TEST(RpTerms, ConstantWeightMatchesClosedForm) {
    const RpReport r = rp_terms(WeightSpec::constant(3), 2.0, IndexRange{1, 30}, QuadratureConfig{});
    ASSERT_EQ(r.terms.size(), 30u);
    for (int i = 1; i <= 30; ++i) {
        const double mass = ref::sphere_measure(3) * (std::exp2(3.0 * (i + 1)) - std::exp2(3.0 * i)) / 3.0;
        EXPECT_NEAR(r.terms[i - 1] / (std::exp2(2.0 * i) / mass), 1.0, 1e-12);
    }
    EXPECT_EQ(r.verdict, SeriesVerdict::Converged);
    EXPECT_TRUE(r.all_closed_form);
}

TEST(RpTerms, CriticalPowerDiverges) {
    const RpReport r = rp_terms(WeightSpec::power(3, -1.0), 2.0, IndexRange{1, 30}, QuadratureConfig{});
    EXPECT_EQ(r.verdict, SeriesVerdict::Diverged);
    EXPECT_NEAR(r.terms[29] / r.terms[28], 1.0, 1e-12);
    EXPECT_GT(r.terms.back(), 0.0);
}

TEST(RpTerms, SubcriticalPowerRatio) {
    const RpReport r = rp_terms(WeightSpec::power(3, 0.5), 2.0, IndexRange{1, 30}, QuadratureConfig{});
    EXPECT_EQ(r.verdict, SeriesVerdict::Converged);
    EXPECT_NEAR(r.terms[29] / r.terms[28], std::exp2(-1.5), 1e-12);
}

TEST(RpTerms, PowerGridMatchesTermExponent) {
    for (double p : {1.5, 2.0, 3.0})
        for (double alpha : kGrid) {
            const double exponent = (p - 3.0 - alpha) / (p - 1.0);
            const RpReport r = rp_terms(WeightSpec::power(3, alpha), p, IndexRange{1, 30}, QuadratureConfig{});
            EXPECT_NEAR(r.trend_slope, exponent, 1e-9) << "p=" << p << " alpha=" << alpha;
            EXPECT_EQ(r.verdict, exponent >= 0.0 ? SeriesVerdict::Diverged : SeriesVerdict::Converged)
                << "p=" << p << " alpha=" << alpha;
        }
}

TEST(RpTerms, PartialSumsMonotoneAndVerdictStableUnderExtension) {
    for (double alpha : kGrid) {
        const WeightSpec w = WeightSpec::power(3, alpha);
        const RpReport a = rp_terms(w, 2.0, IndexRange{1, 30}, QuadratureConfig{});
        const RpReport b = rp_terms(w, 2.0, IndexRange{1, 35}, QuadratureConfig{});
        for (std::size_t k = 1; k < b.partial.size(); ++k) EXPECT_GE(b.partial[k], b.partial[k - 1]);
        EXPECT_GE(b.total(), a.total());
        EXPECT_EQ(a.verdict, b.verdict) << "alpha=" << alpha;
    }
}

TEST(RpTerms, PEqualsOneUsesSupremum) {
    EXPECT_EQ(rp_terms(WeightSpec::constant(3), 1.0, IndexRange{1, 30}, QuadratureConfig{}).verdict,
              SeriesVerdict::Converged);
    EXPECT_EQ(rp_terms(WeightSpec::power(3, -2.5), 1.0, IndexRange{1, 30}, QuadratureConfig{}).verdict,
              SeriesVerdict::Diverged);
}

TEST(RpTerms, MonteCarloWeightsAreDeterministic) {
    const WeightSpec w = WeightSpec::corridor(3, 1.0, 0.5);
    QuadratureConfig q;
    q.seed = 5;
    const RpReport a = rp_terms(w, 2.0, IndexRange{1, 12}, q);
    const RpReport b = rp_terms(w, 2.0, IndexRange{1, 12}, q);
    EXPECT_EQ(a.terms, b.terms);
    EXPECT_FALSE(a.all_closed_form);
}

TEST(RpTerms, RejectsBadRange) {
    EXPECT_THROW(rp_terms(WeightSpec::constant(3), 2.0, IndexRange{1, 61}, QuadratureConfig{}), SpecError);
    EXPECT_THROW(rp_terms(WeightSpec::constant(3), 2.0, IndexRange{5, 4}, QuadratureConfig{}), SpecError);
    EXPECT_THROW(rp_terms(WeightSpec::constant(3), 0.5, IndexRange{1, 30}, QuadratureConfig{}), SpecError);
}

TEST(RpTranslated, ZeroShiftEqualsUntranslated) {
    const WeightSpec w = WeightSpec::half_line_power(3, 0.5);
    const RpReport a = rp_terms(w, 2.0, IndexRange{1, 12}, QuadratureConfig{});
    const RpReport b = rp_translated(w, 2.0, 0.0, IndexRange{1, 12}, QuadratureConfig{});
    EXPECT_EQ(a.terms, b.terms);
}

TEST(RpTranslated, ConstantWeightIsTranslationInvariant) {
    const WeightSpec w = WeightSpec::constant(3);
    const RpReport a = rp_terms(w, 2.0, IndexRange{1, 30}, QuadratureConfig{});
    for (double t : {1.0, 37.0, 4096.0})
        EXPECT_EQ(a.terms, rp_translated(w, 2.0, t, IndexRange{1, 30}, QuadratureConfig{}).terms);
}

TEST(RpTranslated, HalfLineWeightGrowsWithShift) {
    const WeightSpec w = WeightSpec::half_line_power(3, 0.5);
    double previous = 0.0;
    for (int m = 4; m <= 12; ++m) {
        const double total = rp_translated(w, 2.0, std::ldexp(1.0, m), IndexRange{1, 30}, QuadratureConfig{}).total();
        EXPECT_GT(total, previous) << "m=" << m;
        previous = total;
    }
}

TEST(RpTranslated, PowerWeightsComparableForSmallShifts) {
    for (double alpha : kGrid) {
        const WeightSpec w = WeightSpec::power(3, alpha);
        const double base = rp_terms(w, 2.0, IndexRange{1, 30}, QuadratureConfig{}).total();
        for (double t : {0.5, 1.0, 2.0}) {
            const double shifted = rp_translated(w, 2.0, t, IndexRange{1, 30}, QuadratureConfig{}).total();
            EXPECT_LE(shifted / base, 10.0) << "alpha=" << alpha << " t=" << t;
            EXPECT_GE(shifted / base, 0.1) << "alpha=" << alpha << " t=" << t;
        }
    }
}

TEST(SupRpSweep, Verdicts) {
    std::vector<double> grid;
    for (int k = 0; k <= 12; ++k) grid.push_back(std::ldexp(1.0, k));
    const QuadratureConfig q;
    EXPECT_EQ(sup_rp_sweep(WeightSpec::constant(3), 2.0, grid, IndexRange{1, 30}, q).verdict,
              SweepVerdict::UniformlyBounded);
    EXPECT_EQ(sup_rp_sweep(WeightSpec::half_line_power(3, 0.5), 2.0, grid, IndexRange{1, 30}, q).verdict,
              SweepVerdict::Growing);
    EXPECT_EQ(sup_rp_sweep(WeightSpec::power(3, 0.5), 2.0, grid, IndexRange{1, 30}, q).verdict,
              SweepVerdict::UniformlyBounded);
}

TEST(SupRpSweep, RejectsShortGrid) {
    const std::vector<double> grid{1.0, 2.0, 4.0};
    EXPECT_THROW(sup_rp_sweep(WeightSpec::constant(3), 2.0, grid, IndexRange{1, 30}, QuadratureConfig{}), SpecError);
}

TEST(RemarkImplication, UnitCubeBoundedBelowImpliesConvergence) {
    QuadratureConfig q;
    q.samples_per_region = 2048;
    for (double alpha : kGrid) {
        const WeightSpec w = WeightSpec::power(3, alpha);
        const InfimumReport inf = unit_cube_infimum(w, 1024.0, 1.0, q);
        if (inf.trend == InfimumTrend::BoundedBelow) {
            EXPECT_EQ(rp_terms(w, 2.0, IndexRange{1, 30}, q).verdict, SeriesVerdict::Converged) << "alpha=" << alpha;
        }
    }
}

TEST(RpTable, CsvHasHeaderAndRows) {
    const RpReport r = rp_terms(WeightSpec::constant(3), 2.0, IndexRange{1, 10}, QuadratureConfig{});
    const std::string csv = rp_table_csv(r);
    EXPECT_EQ(csv.rfind("i,term", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}
