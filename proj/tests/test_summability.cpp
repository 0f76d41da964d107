#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "summa/sequences.hpp"
#include "summa/summability.hpp"

using summa::ConditionStatus;
using summa::Regularity;
using summa::RowSpec;
using summa::StepRandomVariable;

TEST(Summability, CesaroRowsAreArithmeticMeans) {
    const auto c = summa::cesaro();
    for (std::size_t i : {1u, 2u, 7u, 100u}) {
        const auto r = c.row(i);
        ASSERT_EQ(r.coefficients.size(), i);
        for (double a : r.coefficients) EXPECT_EQ(a, 1.0 / static_cast<double>(i));
        EXPECT_EQ(r.support(), i);
    }
    EXPECT_THROW(c.row(0), summa::ConfigError);
}

TEST(Summability, DenseMatrixHasFinitelyManyRows) {
    const auto d = summa::dense({RowSpec{{1.0}}, RowSpec{{0.5, 0.5}}});
    EXPECT_EQ(d.row_count(), 2u);
    EXPECT_EQ(d.row(2).coefficients, (std::vector{0.5, 0.5}));
    EXPECT_THROW(d.row(3), summa::ConfigError);
    EXPECT_THROW(summa::dense({}), summa::ConfigError);
    EXPECT_THROW(summa::dense({RowSpec{{std::nan("")}}}), summa::ConfigError);
    EXPECT_THROW(summa::dense({RowSpec{{1.0}, summa::L1TailBound{-1.0}}}), summa::ConfigError);
}

TEST(Summability, ApplyCesaroToExampleOne) {
    const auto fam = summa::example1_family();
    const auto x = fam.prefix(32);
    for (std::size_t n : {1u, 4u, 9u, 16u, 31u}) {
        const auto y = summa::apply_row(summa::cesaro(), n, x);
        const auto expect = oracle::cesaro_example1_cells(n);
        for (std::size_t c = 0; c < oracle::cells; ++c) {
            const summa::DyadicRational w(summa::BigInt(c), 8);
            ASSERT_DOUBLE_EQ(y.evaluate(w).finite_part(), expect[c]) << "n=" << n << " cell " << c;
        }
    }
}

TEST(Summability, ApplyIdentityReturnsTheTerm) {
    const auto x = summa::example1_family().prefix(20);
    for (std::size_t n = 1; n <= 20; ++n)
        EXPECT_EQ(summa::apply_row(summa::identity_matrix(), n, x).simplified(), x[n - 1].simplified());
}

TEST(Summability, ApplyNeedsEnoughTerms) {
    const auto x = summa::example1_family().prefix(4);
    EXPECT_THROW(summa::apply_row(summa::cesaro(), 5, x), summa::ConfigError);
}

TEST(Summability, BoundedTailNeedsCertification) {
    const auto a = summa::dense({RowSpec{{0.5}, summa::L1TailBound{0.25}}});
    const std::vector<StepRandomVariable> x{StepRandomVariable::constant(2.0)};
    EXPECT_THROW(summa::apply_row(a, 1, x), summa::ConfigError);
    summa::ApplyOptions opt;
    opt.tail_value_bound = 2.0;
    opt.precision = 0.4;
    EXPECT_THROW(summa::apply_row(a, 1, x, opt), summa::ConfigError);
    opt.precision = 0.5;
    EXPECT_EQ(summa::apply_row(a, 1, x, opt), StepRandomVariable::constant(1.0));
}

TEST(Summability, ApplyMatrixIsIndependentOfThreadCount) {
    const auto x = summa::example1_family().prefix(64);
    const auto one = summa::apply_matrix(summa::cesaro(), x, 64, {}, 1);
    const auto four = summa::apply_matrix(summa::cesaro(), x, 64, {}, 4);
    ASSERT_EQ(one.size(), 64u);
    EXPECT_EQ(one, four);
    EXPECT_THROW(summa::apply_matrix(summa::cesaro(), x, 65, {}, 3), summa::ConfigError);
}

TEST(Regularity, CesaroIsRegular) {
    const auto r = summa::check_regularity(summa::cesaro(), 1000, 1e-9);
    EXPECT_EQ(r.overall, Regularity::regular);
    EXPECT_EQ(r.norm_estimate, 1.0);
    EXPECT_EQ(r.bounded_norm.status, ConditionStatus::holds_at_depth);
    EXPECT_TRUE(r.columns_vanish.certified);
    EXPECT_TRUE(r.row_sums_to_one.certified);
}

TEST(Regularity, IdentityIsRegular) {
    const auto r = summa::check_regularity(summa::identity_matrix(), 50, 1e-9);
    EXPECT_EQ(r.overall, Regularity::regular);
    EXPECT_EQ(r.norm_estimate, 1.0);
}

TEST(Regularity, FirstColumnOnesFailsOnColumnOne) {
    for (std::size_t depth : {1u, 2u, 10u, 100u}) {
        const auto r = summa::check_regularity(summa::first_column_ones(), depth, 1e-9);
        EXPECT_EQ(r.overall, Regularity::not_regular) << depth;
        ASSERT_EQ(r.columns_vanish.status, ConditionStatus::fails);
        ASSERT_TRUE(r.columns_vanish.witness);
        EXPECT_EQ(r.columns_vanish.witness->index, 1u);
        EXPECT_EQ(r.columns_vanish.witness->value, 1.0);
        EXPECT_EQ(r.row_sums_to_one.status, ConditionStatus::holds_at_depth);
    }
}

TEST(Regularity, UnflaggedCesaroPrefixIsUndetermined) {
    std::vector<RowSpec> rows;
    for (std::size_t i = 1; i <= 200; ++i)
        rows.push_back(RowSpec{std::vector<double>(i, 1.0 / static_cast<double>(i))});
    const auto r = summa::check_regularity(summa::dense(std::move(rows)), 200, 1e-9);
    EXPECT_EQ(r.overall, Regularity::undetermined_at_depth);
    EXPECT_NE(r.columns_vanish.status, ConditionStatus::fails);
    EXPECT_EQ(r.row_sums_to_one.status, ConditionStatus::holds_at_depth);
    EXPECT_NEAR(r.norm_estimate, 1.0, 1e-12);
}

TEST(Regularity, RowSumsAwayFromOneFail) {
    std::vector<RowSpec> rows;
    for (std::size_t i = 1; i <= 40; ++i)
        rows.push_back(RowSpec{std::vector<double>(i, 2.0 / static_cast<double>(i))});
    const auto r = summa::check_regularity(summa::dense(std::move(rows)), 40, 1e-9);
    EXPECT_EQ(r.row_sums_to_one.status, ConditionStatus::fails);
    EXPECT_EQ(r.overall, Regularity::not_regular);
}

TEST(Regularity, FailureWithWitnessPersistsWithDepth) {
    // A generic generator with a column floor and a slowly shrinking row.
    const summa::SummabilityMatrix m(
        "floor_plus_mean", [](std::size_t i) {
            std::vector<double> c(i + 1, 0.5 / static_cast<double>(i));
            c[0] = 0.5;
            return RowSpec{std::move(c)};
        });
    for (std::size_t d = 1; d <= 64; ++d) {
        const auto r = summa::check_regularity(m, d, 1e-6);
        ASSERT_EQ(r.columns_vanish.status, ConditionStatus::fails) << d;
        ASSERT_EQ(r.columns_vanish.witness->index, 1u);
    }
    for (std::size_t d = 1; d <= 64; ++d)
        ASSERT_EQ(summa::check_regularity(summa::first_column_ones(), d, 1e-9).overall,
                  Regularity::not_regular);
}

TEST(Regularity, RejectsBadArguments) {
    EXPECT_THROW(summa::check_regularity(summa::cesaro(), 0, 1e-9), summa::ConfigError);
    EXPECT_THROW(summa::check_regularity(summa::cesaro(), 10, 0.0), summa::ConfigError);
}

TEST(Regularity, CompensatedSumIsAccurate) {
    summa::detail::CompensatedSum s;
    for (int k = 0; k < 1000; ++k) s.add(0.001);
    EXPECT_NEAR(s.value(), 1.0, 1e-15);
    summa::detail::CompensatedSum t;
    t.add(1e16);
    t.add(1.0);
    t.add(-1e16);
    EXPECT_EQ(t.value(), 1.0);
}
