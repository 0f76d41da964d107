#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "summa/sequences.hpp"

using summa::DyadicRational;
using summa::ExtendedReal;
using summa::Mode;
using summa::StepRandomVariable;

TEST(ExampleOne, SmallTerms) {
    const auto x5 = summa::example1(5);
    EXPECT_EQ(x5, StepRandomVariable({DyadicRational::zero(), DyadicRational::parse("1/4"),
                                      DyadicRational::parse("1/2"), DyadicRational::one()},
                                     {0.0, 64.0, 0.0}));
    const auto x2 = summa::example1(2);
    EXPECT_EQ(x2, StepRandomVariable::on_interval(DyadicRational::zero(),
                                                  DyadicRational::parse("1/2"), 4.0));
}

TEST(ExampleOne, MatchesIndependentDerivation) {
    for (std::size_t n = 2; n <= summa::example1_max_index; ++n) {
        const auto [m, i] = oracle::decompose(n);
        const auto b = summa::example1_block(n);
        ASSERT_EQ(b.level, m);
        ASSERT_EQ(b.offset, i);
        const auto x = summa::example1(n);
        if (m <= 8) {
            const auto cellwise = oracle::example1_cells(n);
            for (std::size_t c = 0; c < oracle::cells; ++c)
                ASSERT_EQ(x.evaluate(DyadicRational(summa::BigInt(c), 8)).finite_part(), cellwise[c])
                    << "n=" << n;
        }
        DyadicRational support;
        for (std::size_t k = 0; k < x.piece_count(); ++k)
            if (x.values()[k] != ExtendedReal(0)) support = support + x.piece_measure(k);
        ASSERT_EQ(support, DyadicRational(summa::BigInt(1), m));
    }
}

TEST(ExampleOne, Guards) {
    EXPECT_THROW(summa::example1(1), summa::GuardViolation);
    EXPECT_THROW(summa::example1(512), summa::GuardViolation);
    const auto fam = summa::example1_family();
    EXPECT_EQ(fam.at(1), StepRandomVariable::constant(0.0));
    EXPECT_THROW(fam.at(512), summa::GuardViolation);
    EXPECT_THROW(fam.at(0), summa::GuardViolation);
    EXPECT_TRUE(fam.declares(Mode::in_probability));
    EXPECT_FALSE(fam.declares(Mode::lp));
    // Largest value 4^263 is finite.
    EXPECT_EQ(summa::example1(511).values()[1], ExtendedReal(std::ldexp(1.0, 526)));
}

TEST(ExampleOne, SupportsTileTheInterval) {
    std::vector<StepRandomVariable> block;
    for (std::size_t n = 16; n <= 31; ++n) block.push_back(summa::example1(n));
    EXPECT_EQ(summa::prob_any(block, summa::EventPredicate::abs_greater(0.0)), DyadicRational::one());
}

TEST(ExampleTwo, FirstTermIsInfiniteOnEpsilon) {
    const auto fam = summa::example2(DyadicRational::parse("1/4"));
    EXPECT_FALSE(summa::finite_ae(fam.at(1)));
    EXPECT_EQ(summa::prob(fam.at(1), summa::EventPredicate::is_infinite()), DyadicRational::parse("1/4"));
    EXPECT_EQ(fam.at(3), StepRandomVariable::constant(0.0));
    EXPECT_TRUE(fam.declares(Mode::lp));
    EXPECT_THROW(summa::example2(DyadicRational::zero()), summa::ConfigError);
    EXPECT_THROW(summa::example2(DyadicRational::one()), summa::ConfigError);
}

TEST(Synthetic, AlmostSureFamily) {
    const auto fam = summa::synthetic_as(summa::decay_by_name("1/n"));
    EXPECT_EQ(fam.at(4), StepRandomVariable::constant(0.25));
    const auto zero = summa::synthetic_as(summa::decay_by_name("0"));
    EXPECT_EQ(zero.at(7), StepRandomVariable::constant(0.0));
    const auto half = summa::synthetic_as(summa::decay_by_name("2^-n"), [](std::size_t) {
        return summa::DyadicInterval{DyadicRational::zero(), DyadicRational::parse("1/2")};
    });
    EXPECT_EQ(half.at(3), StepRandomVariable::on_interval(DyadicRational::zero(),
                                                          DyadicRational::parse("1/2"), 0.125));
    EXPECT_TRUE(fam.declares(Mode::almost_sure));
    EXPECT_THROW(summa::synthetic_as([](std::size_t) { return -1.0; }).at(1), summa::ConfigError);
}

TEST(Synthetic, LpFamilyHitsItsNormExactly) {
    for (double p : {1.0, 2.0, 3.0, summa::p_infinity}) {
        for (std::uint32_t k : {0u, 2u}) {
            const auto fam = summa::synthetic_lp(summa::decay_by_name("1/n"), p, k);
            for (std::size_t n : {1u, 3u, 10u}) {
                const auto norm = summa::expectation_p(fam.at(n), p);
                EXPECT_NEAR(norm.value, 1.0 / static_cast<double>(n), 1e-15) << p << ' ' << k;
                EXPECT_FALSE(norm.restricted);
            }
        }
    }
    EXPECT_EQ(summa::synthetic_lp(summa::decay_by_name("1/n"), 2.0).at(5),
              StepRandomVariable::constant(0.2));
    EXPECT_THROW(summa::synthetic_lp(summa::decay_by_name("1/n"), 0.5), summa::ConfigError);
}

TEST(Synthetic, DecayNames) {
    EXPECT_EQ(summa::decay_by_name("1/n^2")(4), 1.0 / 16);
    EXPECT_EQ(summa::decay_by_name("2^-n")(3), 0.125);
    EXPECT_THROW(summa::decay_by_name("log"), summa::ConfigError);
}

TEST(Families, ListIncludesEveryBuiltin) {
    std::vector<std::string> names;
    for (const auto& f : summa::list_families()) names.push_back(f.name);
    EXPECT_EQ(names, (std::vector<std::string>{"example1", "example2", "constant", "synthetic_as",
                                               "synthetic_lp"}));
}
