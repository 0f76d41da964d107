#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "summa/runner.hpp"

using summa::json;

namespace {

summa::ExperimentReport run_json(const char* text) {
    return summa::run(summa::config_from_json(json::parse(text)));
}

const json& mode_entry(const summa::ExperimentReport& r, std::size_t k) {
    return r.document.at("modes").at(k);
}

}  // namespace

TEST(Config, RejectsUnknownKeysAndBadValues) {
    const char* bad[] = {
        R"({"matrix": "cesaro", "family": "example1", "modes": [{"mode": "in_probability"}], "colour": 1})",
        R"({"matrix": "cesaro", "family": "example1", "modes": []})",
        R"({"matrix": "cesaro", "family": "example1", "modes": [{"mode": "weak"}]})",
        R"({"matrix": "cesaro", "family": "example1", "modes": [{"mode": "in_probability", "lambda": 0}]})",
        R"({"matrix": "cesaro", "family": "example1", "modes": [{"mode": "lp", "p": 0.5}]})",
        R"({"matrix": "cesaro", "family": "example1", "modes": [{"mode": "in_probability"}], "indices": {"from": 5, "to": 4}})",
        R"({"matrix": "cesaro", "family": "example1", "modes": [{"mode": "in_probability", "monte_carlo": true}]})",
        R"({"matrix": "cesaro", "family": "example1", "modes": [{"mode": "ae_pointwise"}]})",
        R"({"matrix": "cesaro", "family": "example1", "modes": [{"mode": "in_probability", "lambda": "big"}]})",
        R"({"family": "example1", "modes": [{"mode": "in_probability"}]})",
    };
    for (const char* text : bad)
        EXPECT_THROW(summa::config_from_json(json::parse(text)), summa::ConfigError) << text;
}

TEST(Config, SpecsResolve) {
    EXPECT_EQ(summa::matrix_from_json("cesaro").name(), "cesaro");
    EXPECT_EQ(summa::matrix_from_json(json{{"builtin", "identity"}}).name(), "identity");
    const auto d = summa::matrix_from_json(json::parse(R"({"dense": [[1], [0.5, 0.5]], "tail": {"l1_bound": 0}})"));
    EXPECT_EQ(d.row_count(), 2u);
    EXPECT_THROW(summa::matrix_from_json("borel"), summa::ConfigError);
    EXPECT_THROW(summa::matrix_from_json(json::parse(R"({"dense": [[1]], "extra": 1})")),
                 summa::ConfigError);

    EXPECT_EQ(summa::family_from_json("example1").name, "example1");
    const auto e2 = summa::family_from_json(json::parse(R"({"family": "example2", "epsilon": "1/4"})"));
    EXPECT_FALSE(summa::finite_ae(e2.at(1)));
    const auto c = summa::family_from_json(json::parse(R"({"family": "constant", "value": "2 + inf"})"));
    EXPECT_EQ(c.at(3), summa::StepRandomVariable::constant(summa::ExtendedReal(2, 1)));
    const auto blocks = summa::family_from_json(
        json::parse(R"({"family": "synthetic_as", "decay": "1/n", "support": "blocks"})"));
    EXPECT_EQ(summa::prob(blocks.at(5), summa::EventPredicate::greater(0.0)),
              summa::DyadicRational::parse("1/4"));
    EXPECT_THROW(summa::family_from_json(json::parse(R"({"family": "example2", "epsilon": "1/3"})")),
                 summa::ConfigError);
    EXPECT_THROW(summa::family_from_json("brownian"), summa::ConfigError);
}

TEST(Run, CesaroExampleOneIsACounterexample) {
    const auto r = run_json(R"({"matrix": "cesaro", "family": "example1",
        "modes": [{"mode": "in_probability", "lambda": 1}], "indices": {"from": 16, "to": 511}})");
    const auto& m = mode_entry(r, 0);
    EXPECT_EQ(m.at("preservation"), "counterexample");
    EXPECT_EQ(m.at("input").at("verdict").at("kind"), "converges");
    EXPECT_EQ(m.at("output").at("verdict").at("kind"), "diverges");
    for (const auto& s : m.at("output").at("profile").at("exact")) ASSERT_EQ(s, "1/2^0");
    EXPECT_EQ(r.document.at("schema_version"), 1);
    EXPECT_EQ(r.document.at("config").at("family"), "example1");
    EXPECT_EQ(r.document.at("regularity").at("overall"), "regular");
    ASSERT_EQ(r.files.size(), 3u);
    EXPECT_EQ(r.files[0].name, "report.json");
    EXPECT_EQ(r.files[1].name, "profile_in_probability.csv");
    EXPECT_EQ(r.files[1].contents.substr(0, 30), "n,statistic,certified\n16,1,tru");
}

TEST(Run, IdentityPreservesProfiles) {
    const auto r = run_json(R"({"matrix": "identity", "family": {"family": "synthetic_as", "decay": "1/n^2"},
        "modes": [{"mode": "in_probability", "lambda": 0.01}, {"mode": "lp", "p": 2},
                  {"mode": "almost_sure", "lambda": 0.01, "window": 8}],
        "indices": {"from": 1, "to": 64}})");
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& m = mode_entry(r, k);
        EXPECT_EQ(m.at("input").at("profile"), m.at("output").at("profile"));
        EXPECT_EQ(m.at("preservation"), "preserved");
    }
    EXPECT_TRUE(mode_entry(r, 2).at("output").at("window_sweep").at("stabilized").get<bool>());
}

TEST(Run, CesaroPreservesAlmostSureConvergence) {
    const auto r = run_json(R"({"matrix": "cesaro", "family": {"family": "synthetic_as", "decay": "1/n"},
        "modes": [{"mode": "almost_sure", "lambda": 0.1, "window": 64}],
        "indices": {"from": 1, "to": 128}})");
    EXPECT_EQ(mode_entry(r, 0).at("preservation"), "preserved");
}

TEST(Run, ExampleTwoKeepsInfiniteMass) {
    const auto r = run_json(R"({"matrix": "cesaro", "family": {"family": "example2", "epsilon": "1/4"},
        "modes": [{"mode": "in_probability", "lambda": 1}, {"mode": "in_probability", "lambda": 10}],
        "indices": {"from": 1, "to": 100}})");
    EXPECT_FALSE(r.document.at("hypotheses").at("input_finite_ae").get<bool>());
    EXPECT_EQ(mode_entry(r, 1).at("key"), "in_probability_2");
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_EQ(mode_entry(r, k).at("preservation"), "counterexample");
        for (const auto& s : mode_entry(r, k).at("output").at("profile").at("exact"))
            ASSERT_EQ(s, "1/2^2");
    }
}

TEST(Run, PointwiseAndMonteCarlo) {
    const auto r = run_json(R"({"matrix": "cesaro", "family": {"family": "synthetic_as", "decay": "1/n"},
        "modes": [{"mode": "ae_pointwise", "omegas": ["0", "3/2^2"], "tol": 0.06},
                  {"mode": "in_probability", "lambda": 0.1, "monte_carlo": true}],
        "indices": {"from": 1, "to": 200}, "seed": 5, "monte_carlo_samples": 2000})");
    EXPECT_EQ(mode_entry(r, 0).at("preservation"), "preserved");
    const auto& mc = mode_entry(r, 1).at("output").at("monte_carlo");
    EXPECT_FALSE(mc.at("certified").get<bool>());
    EXPECT_EQ(mc.at("indices").size(), 200u);
}

TEST(Run, GuardsAndCaps) {
    EXPECT_THROW(run_json(R"({"matrix": "cesaro", "family": "example1",
        "modes": [{"mode": "in_probability"}], "indices": {"from": 1, "to": 600}})"),
                 summa::GuardViolation);
    EXPECT_THROW(run_json(R"({"matrix": "cesaro", "family": "example1",
        "modes": [{"mode": "in_probability"}], "indices": {"from": 1, "to": 200}, "piece_cap": 8})"),
                 summa::PieceCapExceeded);
    EXPECT_THROW(run_json(R"({"matrix": {"dense": [[1]]}, "family": "example1",
        "modes": [{"mode": "in_probability"}], "indices": {"from": 1, "to": 2}})"),
                 summa::ConfigError);
}

TEST(Run, ReportsAreByteIdenticalAcrossRunsAndThreads) {
    const char* base = R"({"matrix": "cesaro", "family": "example1",
        "modes": [{"mode": "in_probability", "lambda": 1}, {"mode": "almost_sure", "lambda": 1, "window": 8}],
        "indices": {"from": 2, "to": 128}, "gnuplot": true})";
    auto cfg = summa::config_from_json(json::parse(base));
    const auto a = summa::run(cfg);
    cfg.threads = 4;
    const auto b = summa::run(cfg);
    ASSERT_EQ(a.files.size(), b.files.size());
    for (std::size_t k = 0; k < a.files.size(); ++k) {
        EXPECT_EQ(a.files[k].name, b.files[k].name);
        EXPECT_EQ(a.files[k].contents, b.files[k].contents) << a.files[k].name;
    }
}

TEST(Run, WritesFilesToDisk) {
    const auto dir = std::filesystem::temp_directory_path() / "summa_runner_test";
    std::filesystem::remove_all(dir);
    const auto r = run_json(R"({"matrix": "identity", "family": "example1",
        "modes": [{"mode": "in_probability"}], "indices": {"from": 2, "to": 10}})");
    summa::write_report(r, dir);
    for (const auto& f : r.files) {
        std::ifstream in(dir / f.name, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        EXPECT_EQ(ss.str(), f.contents);
    }
    std::filesystem::remove_all(dir);
}
