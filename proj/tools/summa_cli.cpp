// summa: command-line front end for summability experiments on step random
// variables.
//
// Exit status: 0 success, 1 unexpected error, 2 config error, 3 guard
// violation, 4 piece-count cap exceeded. Usage errors use CLI11's codes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "summa/runner.hpp"

namespace {

using summa::json;

enum Exit { ok = 0, unexpected = 1, config_error = 2, guard_violation = 3, cap_exceeded = 4 };

// A spec argument is inline JSON, a path to a .json file, or a bare name.
json load_spec(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
        try {
            return json::parse(arg);
        } catch (const nlohmann::json::parse_error& e) {
            throw summa::ConfigError(std::string("invalid inline JSON: ") + e.what());
        }
    }
    const std::filesystem::path p(arg);
    if (p.extension() == ".json") {
        std::ifstream in(p);
        if (!in) throw summa::ConfigError("cannot open " + arg);
        try {
            return json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw summa::ConfigError(arg + " is not valid JSON: " + std::string(e.what()));
        }
    }
    return arg;
}

struct FamilyArgs {
    std::string family = "example1";
    std::optional<std::string> epsilon, decay, support, norm, p, value;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--family", family, "family name, inline JSON or .json file")
            ->capture_default_str();
        cmd.add_option("--epsilon", epsilon, "example2: measure of the infinite set");
        cmd.add_option("--decay", decay, "synthetic_as: 0, 1/n, 1/n^2 or 2^-n");
        cmd.add_option("--support", support, "synthetic_as: full or blocks");
        cmd.add_option("--norm", norm, "synthetic_lp: 0, 1/n, 1/n^2 or 2^-n");
        cmd.add_option("--p", p, "synthetic_lp: exponent, or inf");
        cmd.add_option("--value", value, "constant: extended real value");
    }

    json spec() const {
        json s = load_spec(family);
        if (!s.is_string()) return s;
        json obj{{"family", s}};
        if (epsilon) obj["epsilon"] = *epsilon;
        if (decay) obj["decay"] = *decay;
        if (support) obj["support"] = *support;
        if (norm) obj["norm"] = *norm;
        if (p) obj["p"] = *p;
        if (value) obj["value"] = *value;
        return obj;
    }
};

void print_condition(const char* label, const summa::ConditionVerdict& c) {
    std::cout << label << ": " << summa::to_string(c.status);
    if (c.certified) std::cout << " (certified)";
    if (c.witness)
        std::cout << " witness index " << c.witness->index << " value "
                  << summa::detail::format_double(c.witness->value);
    std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Summability methods applied to sequences of step random variables"};
    app.require_subcommand(1);

    // regularity
    auto* reg = app.add_subcommand("regularity", "check the Silverman-Toeplitz conditions");
    std::string reg_matrix = "cesaro";
    std::size_t reg_depth = 1000;
    double reg_tol = 1e-9;
    bool reg_json = false;
    reg->add_option("--matrix", reg_matrix, "builtin name, inline JSON or .json file")
        ->capture_default_str();
    reg->add_option("--depth", reg_depth)->capture_default_str();
    reg->add_option("--tol", reg_tol)->capture_default_str();
    reg->add_flag("--json", reg_json, "print the report as JSON");

    // apply
    auto* apply = app.add_subcommand("apply", "print (Ax)_i as a JSON step function");
    std::string apply_matrix = "cesaro";
    std::size_t apply_row = 1;
    double apply_precision = 0.0;
    std::optional<double> apply_tail_bound;
    bool apply_raw = false;
    FamilyArgs apply_family;
    apply->add_option("--matrix", apply_matrix)->capture_default_str();
    apply->add_option("--row", apply_row, "row index i >= 1")->required();
    apply->add_option("--precision", apply_precision, "allowed truncation error for l1 tails");
    apply->add_option("--tail-bound", apply_tail_bound, "uniform bound on |X_j| over the tail");
    apply->add_flag("--raw", apply_raw, "keep the full common refinement");
    apply_family.add_to(*apply);

    // profile
    auto* prof = app.add_subcommand("profile", "print one convergence profile as CSV");
    std::optional<std::string> prof_matrix;
    FamilyArgs prof_family;
    std::string prof_mode = "in_probability";
    double prof_lambda = 1.0, prof_epsilon = 0.01, prof_p = 1.0;
    std::string prof_p_text;
    std::size_t prof_window = 64, prof_from = 1, prof_to = 64;
    std::optional<std::size_t> prof_n;
    prof->add_option("--matrix", prof_matrix, "profile (Ax)_n instead of X_n");
    prof_family.add_to(*prof);
    prof->add_option("--mode", prof_mode, "in_probability, almost_sure or lp")
        ->capture_default_str();
    prof->add_option("--lambda", prof_lambda)->capture_default_str();
    prof->add_option("--window", prof_window)->capture_default_str();
    prof->add_option("--exponent", prof_p_text, "L_p exponent, or inf");
    prof->add_option("--from", prof_from)->capture_default_str();
    prof->add_option("--to", prof_to)->capture_default_str();
    prof->add_option("--epsilon-verdict", prof_epsilon, "verdict threshold")->capture_default_str();
    prof->add_option("--N", prof_n, "verdict start index (chosen automatically if absent)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run a JSON experiment config");
    std::string exp_config;
    std::optional<std::string> exp_out;
    std::optional<std::uint64_t> exp_seed;
    std::optional<unsigned> exp_threads;
    exp->add_option("--config", exp_config)->required();
    exp->add_option("--output-dir", exp_out,
                    "report directory (default: config, then $SUMMA_OUTPUT_DIR, then summa_out)");
    exp->add_option("--seed", exp_seed, "seed for Monte Carlo cross-checks");
    exp->add_option("--threads", exp_threads, "threads used to apply matrix rows");

    auto* list = app.add_subcommand("list-families", "list builtin sequence families");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*reg) {
            const auto a = summa::matrix_from_json(load_spec(reg_matrix));
            const auto r = summa::check_regularity(a, reg_depth, reg_tol);
            if (reg_json) {
                std::cout << json(r).dump(2) << '\n';
            } else {
                std::cout << "matrix: " << a.name() << '\n'
                          << "depth: " << r.depth << '\n'
                          << "M: " << summa::detail::format_double(r.norm_estimate) << '\n';
                print_condition("condition 1 (bounded row norms)", r.bounded_norm);
                print_condition("condition 2 (columns tend to 0)", r.columns_vanish);
                print_condition("condition 3 (row sums tend to 1)", r.row_sums_to_one);
                std::cout << "overall: " << summa::to_string(r.overall) << '\n';
            }
        } else if (*apply) {
            const auto a = summa::matrix_from_json(load_spec(apply_matrix));
            const auto fam = summa::family_from_json(apply_family.spec());
            const auto row = a.row(apply_row);
            const auto x = fam.prefix(std::max<std::size_t>(row.support(), 1));
            summa::ApplyOptions opt;
            opt.precision = apply_precision;
            opt.tail_value_bound = apply_tail_bound;
            auto y = summa::apply_row(a, apply_row, x, opt);
            if (!apply_raw) y = y.simplified();
            std::cout << json(y).dump(2) << '\n';
        } else if (*prof) {
            const auto fam = summa::family_from_json(prof_family.spec());
            const auto mode = summa::mode_from_string(prof_mode);
            if (mode == summa::Mode::ae_pointwise)
                throw summa::ConfigError("use an experiment config for ae_pointwise checks");
            if (!prof_p_text.empty()) prof_p = summa::detail::exponent_from_json(prof_p_text);
            if (prof_from < 1 || prof_to < prof_from)
                throw summa::ConfigError("need 1 <= --from <= --to");
            if (fam.max_index && prof_to > *fam.max_index)
                throw summa::GuardViolation("--to exceeds the family guard " +
                                            std::to_string(*fam.max_index));
            std::size_t length = prof_to;
            if (mode == summa::Mode::almost_sure) length += prof_window;
            if (fam.max_index) length = std::min(length, *fam.max_index);
            auto seq = fam.prefix(length);
            if (prof_matrix) {
                const auto a = summa::matrix_from_json(load_spec(*prof_matrix));
                seq = summa::apply_matrix(a, seq, length);
            }
            std::vector<std::size_t> idx;
            for (auto n = prof_from; n <= prof_to; ++n) idx.push_back(n);
            summa::ConvergenceProfile p;
            if (mode == summa::Mode::in_probability)
                p = summa::in_probability_profile(seq, fam.limit, prof_lambda, idx);
            else if (mode == summa::Mode::almost_sure)
                p = summa::almost_sure_profile(seq, fam.limit, prof_lambda, prof_window, idx);
            else
                p = summa::lp_profile(seq, fam.limit, prof_p, idx);
            summa::write_profile_csv(std::cout, p);
            const auto v = prof_n ? summa::verdict(p, prof_epsilon, *prof_n)
                                  : summa::verdict(p, prof_epsilon);
            std::cout << "# verdict: " << json(v).dump() << '\n';
        } else if (*exp) {
            auto cfg = summa::load_config(exp_config);
            if (exp_seed) cfg.seed = exp_seed;
            if (exp_threads) cfg.threads = *exp_threads;
            std::filesystem::path out = "summa_out";
            if (exp_out)
                out = *exp_out;
            else if (cfg.output_dir)
                out = *cfg.output_dir;
            else if (const char* env = std::getenv("SUMMA_OUTPUT_DIR"))
                out = env;
            const auto rep = summa::run(cfg);
            summa::write_report(rep, out);
            for (const auto& m : rep.document.at("modes"))
                std::cout << m.at("key").get<std::string>() << ": "
                          << m.at("preservation").get<std::string>() << '\n';
            std::cout << "report written to " << (out / "report.json").string() << '\n';
        } else if (*list) {
            for (const auto& f : summa::list_families())
                std::cout << f.name << (f.parameters.empty() ? "" : " [" + f.parameters + "]")
                          << ": " << f.description << '\n';
        }
    } catch (const summa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const summa::GuardViolation& e) {
        std::cerr << "guard violation: " << e.what() << '\n';
        return guard_violation;
    } catch (const summa::NonFiniteValue& e) {
        std::cerr << "guard violation: " << e.what() << '\n';
        return guard_violation;
    } catch (const summa::PieceCapExceeded& e) {
        std::cerr << "piece cap exceeded: " << e.what() << '\n';
        return cap_exceeded;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return unexpected;
    }
    return ok;
}
