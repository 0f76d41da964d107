#pragma once

// Config-driven experiments: a matrix, an input family, and a list of
// convergence modes. run() is pure and returns the report documents;
// write_report() puts them on disk.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "summa/diagnostics.hpp"
#include "summa/monte_carlo.hpp"
#include "summa/sequences.hpp"
#include "summa/serialize.hpp"
#include "summa/summability.hpp"

namespace summa {

inline constexpr int report_schema_version = 1;

// ---------------------------------------------------------------------------
// Spec parsing

namespace detail {

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                                const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

inline ExtendedReal extended_from_json(const json& j) {
    if (j.is_number()) return ExtendedReal(j.get<double>());
    if (j.is_string()) return ExtendedReal::parse(j.get<std::string>());
    throw ConfigError("expected a number or an extended-real string");
}

inline DyadicRational dyadic_from_json(const json& j) {
    if (j.is_string()) return DyadicRational::parse(j.get<std::string>());
    if (j.is_number()) {
        const double v = j.get<double>();
        if (v == 1.0) return DyadicRational::one();
        return dyadic_from_double(v);
    }
    throw ConfigError("expected a dyadic rational like \"1/2^2\"");
}

inline double exponent_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return p_infinity;
        if (auto v = parse_double(s)) return *v;
        throw ConfigError("cannot parse L_p exponent '" + s + "'");
    }
    if (j.is_number()) return j.get<double>();
    throw ConfigError("L_p exponent must be a number or \"inf\"");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

inline SupportFn support_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "full") return {};
    if (j.is_string() && j.get<std::string>() == "blocks")
        return [](std::size_t n) {
            // Rotating dyadic blocks, as in example1; n = 1 covers [0, 1).
            if (n == 1) return DyadicInterval{};
            const auto [m, i] = example1_block(n);
            return DyadicInterval{DyadicRational(BigInt(i), m), DyadicRational(BigInt(i + 1), m)};
        };
    if (j.is_object()) {
        reject_unknown_keys(j, {"lo", "hi"}, "support");
        DyadicInterval s{dyadic_from_json(j.value("lo", json("0"))),
                         dyadic_from_json(j.value("hi", json("1")))};
        if (!(s.lo < s.hi)) throw ConfigError("support interval must be non-empty");
        return [s](std::size_t) { return s; };
    }
    throw ConfigError("support must be \"full\", \"blocks\" or {\"lo\": .., \"hi\": ..}");
}

}  // namespace detail

/// "cesaro" | "identity" | "first_column_ones" | {"builtin": name} |
/// {"dense": [[a_11, a_12, ...], ...], "tail": "zero" | {"l1_bound": b}}
inline SummabilityMatrix matrix_from_json(const json& spec) {
    auto builtin = [](const std::string& name) {
        if (name == "cesaro") return cesaro();
        if (name == "identity") return identity_matrix();
        if (name == "first_column_ones") return first_column_ones();
        throw ConfigError("unknown builtin matrix '" + name + "'");
    };
    if (spec.is_string()) return builtin(spec.get<std::string>());
    if (!spec.is_object()) throw ConfigError("matrix spec must be a string or an object");
    if (spec.contains("builtin")) {
        detail::reject_unknown_keys(spec, {"builtin"}, "matrix spec");
        return builtin(spec.at("builtin").get<std::string>());
    }
    if (!spec.contains("dense")) throw ConfigError("matrix spec needs 'builtin' or 'dense'");
    detail::reject_unknown_keys(spec, {"dense", "tail", "name"}, "matrix spec");
    RowTail tail = ZeroTail{};
    if (spec.contains("tail")) {
        const auto& t = spec.at("tail");
        if (t.is_string() && t.get<std::string>() == "zero") {
            tail = ZeroTail{};
        } else if (t.is_object() && t.contains("l1_bound") && t.at("l1_bound").is_number()) {
            tail = L1TailBound{t.at("l1_bound").get<double>()};
        } else {
            throw ConfigError("tail must be \"zero\" or {\"l1_bound\": b}");
        }
    }
    std::vector<RowSpec> rows;
    for (const auto& r : spec.at("dense")) {
        if (!r.is_array()) throw ConfigError("dense rows must be arrays of numbers");
        RowSpec row;
        for (const auto& c : r) {
            if (!c.is_number()) throw ConfigError("dense rows must be arrays of numbers");
            row.coefficients.push_back(c.get<double>());
        }
        row.tail = tail;
        rows.push_back(std::move(row));
    }
    return dense(std::move(rows), detail::get_or<std::string>(spec, "name", "dense"));
}

/// "example1" | {"family": "example2", "epsilon": "1/4"} | {"family":
/// "constant", "value": ..} | {"family": "synthetic_as", "decay": "1/n",
/// "support": ..} | {"family": "synthetic_lp", "norm": "1/n", "p": 2}
inline SequenceFamily family_from_json(const json& spec) {
    const json obj = spec.is_string() ? json{{"family", spec}} : spec;
    if (!obj.is_object() || !obj.contains("family") || !obj.at("family").is_string())
        throw ConfigError("family spec needs a 'family' name");
    const auto name = obj.at("family").get<std::string>();
    if (name == "example1") {
        detail::reject_unknown_keys(obj, {"family"}, "example1 spec");
        return example1_family();
    }
    if (name == "example2") {
        detail::reject_unknown_keys(obj, {"family", "epsilon"}, "example2 spec");
        return example2(detail::dyadic_from_json(obj.value("epsilon", json("1/2^2"))));
    }
    if (name == "constant") {
        detail::reject_unknown_keys(obj, {"family", "value"}, "constant spec");
        return constant_family(detail::extended_from_json(obj.value("value", json(0.0))));
    }
    if (name == "synthetic_as") {
        detail::reject_unknown_keys(obj, {"family", "decay", "support"}, "synthetic_as spec");
        return synthetic_as(decay_by_name(detail::get_or<std::string>(obj, "decay", "1/n")),
                            detail::support_from_json(obj.value("support", json("full"))));
    }
    if (name == "synthetic_lp") {
        detail::reject_unknown_keys(obj, {"family", "norm", "p", "support_log2"},
                                    "synthetic_lp spec");
        return synthetic_lp(decay_by_name(detail::get_or<std::string>(obj, "norm", "1/n")),
                            detail::exponent_from_json(obj.value("p", json(1.0))),
                            detail::get_or<std::uint32_t>(obj, "support_log2", 0));
    }
    throw ConfigError("unknown family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Config

struct ModeSpec {
    Mode mode = Mode::in_probability;
    double lambda = 1.0;
    std::size_t window = 64;
    double p = 1.0;
    double epsilon = 0.01;
    std::optional<std::size_t> from_index;  // N; chosen automatically when absent
    std::vector<DyadicRational> omegas;
    std::size_t horizon = 0;  // ae_pointwise; 0 means the last index
    double tol = 1e-6;        // ae_pointwise
    bool monte_carlo = false;
};

struct ExperimentConfig {
    json matrix = "cesaro";
    json family = "example1";
    std::vector<ModeSpec> modes;
    std::size_t from = 1;
    std::size_t to = 64;
    std::size_t step = 1;
    std::size_t regularity_depth = 1000;
    double regularity_tol = 1e-9;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::size_t mc_samples = 100000;
    std::size_t piece_cap = default_piece_cap;
    unsigned threads = 1;
    bool gnuplot = false;
    double precision = 0.0;
    std::optional<double> tail_value_bound;
    /// The document the config was parsed from, echoed into the report.
    json source = json::object();

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::size_t n = from; n <= to; n += step) out.push_back(n);
        return out;
    }
};

inline Mode mode_from_string(const std::string& s) {
    if (s == "in_probability") return Mode::in_probability;
    if (s == "almost_sure") return Mode::almost_sure;
    if (s == "ae_pointwise") return Mode::ae_pointwise;
    if (s == "lp") return Mode::lp;
    throw ConfigError("unknown mode '" + s + "'");
}

inline ModeSpec mode_from_json(const json& j) {
    if (!j.is_object() || !j.contains("mode") || !j.at("mode").is_string())
        throw ConfigError("each mode needs a 'mode' name");
    detail::reject_unknown_keys(j,
                                {"mode", "lambda", "window", "p", "epsilon", "N", "omegas",
                                 "horizon", "tol", "monte_carlo"},
                                "mode spec");
    ModeSpec m;
    m.mode = mode_from_string(j.at("mode").get<std::string>());
    m.lambda = detail::get_or<double>(j, "lambda", m.lambda);
    m.window = detail::get_or<std::size_t>(j, "window", m.window);
    if (j.contains("p")) m.p = detail::exponent_from_json(j.at("p"));
    m.epsilon = detail::get_or<double>(j, "epsilon", m.epsilon);
    if (j.contains("N")) m.from_index = detail::get_or<std::size_t>(j, "N", 1);
    if (j.contains("omegas"))
        for (const auto& w : j.at("omegas")) m.omegas.push_back(detail::dyadic_from_json(w));
    m.horizon = detail::get_or<std::size_t>(j, "horizon", 0);
    m.tol = detail::get_or<double>(j, "tol", m.tol);
    m.monte_carlo = detail::get_or<bool>(j, "monte_carlo", false);

    if (!(m.lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (m.window < 1) throw ConfigError("window must be >= 1");
    if (!(m.p >= 1.0)) throw ConfigError("p must be >= 1 or \"inf\"");
    if (!(m.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (!(m.tol > 0.0)) throw ConfigError("tol must be > 0");
    if (m.mode == Mode::ae_pointwise && m.omegas.empty())
        throw ConfigError("ae_pointwise needs a non-empty 'omegas' list");
    for (const auto& w : m.omegas)
        if (w == DyadicRational::one()) throw ConfigError("omegas must lie in [0, 1)");
    if (m.monte_carlo && m.mode != Mode::in_probability && m.mode != Mode::almost_sure)
        throw ConfigError("monte_carlo cross-checks exist for in_probability and almost_sure");
    return m;
}

inline ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    detail::reject_unknown_keys(j,
                                {"matrix", "family", "modes", "indices", "regularity",
                                 "output_dir", "seed", "monte_carlo_samples", "piece_cap",
                                 "threads", "gnuplot", "precision", "tail_value_bound"},
                                "config");
    ExperimentConfig c;
    c.source = j;
    if (!j.contains("matrix") || !j.contains("family") || !j.contains("modes"))
        throw ConfigError("config needs 'matrix', 'family' and 'modes'");
    c.matrix = j.at("matrix");
    c.family = j.at("family");
    if (!j.at("modes").is_array() || j.at("modes").empty())
        throw ConfigError("'modes' must be a non-empty array");
    for (const auto& m : j.at("modes")) c.modes.push_back(mode_from_json(m));

    if (j.contains("indices")) {
        const auto& ix = j.at("indices");
        if (!ix.is_object()) throw ConfigError("'indices' must be {\"from\":..,\"to\":..}");
        detail::reject_unknown_keys(ix, {"from", "to", "step"}, "indices");
        c.from = detail::get_or<std::size_t>(ix, "from", c.from);
        c.to = detail::get_or<std::size_t>(ix, "to", c.to);
        c.step = detail::get_or<std::size_t>(ix, "step", c.step);
    }
    if (c.from < 1 || c.to < c.from || c.step < 1)
        throw ConfigError("indices need 1 <= from <= to and step >= 1");
    if (j.contains("regularity")) {
        const auto& r = j.at("regularity");
        detail::reject_unknown_keys(r, {"depth", "tol"}, "regularity");
        c.regularity_depth = detail::get_or<std::size_t>(r, "depth", c.regularity_depth);
        c.regularity_tol = detail::get_or<double>(r, "tol", c.regularity_tol);
    }
    if (j.contains("output_dir")) c.output_dir = detail::get_or<std::string>(j, "output_dir", "");
    if (j.contains("seed")) c.seed = detail::get_or<std::uint64_t>(j, "seed", 0);
    c.mc_samples = detail::get_or<std::size_t>(j, "monte_carlo_samples", c.mc_samples);
    c.piece_cap = detail::get_or<std::size_t>(j, "piece_cap", c.piece_cap);
    c.threads = detail::get_or<unsigned>(j, "threads", c.threads);
    c.gnuplot = detail::get_or<bool>(j, "gnuplot", c.gnuplot);
    c.precision = detail::get_or<double>(j, "precision", c.precision);
    if (j.contains("tail_value_bound"))
        c.tail_value_bound = detail::get_or<double>(j, "tail_value_bound", 0.0);

    if (c.regularity_depth < 1 || !(c.regularity_tol > 0.0))
        throw ConfigError("regularity needs depth >= 1 and tol > 0");
    if (c.piece_cap < 1) throw ConfigError("piece_cap must be >= 1");
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
    if (c.mc_samples < 1) throw ConfigError("monte_carlo_samples must be >= 1");
    const bool wants_mc = std::any_of(c.modes.begin(), c.modes.end(),
                                      [](const ModeSpec& m) { return m.monte_carlo; });
    if (wants_mc && !c.seed) throw ConfigError("Monte Carlo cross-checks need a 'seed'");
    for (const auto& m : c.modes)
        if (m.mode == Mode::ae_pointwise && m.horizon > c.to)
            throw ConfigError("ae_pointwise horizon exceeds the index range");
    return c;
}

// ---------------------------------------------------------------------------
// Running

struct ReportFile {
    std::string name;
    std::string contents;
};

struct ExperimentReport {
    json document;
    /// report.json first, then one CSV (and optional .dat) per mode and sequence.
    std::vector<ReportFile> files;
};

namespace detail {

inline Verdict pointwise_verdict(const std::vector<PointwiseReport>& reports, double tol) {
    Verdict v;
    v.epsilon = tol;
    if (std::any_of(reports.begin(), reports.end(), [](const auto& r) { return !r.cauchy; })) {
        v.kind = Verdict::Kind::diverges;
        const auto& bad = *std::find_if(reports.begin(), reports.end(),
                                        [](const auto& r) { return !r.cauchy; });
        v.witness_index = bad.values.size();
        v.witness_value = bad.tail_oscillation;
    } else if (std::all_of(reports.begin(), reports.end(),
                           [](const auto& r) { return r.near_limit; })) {
        v.kind = Verdict::Kind::converges_below;
        v.from_index = (reports.front().values.size() + 1) / 2;
    }
    return v;
}

inline bool all_finite_ae(std::span<const StepRandomVariable> xs) {
    return std::all_of(xs.begin(), xs.end(), [](const auto& x) { return finite_ae(x); });
}

}  // namespace detail

inline ExperimentReport run(const ExperimentConfig& cfg) {
    const SummabilityMatrix a = matrix_from_json(cfg.matrix);
    const SequenceFamily family = family_from_json(cfg.family);

    if (family.max_index && cfg.to > *family.max_index)
        throw GuardViolation("index range ends at " + std::to_string(cfg.to) + " but family '" +
                             family.name + "' is guarded to n <= " +
                             std::to_string(*family.max_index));
    if (a.row_count() && cfg.to > *a.row_count())
        throw ConfigError("index range ends at " + std::to_string(cfg.to) + " but matrix '" +
                          a.name() + "' has " + std::to_string(*a.row_count()) + " rows");

    // Sequence length: the index range plus four times the widest a.s. window
    // (for the doubling sweep), within guards.
    std::size_t length = cfg.to;
    for (const auto& m : cfg.modes)
        if (m.mode == Mode::almost_sure) length = std::max(length, cfg.to + 4 * m.window);
    if (family.max_index) length = std::min(length, *family.max_index);
    if (a.row_count()) length = std::min(length, *a.row_count());

    std::size_t needed = length;
    for (std::size_t i = 1; i <= length; ++i) needed = std::max(needed, a.row(i).support());
    if (family.max_index && needed > *family.max_index)
        throw GuardViolation("matrix rows reach column " + std::to_string(needed) +
                             " beyond the family guard");

    const auto terms = family.prefix(needed);
    const std::span<const StepRandomVariable> x = std::span(terms).first(length);
    ApplyOptions opt;
    opt.precision = cfg.precision;
    opt.tail_value_bound = cfg.tail_value_bound;
    opt.piece_cap = cfg.piece_cap;
    const auto y = apply_matrix(a, terms, length, opt, cfg.threads);

    const auto regularity = check_regularity(a, cfg.regularity_depth, cfg.regularity_tol);

    json doc;
    doc["schema_version"] = report_schema_version;
    doc["config"] = cfg.source;
    doc["matrix"] = a.name();
    doc["family"] = family.name;
    doc["sequence_length"] = length;
    doc["regularity"] = regularity;
    doc["hypotheses"] = json{{"input_finite_ae", detail::all_finite_ae(x) && finite_ae(family.limit)},
                             {"output_finite_ae", detail::all_finite_ae(y)}};

    ExperimentReport rep;
    std::vector<ReportFile> csvs;
    std::set<std::string> used;
    json modes = json::array();
    const auto indices = cfg.indices();

    for (const auto& m : cfg.modes) {
        std::string key = to_string(m.mode);
        for (int k = 2; used.count(key); ++k) key = std::string(to_string(m.mode)) + "_" + std::to_string(k);
        used.insert(key);

        json entry{{"key", key}, {"mode", to_string(m.mode)}};
        Verdict vin, vout;
        if (m.mode == Mode::ae_pointwise) {
            const std::size_t horizon = m.horizon ? m.horizon : cfg.to;
            const auto rin = ae_pointwise_check(x, &family.limit, m.omegas, horizon, m.tol);
            const auto rout = ae_pointwise_check(y, &family.limit, m.omegas, horizon, m.tol);
            vin = detail::pointwise_verdict(rin, m.tol);
            vout = detail::pointwise_verdict(rout, m.tol);
            entry["horizon"] = horizon;
            entry["tol"] = m.tol;
            entry["input"] = json{{"points", rin}, {"verdict", vin}};
            entry["output"] = json{{"points", rout}, {"verdict", vout}};
            std::ostringstream sin, sout;
            write_pointwise_csv(sin, rin);
            write_pointwise_csv(sout, rout);
            csvs.push_back({"profile_" + key + ".csv", sout.str()});
            csvs.push_back({"profile_" + key + "_input.csv", sin.str()});
        } else {
            auto profile = [&](std::span<const StepRandomVariable> seq) {
                switch (m.mode) {
                    case Mode::in_probability:
                        return in_probability_profile(seq, family.limit, m.lambda, indices,
                                                      cfg.piece_cap);
                    case Mode::almost_sure:
                        return almost_sure_profile(seq, family.limit, m.lambda, m.window, indices,
                                                   cfg.piece_cap);
                    default:
                        return lp_profile(seq, family.limit, m.p, indices, cfg.piece_cap);
                }
            };
            const auto pin = profile(x);
            const auto pout = profile(y);
            auto judge = [&](const ConvergenceProfile& p) {
                return m.from_index ? verdict(p, m.epsilon, *m.from_index) : verdict(p, m.epsilon);
            };
            vin = judge(pin);
            vout = judge(pout);
            entry["input"] = json{{"profile", pin}, {"verdict", vin}};
            entry["output"] = json{{"profile", pout}, {"verdict", vout}};
            if (m.mode == Mode::almost_sure) {
                entry["input"]["window_sweep"] =
                    window_sweep(x, family.limit, m.lambda, m.window, cfg.to, cfg.piece_cap);
                entry["output"]["window_sweep"] =
                    window_sweep(y, family.limit, m.lambda, m.window, cfg.to, cfg.piece_cap);
            }

            if (m.monte_carlo) {
                MonteCarloOptions mc{*cfg.seed, cfg.mc_samples};
                const auto lim = family.limit;
                const std::function<ExtendedReal(double)> limit_fn = [lim](double w) {
                    return lim.evaluate(dyadic_from_double(w));
                };
                auto mc_profile = [&](std::span<const StepRandomVariable> seq) {
                    // The window must fit inside the materialized sequence.
                    std::vector<std::size_t> ok;
                    for (auto n : indices)
                        if (m.mode == Mode::in_probability || n + m.window <= seq.size())
                            ok.push_back(n);
                    const auto s = sampler_from_steps(seq);
                    return m.mode == Mode::in_probability
                               ? mc_in_probability_profile(s, limit_fn, m.lambda, ok, mc)
                               : mc_almost_sure_profile(s, limit_fn, m.lambda, m.window, ok, mc);
                };
                entry["input"]["monte_carlo"] = mc_profile(x);
                entry["output"]["monte_carlo"] = mc_profile(y);
            }

            std::ostringstream sin, sout;
            write_profile_csv(sin, pin);
            write_profile_csv(sout, pout);
            csvs.push_back({"profile_" + key + ".csv", sout.str()});
            csvs.push_back({"profile_" + key + "_input.csv", sin.str()});
            if (cfg.gnuplot) {
                std::ostringstream din, dout;
                write_profile_dat(din, pin);
                write_profile_dat(dout, pout);
                csvs.push_back({"profile_" + key + ".dat", dout.str()});
                csvs.push_back({"profile_" + key + "_input.dat", din.str()});
            }
        }
        entry["preservation"] = to_string(preservation(vin, vout));
        modes.push_back(std::move(entry));
    }
    doc["modes"] = std::move(modes);

    rep.files.push_back({"report.json", doc.dump(2) + "\n"});
    for (auto& f : csvs) rep.files.push_back(std::move(f));
    rep.document = std::move(doc);
    return rep;
}

inline void write_report(const ExperimentReport& rep, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& f : rep.files) {
        std::ofstream out(dir / f.name, std::ios::binary);
        if (!out) throw Error("cannot write " + (dir / f.name).string());
        out << f.contents;
    }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    try {
        return config_from_json(json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

}  // namespace summa
