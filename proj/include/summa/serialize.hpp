#pragma once

// JSON and CSV renderings of library values. Step functions use
// {"breakpoints": ["num/2^k", ...], "values": ["a + b*inf", ...]}.

#include <cmath>
#include <ostream>
#include <string>

#include "json.hpp"

#include "summa/diagnostics.hpp"
#include "summa/step_rv.hpp"
#include "summa/summability.hpp"

namespace summa {

using json = nlohmann::ordered_json;

namespace detail {

// JSON has no infinities; they travel as strings.
inline json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace detail

inline void to_json(json& j, const StepRandomVariable& x) {
    json b = json::array(), v = json::array();
    for (const auto& d : x.breakpoints()) b.push_back(d.to_string());
    for (const auto& e : x.values()) v.push_back(e.to_string());
    j = json{{"breakpoints", std::move(b)}, {"values", std::move(v)}};
}

inline StepRandomVariable step_rv_from_json(const json& j) {
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
        throw ConfigError("step function JSON needs 'breakpoints' and 'values'");
    std::vector<DyadicRational> b;
    std::vector<ExtendedReal> v;
    for (const auto& e : j.at("breakpoints")) {
        if (!e.is_string()) throw ConfigError("breakpoints must be strings like \"3/2^4\"");
        b.push_back(DyadicRational::parse(e.get<std::string>()));
    }
    for (const auto& e : j.at("values")) {
        if (e.is_number()) v.emplace_back(e.get<double>());
        else if (e.is_string()) v.push_back(ExtendedReal::parse(e.get<std::string>()));
        else throw ConfigError("values must be numbers or strings like \"1 + 2*inf\"");
    }
    return {std::move(b), std::move(v)};
}

inline void to_json(json& j, const ConditionVerdict& c) {
    j = json{{"status", to_string(c.status)}, {"certified", c.certified}};
    if (c.witness)
        j["witness"] = json{{"index", c.witness->index}, {"value", detail::number(c.witness->value)}};
}

inline void to_json(json& j, const RegularityReport& r) {
    j = json{{"depth", r.depth},
             {"tolerance", r.tolerance},
             {"norm_estimate_M", detail::number(r.norm_estimate)},
             {"condition1_bounded_norm", r.bounded_norm},
             {"condition2_columns_vanish", r.columns_vanish},
             {"condition3_row_sums_to_one", r.row_sums_to_one},
             {"overall", to_string(r.overall)}};
}

inline void to_json(json& j, const ConvergenceProfile& p) {
    j = json{{"mode", to_string(p.mode)}};
    if (p.mode == Mode::in_probability || p.mode == Mode::almost_sure) j["lambda"] = p.lambda;
    if (p.mode == Mode::almost_sure) j["window"] = p.window;
    if (p.mode == Mode::lp) j["p"] = detail::number(p.p);
    j["certified"] = p.certified;
    j["lower_bound"] = p.lower_bound;
    if (p.mode == Mode::almost_sure) j["window_clipped"] = p.window_clipped;
    j["hypothesis_violated"] = p.hypothesis_violated;
    j["indices"] = p.indices;
    json stats = json::array();
    for (double s : p.statistics) stats.push_back(detail::number(s));
    j["statistics"] = std::move(stats);
    if (!p.exact.empty()) {
        json ex = json::array();
        for (const auto& d : p.exact) ex.push_back(d.to_string());
        j["exact"] = std::move(ex);
    }
    if (!p.half_widths.empty()) j["wilson_half_widths"] = p.half_widths;
}

inline void to_json(json& j, const WindowSweep& w) {
    json stats = json::array();
    for (const auto& d : w.statistics) stats.push_back(d.to_string());
    j = json{{"index", w.index},
             {"windows", w.windows},
             {"exact", std::move(stats)},
             {"window_clipped", w.window_clipped},
             {"stabilized", w.stabilized}};
}

inline void to_json(json& j, const Verdict& v) {
    j = json{{"kind", to_string(v.kind)}, {"epsilon", v.epsilon}};
    if (v.kind == Verdict::Kind::converges_below) j["from_index"] = v.from_index;
    if (v.kind == Verdict::Kind::diverges)
        j["witness"] = json{{"index", v.witness_index}, {"value", detail::number(v.witness_value)}};
}

inline void to_json(json& j, const PointwiseReport& r) {
    j = json{{"omega", r.omega.to_string()},
             {"tail_oscillation", detail::number(r.tail_oscillation)},
             {"cauchy", r.cauchy}};
    if (r.tail_distance) {
        j["tail_distance"] = detail::number(*r.tail_distance);
        j["near_limit"] = r.near_limit;
    }
}

/// n,statistic,certified
inline void write_profile_csv(std::ostream& os, const ConvergenceProfile& p) {
    os << "n,statistic,certified\n";
    for (std::size_t k = 0; k < p.indices.size(); ++k)
        os << p.indices[k] << ',' << detail::format_double(p.statistics[k]) << ','
           << (p.certified ? "true" : "false") << '\n';
}

/// Two whitespace-separated columns for plotting tools.
inline void write_profile_dat(std::ostream& os, const ConvergenceProfile& p) {
    os << "# n statistic\n";
    for (std::size_t k = 0; k < p.indices.size(); ++k)
        os << p.indices[k] << ' ' << detail::format_double(p.statistics[k]) << '\n';
}

inline void write_pointwise_csv(std::ostream& os, const std::vector<PointwiseReport>& reports) {
    os << "omega,tail_oscillation,tail_distance,cauchy,near_limit\n";
    for (const auto& r : reports)
        os << r.omega.to_string() << ',' << detail::format_double(r.tail_oscillation) << ','
           << (r.tail_distance ? detail::format_double(*r.tail_distance) : "") << ','
           << (r.cauchy ? "true" : "false") << ',' << (r.near_limit ? "true" : "false") << '\n';
}

}  // namespace summa
