#pragma once

// Convergence profiles for four modes (in probability, almost sure via a
// windowed sup, pointwise at sample points, L_p) plus verdicts. Profiles
// on step functions are exact; see monte_carlo.hpp for sampled inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "summa/error.hpp"
#include "summa/step_rv.hpp"

namespace summa {

enum class Mode { in_probability, almost_sure, ae_pointwise, lp };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::in_probability: return "in_probability";
        case Mode::almost_sure: return "almost_sure";
        case Mode::ae_pointwise: return "ae_pointwise";
        case Mode::lp: return "lp";
    }
    return "?";
}

struct ConvergenceProfile {
    Mode mode = Mode::in_probability;
    double lambda = 0.0;       // in_probability, almost_sure
    std::size_t window = 0;    // almost_sure
    double p = 1.0;            // lp; p_infinity allowed

    std::vector<std::size_t> indices;
    std::vector<double> statistics;
    /// Exact probabilities, parallel to statistics; empty for lp and
    /// Monte Carlo profiles.
    std::vector<DyadicRational> exact;
    /// Wilson half-widths for Monte Carlo profiles.
    std::vector<double> half_widths;

    bool certified = true;
    /// Windowed sup statistics only bound the true sup-tail probability from below.
    bool lower_bound = false;
    /// Some window ran past the end of the supplied sequence and was shortened.
    bool window_clipped = false;
    /// Some X_n or the limit was not finite a.e.
    bool hypothesis_violated = false;
};

struct Verdict {
    enum class Kind { converges_below, diverges, inconclusive };

    Kind kind = Kind::inconclusive;
    double epsilon = 0.0;
    /// converges_below: statistics are < epsilon from this index on.
    std::size_t from_index = 0;
    /// diverges: last checked index and its statistic.
    std::size_t witness_index = 0;
    double witness_value = 0.0;
};

inline const char* to_string(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::converges_below: return "converges";
        case Verdict::Kind::diverges: return "diverges";
        case Verdict::Kind::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace detail {

inline void require_indices(std::span<const StepRandomVariable> x,
                            const std::vector<std::size_t>& indices) {
    for (auto n : indices)
        if (n < 1 || n > x.size())
            throw ConfigError("profile index " + std::to_string(n) +
                              " outside the available sequence 1.." + std::to_string(x.size()));
}

inline std::size_t top_quartile_start(std::size_t count) { return count - (count + 3) / 4; }

}  // namespace detail

/// P(|X_n - X_inf| > lambda) at each index; x[0] is X_1.
inline ConvergenceProfile in_probability_profile(std::span<const StepRandomVariable> x,
                                                 const StepRandomVariable& limit, double lambda,
                                                 std::vector<std::size_t> indices,
                                                 std::size_t cap = default_piece_cap) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    detail::require_indices(x, indices);
    ConvergenceProfile prof;
    prof.mode = Mode::in_probability;
    prof.lambda = lambda;
    const auto event = EventPredicate::abs_greater(lambda);
    for (auto n : indices) {
        auto pr = prob(difference(x[n - 1], limit, cap), event);
        prof.statistics.push_back(pr.to_double());
        prof.exact.push_back(std::move(pr));
    }
    prof.indices = std::move(indices);
    return prof;
}

/// P(sup_{n <= m <= n + window} |X_m - X_inf| > lambda). The window is
/// clipped to the available sequence; either truncation only removes terms
/// from the sup, so the statistic stays a lower bound of the full sup-tail.
inline ConvergenceProfile almost_sure_profile(std::span<const StepRandomVariable> x,
                                              const StepRandomVariable& limit, double lambda,
                                              std::size_t window, std::vector<std::size_t> indices,
                                              std::size_t cap = default_piece_cap) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (window < 1) throw ConfigError("window must be >= 1");
    detail::require_indices(x, indices);
    ConvergenceProfile prof;
    prof.mode = Mode::almost_sure;
    prof.lambda = lambda;
    prof.window = window;
    prof.lower_bound = true;
    const auto event = EventPredicate::abs_greater(lambda);
    for (auto n : indices) {
        const std::size_t last = std::min(n + window, x.size());
        if (last < n + window) prof.window_clipped = true;
        const auto sup = sup_family(x.subspan(n - 1, last - n + 1), limit, cap);
        auto pr = prob(sup, event);
        prof.statistics.push_back(pr.to_double());
        prof.exact.push_back(std::move(pr));
    }
    prof.indices = std::move(indices);
    return prof;
}

struct WindowSweep {
    std::size_t index = 0;
    /// w, 2w, 4w
    std::vector<std::size_t> windows;
    std::vector<DyadicRational> statistics;
    bool window_clipped = false;
    /// All three statistics agree.
    bool stabilized = false;
};

/// Windowed sup statistic at one index for windows w, 2w and 4w.
inline WindowSweep window_sweep(std::span<const StepRandomVariable> x,
                                const StepRandomVariable& limit, double lambda,
                                std::size_t window, std::size_t n,
                                std::size_t cap = default_piece_cap) {
    WindowSweep sw;
    sw.index = n;
    for (std::size_t w : {window, 2 * window, 4 * window}) {
        const auto p = almost_sure_profile(x, limit, lambda, w, {n}, cap);
        sw.windows.push_back(w);
        sw.statistics.push_back(p.exact.front());
        sw.window_clipped = sw.window_clipped || p.window_clipped;
    }
    sw.stabilized = sw.statistics[0] == sw.statistics[1] && sw.statistics[1] == sw.statistics[2];
    return sw;
}

/// ||X_n - X_inf||_p with expectation over the finite part only.
inline ConvergenceProfile lp_profile(std::span<const StepRandomVariable> x,
                                     const StepRandomVariable& limit, double p,
                                     std::vector<std::size_t> indices,
                                     std::size_t cap = default_piece_cap) {
    if (!(p >= 1.0)) throw ConfigError("L_p exponent must satisfy p >= 1");
    detail::require_indices(x, indices);
    ConvergenceProfile prof;
    prof.mode = Mode::lp;
    prof.p = p;
    prof.hypothesis_violated = !finite_ae(limit);
    for (auto n : indices) {
        if (!finite_ae(x[n - 1])) prof.hypothesis_violated = true;
        const auto norm = expectation_p(difference(x[n - 1], limit, cap), p);
        prof.statistics.push_back(norm.value);
    }
    prof.indices = std::move(indices);
    return prof;
}

struct PointwiseReport {
    DyadicRational omega;
    /// X_1(omega) ... X_horizon(omega)
    std::vector<ExtendedReal> values;
    /// max - min of the projected values over the tail [ceil(h/2), h].
    double tail_oscillation = 0.0;
    /// max |X_n(omega) - X_inf(omega)| over the same tail, when a limit is given.
    std::optional<double> tail_distance;
    bool cauchy = false;
    bool near_limit = false;
};

/// Pointwise Cauchy check at each sample point. With no limit supplied only
/// existence of a limit is assessed.
inline std::vector<PointwiseReport> ae_pointwise_check(std::span<const StepRandomVariable> x,
                                                       const StepRandomVariable* limit,
                                                       std::span<const DyadicRational> omegas,
                                                       std::size_t horizon, double tol) {
    if (horizon < 1 || horizon > x.size())
        throw ConfigError("pointwise horizon outside the available sequence");
    if (!(tol > 0.0)) throw ConfigError("pointwise tolerance must be > 0");
    std::vector<PointwiseReport> out;
    const std::size_t tail_start = (horizon + 1) / 2;
    for (const auto& w : omegas) {
        PointwiseReport r;
        r.omega = w;
        for (std::size_t n = 1; n <= horizon; ++n) r.values.push_back(x[n - 1].evaluate(w));
        double lo = project_to_extended_line(r.values[tail_start - 1]);
        double hi = lo;
        for (std::size_t n = tail_start; n <= horizon; ++n) {
            const double v = project_to_extended_line(r.values[n - 1]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        r.tail_oscillation = (std::isinf(lo) || std::isinf(hi)) ? p_infinity : hi - lo;
        r.cauchy = r.tail_oscillation <= tol;
        if (limit) {
            const auto target = limit->evaluate(w);
            double d = 0.0;
            for (std::size_t n = tail_start; n <= horizon; ++n)
                d = std::max(d, project_to_extended_line(abs(r.values[n - 1] - target)));
            r.tail_distance = d;
            r.near_limit = d <= tol;
        }
        out.push_back(std::move(r));
    }
    return out;
}

/// converges_below(eps, N) if every statistic at indices >= N is < eps;
/// diverges if the top quartile of checked indices stays >= eps.
inline Verdict verdict(const ConvergenceProfile& prof, double epsilon, std::size_t from_index) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    Verdict v;
    v.epsilon = epsilon;
    const auto& s = prof.statistics;
    if (s.empty()) return v;
    bool any = false, below = true;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (prof.indices[k] < from_index) continue;
        any = true;
        if (!(s[k] < epsilon)) below = false;
    }
    if (any && below) {
        v.kind = Verdict::Kind::converges_below;
        v.from_index = from_index;
        return v;
    }
    const auto q = detail::top_quartile_start(s.size());
    if (std::all_of(s.begin() + static_cast<std::ptrdiff_t>(q), s.end(),
                    [&](double t) { return t >= epsilon; })) {
        v.kind = Verdict::Kind::diverges;
        v.witness_index = prof.indices.back();
        v.witness_value = s.back();
    }
    return v;
}

/// Chooses N itself: converges when the maximal suffix of statistics below
/// eps covers the top quartile, and N is where that suffix starts.
inline Verdict verdict(const ConvergenceProfile& prof, double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    const auto& s = prof.statistics;
    if (s.empty()) return Verdict{Verdict::Kind::inconclusive, epsilon};
    std::size_t start = s.size();
    while (start > 0 && s[start - 1] < epsilon) --start;
    if (start < s.size() && start <= detail::top_quartile_start(s.size()))
        return verdict(prof, epsilon, prof.indices[start]);
    return verdict(prof, epsilon, prof.indices.back() + 1);
}

enum class Preservation { preserved, counterexample, inconclusive, input_not_convergent };

inline const char* to_string(Preservation p) {
    switch (p) {
        case Preservation::preserved: return "preserved";
        case Preservation::counterexample: return "counterexample";
        case Preservation::inconclusive: return "inconclusive";
        case Preservation::input_not_convergent: return "input-not-convergent";
    }
    return "?";
}

inline Preservation preservation(const Verdict& input, const Verdict& output) {
    if (input.kind != Verdict::Kind::converges_below) return Preservation::input_not_convergent;
    if (output.kind == Verdict::Kind::converges_below) return Preservation::preserved;
    if (output.kind == Verdict::Kind::diverges) return Preservation::counterexample;
    return Preservation::inconclusive;
}

}  // namespace summa
