#pragma once

// Random variables on ([0,1), Lebesgue) given as extended-real step
// functions over finite dyadic partitions. Every event of the form
// {w : predicate(X(w))} is a finite union of dyadic intervals, so its
// probability is computed exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "summa/dyadic.hpp"
#include "summa/error.hpp"
#include "summa/extended_real.hpp"

namespace summa {

inline constexpr std::size_t default_piece_cap = std::size_t{1} << 20;

class StepRandomVariable {
public:
    /// Piece k is the half-open interval [breakpoints[k], breakpoints[k+1]).
    StepRandomVariable(std::vector<DyadicRational> breakpoints, std::vector<ExtendedReal> values)
        : breaks_(std::move(breakpoints)), values_(std::move(values)) {
        if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
            throw ConfigError("step function needs one value per piece and at least one piece");
        if (!breaks_.front().is_zero() || breaks_.back() != DyadicRational::one())
            throw ConfigError("step function breakpoints must start at 0 and end at 1");
        for (std::size_t k = 1; k < breaks_.size(); ++k)
            if (!(breaks_[k - 1] < breaks_[k]))
                throw ConfigError("step function breakpoints must be strictly increasing");
    }

    static StepRandomVariable constant(ExtendedReal c) {
        return {{DyadicRational::zero(), DyadicRational::one()}, {c}};
    }

    /// `inside` on [lo, hi), `outside` elsewhere.
    static StepRandomVariable on_interval(const DyadicRational& lo, const DyadicRational& hi,
                                          ExtendedReal inside, ExtendedReal outside = 0.0) {
        if (!(lo < hi)) throw ConfigError("interval must be non-empty");
        std::vector<DyadicRational> b{DyadicRational::zero()};
        std::vector<ExtendedReal> v;
        if (!lo.is_zero()) {
            b.push_back(lo);
            v.push_back(outside);
        }
        v.push_back(inside);
        b.push_back(hi);
        if (hi != DyadicRational::one()) {
            v.push_back(outside);
            b.push_back(DyadicRational::one());
        }
        return {std::move(b), std::move(v)};
    }

    const std::vector<DyadicRational>& breakpoints() const noexcept { return breaks_; }
    const std::vector<ExtendedReal>& values() const noexcept { return values_; }
    std::size_t piece_count() const noexcept { return values_.size(); }

    DyadicRational piece_measure(std::size_t k) const { return breaks_[k + 1] - breaks_[k]; }

    ExtendedReal evaluate(const DyadicRational& omega) const {
        if (omega == DyadicRational::one())
            throw ConfigError("sample point must lie in [0, 1)");
        const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), omega);
        return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
    }

    /// Same function with adjacent equal-valued pieces merged.
    StepRandomVariable simplified() const {
        std::vector<DyadicRational> b{breaks_.front()};
        std::vector<ExtendedReal> v{values_.front()};
        for (std::size_t k = 1; k < values_.size(); ++k) {
            if (values_[k] == v.back()) continue;
            b.push_back(breaks_[k]);
            v.push_back(values_[k]);
        }
        b.push_back(breaks_.back());
        return {std::move(b), std::move(v)};
    }

    friend bool operator==(const StepRandomVariable&, const StepRandomVariable&) = default;

private:
    std::vector<DyadicRational> breaks_;
    std::vector<ExtendedReal> values_;
};

/// Comparison predicate on a single value; its event is piecewise constant.
class EventPredicate {
public:
    enum class Kind { abs_greater, greater, is_infinite };

    static EventPredicate abs_greater(ExtendedReal threshold) {
        return {Kind::abs_greater, threshold, false};
    }
    static EventPredicate greater(ExtendedReal threshold) {
        return {Kind::greater, threshold, false};
    }
    static EventPredicate is_infinite() { return {Kind::is_infinite, 0.0, false}; }

    EventPredicate operator!() const { return {kind_, threshold_, !negated_}; }

    bool holds(const ExtendedReal& v) const {
        bool r = false;
        switch (kind_) {
            case Kind::abs_greater: r = threshold_ < abs(v); break;
            case Kind::greater: r = threshold_ < v; break;
            case Kind::is_infinite: r = v.is_infinite(); break;
        }
        return r != negated_;
    }

    Kind kind() const noexcept { return kind_; }
    const ExtendedReal& threshold() const noexcept { return threshold_; }
    bool negated() const noexcept { return negated_; }

private:
    EventPredicate(Kind k, ExtendedReal t, bool neg) : kind_(k), threshold_(t), negated_(neg) {}

    Kind kind_;
    ExtendedReal threshold_;
    bool negated_;
};

/// A family re-expressed on its merged breakpoint set.
struct Refinement {
    std::vector<DyadicRational> breakpoints;
    /// values[member][piece]
    std::vector<std::vector<ExtendedReal>> values;

    std::size_t piece_count() const noexcept { return breakpoints.size() - 1; }
};

namespace detail {

// Merged grid plus, for each member, the grid index of each of its breakpoints.
struct Grid {
    std::vector<DyadicRational> breaks;
    std::vector<std::vector<std::size_t>> member_index;
};

inline Grid merge_breakpoints(std::span<const StepRandomVariable> family, std::size_t cap) {
    if (family.empty()) throw ConfigError("family must be non-empty");
    Grid g;
    const auto& first = family.front().breakpoints();
    const bool shared = std::all_of(family.begin(), family.end(), [&](const auto& x) {
        return x.breakpoints() == first;
    });
    if (shared) {
        g.breaks = first;
    } else {
        // Balanced pairwise union; members are sorted and usually overlap
        // heavily, so this stays close to linear in the merged size.
        std::vector<std::vector<DyadicRational>> level;
        level.reserve(family.size());
        for (const auto& x : family) level.push_back(x.breakpoints());
        while (level.size() > 1) {
            std::vector<std::vector<DyadicRational>> next;
            next.reserve((level.size() + 1) / 2);
            for (std::size_t k = 0; k + 1 < level.size(); k += 2) {
                std::vector<DyadicRational> u;
                u.reserve(std::max(level[k].size(), level[k + 1].size()));
                std::set_union(level[k].begin(), level[k].end(), level[k + 1].begin(),
                               level[k + 1].end(), std::back_inserter(u));
                next.push_back(std::move(u));
            }
            if (level.size() % 2) next.push_back(std::move(level.back()));
            level = std::move(next);
        }
        g.breaks = std::move(level.front());
    }
    if (g.breaks.size() - 1 > cap) throw PieceCapExceeded(g.breaks.size() - 1, cap);

    g.member_index.reserve(family.size());
    for (const auto& x : family) {
        std::vector<std::size_t> idx;
        idx.reserve(x.breakpoints().size());
        if (shared) {
            for (std::size_t k = 0; k < first.size(); ++k) idx.push_back(k);
        } else {
            auto lo = g.breaks.begin();
            for (const auto& b : x.breakpoints()) {
                lo = std::lower_bound(lo, g.breaks.end(), b);
                idx.push_back(static_cast<std::size_t>(lo - g.breaks.begin()));
            }
        }
        g.member_index.push_back(std::move(idx));
    }
    return g;
}

// Calls f(grid_piece, value) for every grid piece covered by member m.
template <class F>
void for_each_grid_piece(const Grid& g, std::size_t m, const StepRandomVariable& x, F&& f) {
    const auto& idx = g.member_index[m];
    for (std::size_t k = 0; k < x.piece_count(); ++k)
        for (std::size_t p = idx[k]; p < idx[k + 1]; ++p) f(p, x.values()[k]);
}

inline std::vector<DyadicRational> piece_measures(const std::vector<DyadicRational>& breaks) {
    std::vector<DyadicRational> out;
    out.reserve(breaks.size() - 1);
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) out.push_back(breaks[k + 1] - breaks[k]);
    return out;
}

}  // namespace detail

inline Refinement common_refinement(std::span<const StepRandomVariable> family,
                                    std::size_t cap = default_piece_cap) {
    auto g = detail::merge_breakpoints(family, cap);
    Refinement r;
    r.values.reserve(family.size());
    for (std::size_t m = 0; m < family.size(); ++m) {
        std::vector<ExtendedReal> v(g.breaks.size() - 1);
        detail::for_each_grid_piece(g, m, family[m],
                                    [&](std::size_t p, const ExtendedReal& val) { v[p] = val; });
        r.values.push_back(std::move(v));
    }
    r.breakpoints = std::move(g.breaks);
    return r;
}

/// Pointwise sum of coeffs[k] * family[k], exact on the common refinement.
inline StepRandomVariable linear_combination(std::span<const double> coeffs,
                                             std::span<const StepRandomVariable> family,
                                             std::size_t cap = default_piece_cap) {
    if (coeffs.size() != family.size())
        throw ConfigError("coefficient and family lengths differ");
    auto g = detail::merge_breakpoints(family, cap);
    std::vector<ExtendedReal> acc(g.breaks.size() - 1);
    for (std::size_t m = 0; m < family.size(); ++m) {
        const double c = coeffs[m];
        if (c == 0.0) continue;
        detail::for_each_grid_piece(
            g, m, family[m], [&](std::size_t p, const ExtendedReal& val) { acc[p] += c * val; });
    }
    return {std::move(g.breaks), std::move(acc)};
}

/// X - Y pointwise.
inline StepRandomVariable difference(const StepRandomVariable& x, const StepRandomVariable& y,
                                     std::size_t cap = default_piece_cap) {
    const std::vector<StepRandomVariable> pair{x, y};
    const double c[] = {1.0, -1.0};
    return linear_combination(c, pair, cap);
}

/// Exact Lebesgue measure of {w : event(X(w))}.
inline DyadicRational prob(const StepRandomVariable& x, const EventPredicate& event) {
    DyadicRational total;
    for (std::size_t k = 0; k < x.piece_count(); ++k)
        if (event.holds(x.values()[k])) total += x.piece_measure(k);
    return total;
}

/// Exact measure of the set where the event holds for at least one member.
inline DyadicRational prob_any(std::span<const StepRandomVariable> family,
                               const EventPredicate& event, std::size_t cap = default_piece_cap) {
    const auto g = detail::merge_breakpoints(family, cap);
    std::vector<char> hit(g.breaks.size() - 1, 0);
    for (std::size_t m = 0; m < family.size(); ++m)
        detail::for_each_grid_piece(g, m, family[m], [&](std::size_t p, const ExtendedReal& v) {
            if (!hit[p] && event.holds(v)) hit[p] = 1;
        });
    DyadicRational total;
    for (std::size_t p = 0; p < hit.size(); ++p)
        if (hit[p]) total += g.breaks[p + 1] - g.breaks[p];
    return total;
}

/// P(X in R) == 1. Pieces have positive measure, so this means no piece
/// carries an infinite value.
inline bool finite_ae(const StepRandomVariable& x) {
    return std::none_of(x.values().begin(), x.values().end(),
                        [](const ExtendedReal& v) { return v.is_infinite(); });
}

struct LpNorm {
    double value = 0.0;
    /// Set when X had infinite pieces that were excluded from the integral.
    bool restricted = false;
};

inline constexpr double p_infinity = std::numeric_limits<double>::infinity();

/// (E|X|^p)^(1/p) with the expectation taken over {X in R} only; p may be
/// p_infinity, giving the largest |value| over finite pieces.
inline LpNorm expectation_p(const StepRandomVariable& x, double p) {
    if (!(p >= 1.0)) throw ConfigError("L_p exponent must satisfy p >= 1");
    LpNorm out;
    double biggest = 0.0;
    for (std::size_t k = 0; k < x.piece_count(); ++k) {
        const auto& v = x.values()[k];
        if (v.is_infinite()) {
            out.restricted = true;
            continue;
        }
        biggest = std::max(biggest, std::fabs(v.finite_part()));
    }
    if (std::isinf(p) || biggest == 0.0) {
        out.value = biggest;
        return out;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < x.piece_count(); ++k) {
        const auto& v = x.values()[k];
        if (v.is_infinite()) continue;
        const double mu = x.piece_measure(k).to_double();
        const double a = std::fabs(v.finite_part());
        // Scale by the largest magnitude so |value|^p cannot overflow.
        sum += (p == 1.0 ? a : std::pow(a / biggest, p)) * mu;
    }
    out.value = p == 1.0 ? sum : biggest * std::pow(sum, 1.0 / p);
    return out;
}

/// Pointwise max of |X_m - reference| over the family, in the R** order.
inline StepRandomVariable sup_family(std::span<const StepRandomVariable> family,
                                     const StepRandomVariable& reference,
                                     std::size_t cap = default_piece_cap) {
    if (family.empty()) throw ConfigError("sup over an empty family");
    std::vector<StepRandomVariable> all(family.begin(), family.end());
    all.push_back(reference);
    const auto g = detail::merge_breakpoints(all, cap);
    const std::size_t pieces = g.breaks.size() - 1;

    std::vector<ExtendedReal> ref(pieces);
    detail::for_each_grid_piece(g, all.size() - 1, reference,
                                [&](std::size_t p, const ExtendedReal& v) { ref[p] = v; });
    std::vector<ExtendedReal> best(pieces);
    std::vector<char> seen(pieces, 0);
    for (std::size_t m = 0; m + 1 < all.size(); ++m)
        detail::for_each_grid_piece(g, m, all[m], [&](std::size_t p, const ExtendedReal& v) {
            const auto d = abs(v - ref[p]);
            if (!seen[p] || best[p] < d) best[p] = d;
            seen[p] = 1;
        });
    return {g.breaks, std::move(best)};
}

}  // namespace summa
