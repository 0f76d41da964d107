#pragma once

// Infinite summability matrices given row by row, their application to
// sequences of step random variables, and finite-depth checks of the three
// Silverman-Toeplitz conditions. Columns are 1-based throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "summa/error.hpp"
#include "summa/step_rv.hpp"

namespace summa {

struct ZeroTail {};
/// Sum of |a_ij| over the columns beyond the explicit coefficients.
struct L1TailBound {
    double bound = 0.0;
};
using RowTail = std::variant<ZeroTail, L1TailBound>;

struct RowSpec {
    /// a_i1, ..., a_iJ
    std::vector<double> coefficients;
    RowTail tail = ZeroTail{};

    void validate() const {
        for (double c : coefficients)
            if (!std::isfinite(c)) throw ConfigError("row coefficients must be finite");
        if (const auto* t = std::get_if<L1TailBound>(&tail))
            if (!(t->bound >= 0.0) || !std::isfinite(t->bound))
                throw ConfigError("l1 tail bound must be a finite non-negative real");
    }

    double tail_bound() const {
        const auto* t = std::get_if<L1TailBound>(&tail);
        return t ? t->bound : 0.0;
    }

    /// 1-based index of the last nonzero explicit coefficient (0 if none).
    std::size_t support() const {
        std::size_t j = coefficients.size();
        while (j > 0 && coefficients[j - 1] == 0.0) --j;
        return j;
    }
};

/// Facts a builtin family knows in closed form; these are the only way a
/// limit condition can be certified.
struct AnalyticFacts {
    double norm = 1.0;
    bool columns_tend_to_zero = false;
    bool row_sums_tend_to_one = false;
    bool row_sums_exactly_one = false;
};

class SummabilityMatrix {
public:
    using RowGenerator = std::function<RowSpec(std::size_t)>;

    SummabilityMatrix(std::string name, RowGenerator rows,
                      std::optional<std::size_t> row_count = std::nullopt,
                      std::optional<AnalyticFacts> facts = std::nullopt)
        : name_(std::move(name)), rows_(std::move(rows)), row_count_(row_count),
          facts_(facts) {}

    const std::string& name() const noexcept { return name_; }
    /// nullopt for infinitely many rows.
    std::optional<std::size_t> row_count() const noexcept { return row_count_; }
    const std::optional<AnalyticFacts>& facts() const noexcept { return facts_; }

    RowSpec row(std::size_t i) const {
        if (i < 1 || (row_count_ && i > *row_count_))
            throw ConfigError("matrix '" + name_ + "' has no row " + std::to_string(i));
        RowSpec r = rows_(i);
        r.validate();
        return r;
    }

private:
    std::string name_;
    RowGenerator rows_;
    std::optional<std::size_t> row_count_;
    std::optional<AnalyticFacts> facts_;
};

/// Arithmetic means: a_ij = 1/i for j <= i.
inline SummabilityMatrix cesaro() {
    return {"cesaro",
            [](std::size_t i) {
                return RowSpec{std::vector<double>(i, 1.0 / static_cast<double>(i)), ZeroTail{}};
            },
            std::nullopt, AnalyticFacts{1.0, true, true, true}};
}

inline SummabilityMatrix identity_matrix() {
    return {"identity",
            [](std::size_t i) {
                std::vector<double> c(i, 0.0);
                c[i - 1] = 1.0;
                return RowSpec{std::move(c), ZeroTail{}};
            },
            std::nullopt, AnalyticFacts{1.0, true, true, true}};
}

/// a_i1 = 1 on every row and nothing else, so rows still sum to 1 while the
/// first column never decays.
inline SummabilityMatrix first_column_ones() {
    return {"first_column_ones", [](std::size_t) { return RowSpec{{1.0}, ZeroTail{}}; }};
}

/// Finitely many explicit rows; no analytic facts.
inline SummabilityMatrix dense(std::vector<RowSpec> rows, std::string name = "dense") {
    if (rows.empty()) throw ConfigError("dense matrix needs at least one row");
    for (const auto& r : rows) r.validate();
    const std::size_t n = rows.size();
    return {std::move(name), [rows = std::move(rows)](std::size_t i) { return rows[i - 1]; }, n};
}

/// Options for rows whose tail is only bounded in l1.
struct ApplyOptions {
    /// Allowed truncation error on finite parts.
    double precision = 0.0;
    /// Uniform bound on sup |X_j| over the tail columns, if known.
    std::optional<double> tail_value_bound;
    std::size_t piece_cap = default_piece_cap;
};

/// (Ax)_i = sum_j a_ij X_j, with x[0] holding X_1.
inline StepRandomVariable apply_row(const SummabilityMatrix& a, std::size_t i,
                                    std::span<const StepRandomVariable> x,
                                    const ApplyOptions& opt = {}) {
    const RowSpec r = a.row(i);
    const std::size_t support = r.support();
    if (x.size() < support)
        throw ConfigError("row " + std::to_string(i) + " of '" + a.name() + "' needs " +
                          std::to_string(support) + " sequence terms, got " +
                          std::to_string(x.size()));
    if (const double tb = r.tail_bound(); tb > 0.0) {
        if (!opt.tail_value_bound || tb * *opt.tail_value_bound > opt.precision)
            throw ConfigError("row " + std::to_string(i) + " of '" + a.name() +
                              "' has an l1 tail that cannot be certified within the precision");
    }
    if (support == 0) return StepRandomVariable::constant(0.0);
    return linear_combination(std::span(r.coefficients).first(support), x.first(support),
                              opt.piece_cap);
}

/// (Ax)_1 ... (Ax)_rows. Rows are independent; each lands in its own slot,
/// so the result does not depend on the thread count.
inline std::vector<StepRandomVariable> apply_matrix(const SummabilityMatrix& a,
                                                    std::span<const StepRandomVariable> x,
                                                    std::size_t rows, const ApplyOptions& opt = {},
                                                    unsigned threads = 1) {
    std::vector<std::optional<StepRandomVariable>> slots(rows);
    std::vector<std::exception_ptr> errors(std::max(1u, threads));
    auto work = [&](unsigned t, unsigned stride) {
        try {
            for (std::size_t i = t; i < rows; i += stride) slots[i] = apply_row(a, i + 1, x, opt);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<StepRandomVariable> out;
    out.reserve(rows);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// Regularity

enum class ConditionStatus { holds_at_depth, fails, undetermined };
enum class Regularity { regular, not_regular, undetermined_at_depth };

struct Witness {
    /// Row i for conditions 1 and 3, column j for condition 2.
    std::size_t index = 0;
    double value = 0.0;
};

struct ConditionVerdict {
    ConditionStatus status = ConditionStatus::undetermined;
    std::optional<Witness> witness;
    /// True when a closed-form fact backs the verdict, not just finite data.
    bool certified = false;
};

struct RegularityReport {
    std::size_t depth = 0;
    double tolerance = 0.0;
    double norm_estimate = 0.0;
    ConditionVerdict bounded_norm;      // sup_i sum_j |a_ij| = M < inf
    ConditionVerdict columns_vanish;    // lim_i a_ij = 0 for each j
    ConditionVerdict row_sums_to_one;   // lim_i sum_j a_ij = 1
    Regularity overall = Regularity::undetermined_at_depth;
};

inline const char* to_string(ConditionStatus s) {
    switch (s) {
        case ConditionStatus::holds_at_depth: return "holds-at-depth";
        case ConditionStatus::fails: return "fails";
        case ConditionStatus::undetermined: return "undetermined";
    }
    return "?";
}

inline const char* to_string(Regularity r) {
    switch (r) {
        case Regularity::regular: return "regular";
        case Regularity::not_regular: return "not-regular";
        case Regularity::undetermined_at_depth: return "undetermined-at-depth";
    }
    return "?";
}

namespace detail {

// Neumaier-compensated summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace detail

/// Finite-depth check of the three regularity conditions.
///
/// Limit conditions are judged on the top quartile of rows [ceil(3d/4), d].
/// A condition fails only on a persistent floor: the quantity stays above
/// tol across the whole window and does not shrink from the first window
/// row to the last. Otherwise it holds at depth (within tol at row d) or is
/// undetermined. Only AnalyticFacts can turn the overall verdict into
/// regular.
inline RegularityReport check_regularity(const SummabilityMatrix& a, std::size_t depth,
                                         double tol) {
    if (depth < 1) throw ConfigError("regularity depth must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("regularity tolerance must be > 0");
    if (a.row_count()) depth = std::min(depth, *a.row_count());

    RegularityReport rep;
    rep.depth = depth;
    rep.tolerance = tol;

    const std::size_t window_start = std::max<std::size_t>(1, (3 * depth + 3) / 4);
    std::vector<RowSpec> window;
    std::vector<double> row_sums;
    double norm = 0.0;
    std::optional<Witness> unbounded;

    for (std::size_t i = 1; i <= depth; ++i) {
        RowSpec r = a.row(i);
        detail::CompensatedSum abs_sum, sum;
        for (double c : r.coefficients) {
            abs_sum.add(std::fabs(c));
            sum.add(c);
        }
        abs_sum.add(r.tail_bound());
        const double l1 = abs_sum.value();
        if (!std::isfinite(l1) && !unbounded) unbounded = Witness{i, l1};
        norm = std::max(norm, l1);
        if (i >= window_start) {
            row_sums.push_back(sum.value());
            window.push_back(std::move(r));
        }
    }

    const auto& facts = a.facts();
    rep.norm_estimate = facts ? facts->norm : norm;
    if (unbounded) {
        rep.bounded_norm = {ConditionStatus::fails, unbounded, false};
    } else {
        rep.bounded_norm = {ConditionStatus::holds_at_depth, std::nullopt, facts.has_value()};
        if (facts && std::fabs(norm - facts->norm) > tol)
            rep.bounded_norm = {ConditionStatus::fails, Witness{depth, norm}, false};
    }

    // Condition 2: columns 1..depth.
    auto coeff = [](const RowSpec& r, std::size_t j) {
        return j <= r.coefficients.size() ? r.coefficients[j - 1] : 0.0;
    };
    std::optional<Witness> column_failure;
    bool columns_small = true;
    for (std::size_t j = 1; j <= depth && !column_failure; ++j) {
        const double first = std::fabs(coeff(window.front(), j));
        const double last = std::fabs(coeff(window.back(), j));
        const bool floor = std::all_of(window.begin(), window.end(), [&](const RowSpec& r) {
            return std::fabs(coeff(r, j)) > tol;
        });
        if (floor && last >= first) column_failure = Witness{j, coeff(window.back(), j)};
        if (last > tol) columns_small = false;
    }
    if (column_failure)
        rep.columns_vanish = {ConditionStatus::fails, column_failure, false};
    else if (facts && facts->columns_tend_to_zero)
        rep.columns_vanish = {ConditionStatus::holds_at_depth, std::nullopt, true};
    else
        rep.columns_vanish = {columns_small ? ConditionStatus::holds_at_depth
                                            : ConditionStatus::undetermined,
                              std::nullopt, false};

    // Condition 3.
    if (facts && facts->row_sums_exactly_one)
        std::fill(row_sums.begin(), row_sums.end(), 1.0);
    // A bounded tail leaves the row sum uncertain by at most the bound.
    std::vector<double> gaps;
    for (std::size_t k = 0; k < row_sums.size(); ++k)
        gaps.push_back(std::fabs(row_sums[k] - 1.0) - window[k].tail_bound());
    const bool sum_floor =
        std::all_of(gaps.begin(), gaps.end(), [&](double g) { return g > tol; });
    if (sum_floor && gaps.back() >= gaps.front())
        rep.row_sums_to_one = {ConditionStatus::fails, Witness{depth, row_sums.back()}, false};
    else if (facts && facts->row_sums_tend_to_one)
        rep.row_sums_to_one = {ConditionStatus::holds_at_depth, std::nullopt, true};
    else
        rep.row_sums_to_one = {std::fabs(row_sums.back() - 1.0) + window.back().tail_bound() <= tol
                                   ? ConditionStatus::holds_at_depth
                                   : ConditionStatus::undetermined,
                               std::nullopt, false};

    const ConditionVerdict* all[] = {&rep.bounded_norm, &rep.columns_vanish, &rep.row_sums_to_one};
    if (std::any_of(std::begin(all), std::end(all),
                    [](auto* v) { return v->status == ConditionStatus::fails; }))
        rep.overall = Regularity::not_regular;
    else if (std::all_of(std::begin(all), std::end(all), [](auto* v) { return v->certified; }))
        rep.overall = Regularity::regular;
    else
        rep.overall = Regularity::undetermined_at_depth;
    return rep;
}

}  // namespace summa
