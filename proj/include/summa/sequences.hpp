#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "summa/diagnostics.hpp"
#include "summa/error.hpp"
#include "summa/step_rv.hpp"

namespace summa {

struct SequenceFamily {
    std::string name;
    std::function<StepRandomVariable(std::size_t)> generator;
    StepRandomVariable limit = StepRandomVariable::constant(0.0);
    std::vector<Mode> declared_modes;
    std::optional<std::size_t> max_index;

    StepRandomVariable at(std::size_t n) const {
        if (n < 1 || (max_index && n > *max_index))
            throw GuardViolation("family '" + name + "' is defined for n in [1, " +
                                 (max_index ? std::to_string(*max_index) : "inf") + "], got " +
                                 std::to_string(n));
        return generator(n);
    }

    /// X_1 ... X_count.
    std::vector<StepRandomVariable> prefix(std::size_t count) const {
        std::vector<StepRandomVariable> out;
        out.reserve(count);
        for (std::size_t n = 1; n <= count; ++n) out.push_back(at(n));
        return out;
    }

    bool declares(Mode m) const {
        for (auto d : declared_modes)
            if (d == m) return true;
        return false;
    }
};

// ---------------------------------------------------------------------------
// The rotating-block counterexample: for n = 2^m + i (m >= 1, 0 <= i < 2^m)
// X_n is 4^(m+i) on [i/2^m, (i+1)/2^m) and 0 elsewhere.

/// 4^(m+i) reaches 4^263 at n = 511, still well inside double range.
inline constexpr std::size_t example1_max_index = 511;

struct BlockIndex {
    std::uint32_t level = 0;   // m
    std::uint64_t offset = 0;  // i
};

inline BlockIndex example1_block(std::size_t n) {
    const auto m = static_cast<std::uint32_t>(std::bit_width(n) - 1);
    return {m, n - (std::size_t{1} << m)};
}

inline StepRandomVariable example1(std::size_t n) {
    if (n < 2 || n > example1_max_index)
        throw GuardViolation("example1 is defined for n in [2, " +
                             std::to_string(example1_max_index) + "], got " + std::to_string(n));
    const auto [m, i] = example1_block(n);
    const double value = std::ldexp(1.0, static_cast<int>(2 * (m + i)));
    return StepRandomVariable::on_interval(DyadicRational(BigInt(i), m),
                                           DyadicRational(BigInt(i + 1), m), value);
}

/// X_1 is taken to be 0 so that full prefixes exist.
inline SequenceFamily example1_family() {
    return {"example1",
            [](std::size_t n) {
                return n == 1 ? StepRandomVariable::constant(0.0) : example1(n);
            },
            StepRandomVariable::constant(0.0),
            {Mode::in_probability},
            example1_max_index};
}

/// X_1 = inf on [0, eps), X_n = 0 for n >= 2.
inline SequenceFamily example2(const DyadicRational& epsilon) {
    if (epsilon.is_zero() || epsilon == DyadicRational::one())
        throw ConfigError("example2 needs epsilon in (0, 1)");
    auto first = StepRandomVariable::on_interval(DyadicRational::zero(), epsilon,
                                                 ExtendedReal::infinity());
    return {"example2",
            [first = std::move(first)](std::size_t n) {
                return n == 1 ? first : StepRandomVariable::constant(0.0);
            },
            StepRandomVariable::constant(0.0),
            {Mode::in_probability, Mode::almost_sure, Mode::ae_pointwise, Mode::lp},
            std::nullopt};
}

inline SequenceFamily constant_family(ExtendedReal c) {
    return {"constant", [c](std::size_t) { return StepRandomVariable::constant(c); },
            StepRandomVariable::constant(c),
            {Mode::in_probability, Mode::almost_sure, Mode::ae_pointwise, Mode::lp},
            std::nullopt};
}

// ---------------------------------------------------------------------------
// Synthetic inputs with convergence built in.

struct DyadicInterval {
    DyadicRational lo;
    DyadicRational hi = DyadicRational::one();
};

using DecayFn = std::function<double(std::size_t)>;
using SupportFn = std::function<DyadicInterval(std::size_t)>;

/// X_n = decay(n) on support(n), 0 elsewhere, limit 0. For monotone decay
/// the sup over m >= n of |X_m| is at most decay(n).
inline SequenceFamily synthetic_as(DecayFn decay, SupportFn support = {}) {
    auto gen = [decay = std::move(decay), support = std::move(support)](std::size_t n) {
        const double d = decay(n);
        if (!std::isfinite(d) || d < 0.0)
            throw ConfigError("synthetic_as decay must be finite and non-negative");
        const DyadicInterval s = support ? support(n) : DyadicInterval{};
        return StepRandomVariable::on_interval(s.lo, s.hi, d);
    };
    return {"synthetic_as", std::move(gen), StepRandomVariable::constant(0.0),
            {Mode::almost_sure, Mode::in_probability}, std::nullopt};
}

/// ||X_n||_p = norm_target(n) exactly, realized as a constant on
/// [0, 2^-support_log2) scaled by 2^(support_log2 / p).
inline SequenceFamily synthetic_lp(DecayFn norm_target, double p, std::uint32_t support_log2 = 0) {
    if (!(p >= 1.0)) throw ConfigError("L_p exponent must satisfy p >= 1");
    const double scale = std::isinf(p) ? 1.0 : std::exp2(support_log2 / p);
    auto gen = [norm_target = std::move(norm_target), scale, support_log2](std::size_t n) {
        const double t = norm_target(n);
        if (!std::isfinite(t) || t < 0.0)
            throw ConfigError("synthetic_lp norm target must be finite and non-negative");
        return StepRandomVariable::on_interval(DyadicRational::zero(),
                                               DyadicRational(BigInt(1), support_log2), t * scale);
    };
    return {"synthetic_lp", std::move(gen), StepRandomVariable::constant(0.0), {Mode::lp},
            std::nullopt};
}

/// "0", "1/n", "1/n^2", "2^-n".
inline DecayFn decay_by_name(const std::string& name) {
    if (name == "0") return [](std::size_t) { return 0.0; };
    if (name == "1/n") return [](std::size_t n) { return 1.0 / static_cast<double>(n); };
    if (name == "1/n^2")
        return [](std::size_t n) {
            const double d = static_cast<double>(n);
            return 1.0 / (d * d);
        };
    if (name == "2^-n") return [](std::size_t n) { return std::ldexp(1.0, -static_cast<int>(n)); };
    throw ConfigError("unknown decay '" + name + "' (expected 0, 1/n, 1/n^2 or 2^-n)");
}

struct FamilyInfo {
    std::string name;
    std::string parameters;
    std::string description;
};

inline std::vector<FamilyInfo> list_families() {
    return {
        {"example1", "", "4^(m+i) on [i/2^m, (i+1)/2^m) for n = 2^m + i; X_1 = 0; n <= 511"},
        {"example2", "epsilon (dyadic)", "X_1 = inf on [0, epsilon), X_n = 0 for n >= 2"},
        {"constant", "value (extended real)", "X_n = value for every n"},
        {"synthetic_as", "decay, support", "decay(n) on a dyadic support, limit 0"},
        {"synthetic_lp", "norm, p, support_log2", "||X_n||_p = norm(n) exactly, limit 0"},
    };
}

}  // namespace summa
