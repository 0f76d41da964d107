#pragma once

// Extended reals as the two-dimensional ordered vector space over R with
// basis (1, inf): every value is uniquely a + b*inf. Ordering is
// lexicographic with the inf coefficient dominant, so b > 0 values exceed
// every real and b < 0 values lie below every real.

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "summa/detail/numeric_text.hpp"
#include "summa/error.hpp"

namespace summa {

class ExtendedReal {
public:
    constexpr ExtendedReal() noexcept = default;

    // Implicit from a real: a == a + 0*inf.
    ExtendedReal(double finite_part) : ExtendedReal(finite_part, 0.0) {}

    ExtendedReal(double finite_part, double infinite_coeff)
        : finite_(finite_part), infinite_(infinite_coeff) {
        if (!std::isfinite(finite_) || !std::isfinite(infinite_))
            throw NonFiniteValue("extended real coefficients must be finite reals");
        // -0.0 and 0.0 are the same coefficient; keep one representation.
        finite_ += 0.0;
        infinite_ += 0.0;
    }

    /// The basis element inf, i.e. 0 + 1*inf.
    static ExtendedReal infinity() { return {0.0, 1.0}; }

    double finite_part() const noexcept { return finite_; }
    double infinite_coeff() const noexcept { return infinite_; }

    bool is_finite() const noexcept { return infinite_ == 0.0; }
    bool is_infinite() const noexcept { return infinite_ != 0.0; }
    bool is_positive_infinite() const noexcept { return infinite_ > 0.0; }
    bool is_negative_infinite() const noexcept { return infinite_ < 0.0; }

    ExtendedReal operator-() const { return {-finite_, -infinite_}; }

    ExtendedReal& operator+=(const ExtendedReal& v) {
        return *this = ExtendedReal(finite_ + v.finite_, infinite_ + v.infinite_);
    }
    ExtendedReal& operator-=(const ExtendedReal& v) { return *this += -v; }
    ExtendedReal& operator*=(double c) {
        return *this = ExtendedReal(c * finite_, c * infinite_);
    }

    friend ExtendedReal operator+(ExtendedReal u, const ExtendedReal& v) { return u += v; }
    friend ExtendedReal operator-(ExtendedReal u, const ExtendedReal& v) { return u -= v; }
    friend ExtendedReal operator*(double c, ExtendedReal u) { return u *= c; }
    friend ExtendedReal operator*(ExtendedReal u, double c) { return u *= c; }

    friend bool operator==(const ExtendedReal& u, const ExtendedReal& v) noexcept {
        return u.infinite_ == v.infinite_ && u.finite_ == v.finite_;
    }
    friend std::strong_ordering operator<=>(const ExtendedReal& u,
                                            const ExtendedReal& v) noexcept {
        // Coefficients are never NaN and -0.0 is normalized away, so the
        // double comparisons below are a total order.
        if (u.infinite_ < v.infinite_) return std::strong_ordering::less;
        if (u.infinite_ > v.infinite_) return std::strong_ordering::greater;
        if (u.finite_ < v.finite_) return std::strong_ordering::less;
        if (u.finite_ > v.finite_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// Renders "a" when finite, otherwise "a + b*inf" / "a - |b|*inf".
    std::string to_string() const {
        std::string out = detail::format_double(finite_);
        if (infinite_ == 0.0) return out;
        out += infinite_ > 0.0 ? " + " : " - ";
        out += detail::format_double(std::fabs(infinite_));
        out += "*inf";
        return out;
    }

    /// Accepts "a", "a + b*inf", "a - b*inf", "b*inf", "inf", "-inf",
    /// "a + inf" and the same with arbitrary whitespace.
    static ExtendedReal parse(std::string_view text);

private:
    double finite_ = 0.0;
    double infinite_ = 0.0;
};

// R** is a vector space over R only; a product of two extended reals is
// deliberately left undefined.
ExtendedReal operator*(const ExtendedReal&, const ExtendedReal&) = delete;
ExtendedReal operator/(const ExtendedReal&, const ExtendedReal&) = delete;

/// Componentwise absolute value |a| + |b|*inf. This is not the
/// order-theoretic absolute value: abs(-1 + inf) == 1 + inf.
inline ExtendedReal abs(const ExtendedReal& u) {
    return {std::fabs(u.finite_part()), std::fabs(u.infinite_coeff())};
}

inline ExtendedReal scale(double c, const ExtendedReal& u) { return c * u; }

inline bool less_than(const ExtendedReal& u, const ExtendedReal& v) { return u < v; }

inline bool is_infinite(const ExtendedReal& u) { return u.is_infinite(); }

/// Projection onto R* = R u {-inf, +inf}, using IEEE infinities as markers.
inline double project_to_extended_line(const ExtendedReal& u) {
    if (u.is_positive_infinite()) return std::numeric_limits<double>::infinity();
    if (u.is_negative_infinite()) return -std::numeric_limits<double>::infinity();
    return u.finite_part();
}

inline std::ostream& operator<<(std::ostream& os, const ExtendedReal& u) {
    return os << u.to_string();
}

inline ExtendedReal ExtendedReal::parse(std::string_view text) {
    const std::string s = detail::strip_spaces(text);
    auto fail = [&]() -> ConfigError {
        return ConfigError("cannot parse extended real '" + std::string(text) + "'");
    };
    if (s.empty()) throw fail();

    constexpr std::string_view inf_suffix = "inf";
    if (s.size() < inf_suffix.size() ||
        std::string_view(s).substr(s.size() - inf_suffix.size()) != inf_suffix) {
        auto a = detail::parse_double(s);
        if (!a || !std::isfinite(*a)) throw fail();
        return ExtendedReal(*a);
    }

    std::string_view body(s);
    body.remove_suffix(inf_suffix.size());
    if (!body.empty() && body.back() == '*') body.remove_suffix(1);

    auto is_sign = [](char c) { return c == '+' || c == '-'; };
    // Locate the sign that separates the finite term from the inf term,
    // skipping exponent signs like "1e-3".
    std::size_t split = 0;
    for (std::size_t k = body.size(); k-- > 1;) {
        if (is_sign(body[k]) && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = is_sign(body[k - 1]) ? k - 1 : k;
            break;
        }
    }

    double a = 0.0;
    if (split > 0) {
        auto parsed = detail::parse_double(body.substr(0, split));
        if (!parsed || !std::isfinite(*parsed)) throw fail();
        a = *parsed;
    }

    std::string_view coeff = body.substr(split);
    double sign = 1.0;
    for (int n = 0; n < 2 && !coeff.empty() && is_sign(coeff.front()); ++n) {
        if (coeff.front() == '-') sign = -sign;
        coeff.remove_prefix(1);
    }
    double b = 1.0;
    if (!coeff.empty()) {
        auto parsed = detail::parse_double(coeff);
        if (!parsed || !std::isfinite(*parsed) || is_sign(coeff.front())) throw fail();
        b = *parsed;
    }
    return ExtendedReal(a, sign * b);
}

}  // namespace summa
