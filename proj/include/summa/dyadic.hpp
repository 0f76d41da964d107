#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "summa/detail/numeric_text.hpp"
#include "summa/error.hpp"

namespace summa {

using BigInt = boost::multiprecision::cpp_int;

/// Exact dyadic rational numerator / 2^log2_denominator in [0, 1].
///
/// Kept canonical (numerator odd, or exponent 0), so equal values always
/// have equal representations. Used for breakpoints of step functions and
/// for every probability the library reports.
class DyadicRational {
public:
    DyadicRational() = default;

    DyadicRational(BigInt numerator, std::uint32_t log2_denominator)
        : num_(std::move(numerator)), exp_(log2_denominator) {
        if (num_ < 0 || num_ > (BigInt(1) << exp_))
            throw ConfigError("dyadic rational " + num_.str() + "/2^" +
                              std::to_string(exp_) + " lies outside [0, 1]");
        canonicalize();
    }

    static DyadicRational zero() { return {}; }
    static DyadicRational one() { return {BigInt(1), 0}; }

    const BigInt& numerator() const noexcept { return num_; }
    std::uint32_t log2_denominator() const noexcept { return exp_; }

    bool is_zero() const noexcept { return num_.is_zero(); }

    double to_double() const {
        // numerator <= 2^exp; drop low bits first so the conversion
        // cannot overflow for very fine breakpoints.
        constexpr std::uint32_t max_exp = 1000;
        if (exp_ > max_exp)
            return std::ldexp(BigInt(num_ >> (exp_ - max_exp)).convert_to<double>(),
                              -static_cast<int>(max_exp));
        return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_));
    }

    friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
        const auto e = std::max(a.exp_, b.exp_);
        return {a.scaled_to(e) + b.scaled_to(e), e};
    }
    /// Requires a >= b.
    friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
        const auto e = std::max(a.exp_, b.exp_);
        return {a.scaled_to(e) - b.scaled_to(e), e};
    }
    DyadicRational& operator+=(const DyadicRational& b) { return *this = *this + b; }

    /// Halves the value.
    DyadicRational half() const { return {num_, exp_ + 1}; }

    friend bool operator==(const DyadicRational& a, const DyadicRational& b) noexcept {
        return a.exp_ == b.exp_ && a.num_ == b.num_;
    }
    friend std::strong_ordering operator<=>(const DyadicRational& a,
                                            const DyadicRational& b) {
        if (a.exp_ == b.exp_) return cmp(a.num_, b.num_);
        const auto e = std::max(a.exp_, b.exp_);
        return cmp(a.scaled_to(e), b.scaled_to(e));
    }

    /// "num/2^k", the wire format of breakpoints and probabilities.
    std::string to_string() const {
        return num_.str() + "/2^" + std::to_string(exp_);
    }

    /// Accepts "num/2^k", "num/den" with den a power of two, or "0" / "1".
    static DyadicRational parse(std::string_view text);

private:
    static std::strong_ordering cmp(const BigInt& x, const BigInt& y) {
        const int c = x.compare(y);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    BigInt scaled_to(std::uint32_t e) const { return num_ << (e - exp_); }

    void canonicalize() {
        if (num_.is_zero()) {
            exp_ = 0;
            return;
        }
        const auto tz = static_cast<std::uint32_t>(boost::multiprecision::lsb(num_));
        const auto shift = std::min(tz, exp_);
        num_ >>= shift;
        exp_ -= shift;
    }

    BigInt num_ = 0;
    std::uint32_t exp_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const DyadicRational& d) {
    return os << d.to_string();
}

inline DyadicRational DyadicRational::parse(std::string_view text) {
    const std::string s = detail::strip_spaces(text);
    auto fail = [&]() {
        return ConfigError("cannot parse dyadic rational '" + std::string(text) + "'");
    };
    auto parse_uint = [&](std::string_view digits) -> BigInt {
        if (digits.empty() || digits.size() > 4096) throw fail();
        for (char c : digits)
            if (c < '0' || c > '9') throw fail();
        return BigInt(std::string(digits));
    };

    const auto slash = s.find('/');
    if (slash == std::string::npos) return {parse_uint(s), 0};

    BigInt num = parse_uint(std::string_view(s).substr(0, slash));
    std::string_view den = std::string_view(s).substr(slash + 1);
    std::uint32_t exp = 0;
    if (den.substr(0, 2) == "2^") {
        const BigInt e = parse_uint(den.substr(2));
        if (e > 1u << 20) throw fail();
        exp = e.convert_to<std::uint32_t>();
    } else {
        const BigInt d = parse_uint(den);
        if (d.is_zero() || (d & (d - 1)) != 0) throw fail();
        exp = static_cast<std::uint32_t>(boost::multiprecision::msb(d));
    }
    return {std::move(num), exp};
}

}  // namespace summa
