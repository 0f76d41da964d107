#pragma once

#include <stdexcept>
#include <string>

namespace summa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad config, unparsable literal, violated precondition.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An index or parameter outside the range a builtin family is guarded to.
class GuardViolation : public Error {
public:
    using Error::Error;
};

/// A coefficient that is NaN or overflows the double range.
class NonFiniteValue : public Error {
public:
    using Error::Error;
};

/// A common refinement would exceed the configured piece-count cap.
class PieceCapExceeded : public Error {
public:
    PieceCapExceeded(std::size_t pieces, std::size_t cap)
        : Error("common refinement needs " + std::to_string(pieces) +
                " pieces, cap is " + std::to_string(cap)),
          pieces_(pieces), cap_(cap) {}

    std::size_t pieces() const noexcept { return pieces_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t pieces_;
    std::size_t cap_;
};

}  // namespace summa
