#pragma once

// Approximate profiles for random variables known only through a sampler
// w -> X_n(w). Results are flagged uncertified and carry Wilson half-widths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "summa/diagnostics.hpp"

namespace summa {

/// X_n(omega) for omega in [0, 1).
using Sampler = std::function<ExtendedReal(std::size_t n, double omega)>;

struct MonteCarloOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 100000;
    double z = 1.96;
};

/// Half-width of the Wilson score interval for a proportion.
inline double wilson_half_width(double phat, std::size_t samples, double z = 1.96) {
    const double n = static_cast<double>(samples);
    const double z2 = z * z;
    return z / (1.0 + z2 / n) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
}

/// Exact dyadic value of a double in [0, 1).
inline DyadicRational dyadic_from_double(double omega) {
    if (!(omega >= 0.0 && omega < 1.0)) throw ConfigError("sample point must lie in [0, 1)");
    if (omega == 0.0) return {};
    int e = 0;
    const double m = std::frexp(omega, &e);  // omega = m * 2^e, m in [0.5, 1)
    const auto num = static_cast<std::uint64_t>(std::ldexp(m, 53));
    return {BigInt(num), static_cast<std::uint32_t>(53 - e)};
}

/// Sampler view of an exact step-function sequence (x[0] is X_1).
inline Sampler sampler_from_steps(std::span<const StepRandomVariable> x) {
    return [x](std::size_t n, double omega) { return x[n - 1].evaluate(dyadic_from_double(omega)); };
}

namespace detail {

// Uniform draws on the 2^-53 grid; independent of the standard library's
// distribution implementations.
inline std::vector<double> uniform_points(const MonteCarloOptions& opt) {
    if (opt.samples == 0) throw ConfigError("Monte Carlo sample count must be > 0");
    std::mt19937_64 rng(opt.seed);
    std::vector<double> w(opt.samples);
    for (auto& v : w) v = std::ldexp(static_cast<double>(rng() >> 11), -53);
    return w;
}

template <class Hit>
ConvergenceProfile mc_profile(Mode mode, std::vector<std::size_t> indices,
                              const MonteCarloOptions& opt, Hit&& hit) {
    const auto points = uniform_points(opt);
    ConvergenceProfile prof;
    prof.mode = mode;
    prof.certified = false;
    for (auto n : indices) {
        std::size_t count = 0;
        for (double w : points)
            if (hit(n, w)) ++count;
        const double phat = static_cast<double>(count) / static_cast<double>(points.size());
        prof.statistics.push_back(phat);
        prof.half_widths.push_back(wilson_half_width(phat, points.size(), opt.z));
    }
    prof.indices = std::move(indices);
    return prof;
}

}  // namespace detail

/// Estimate of P(|X_n - X_inf| > lambda); the same sample points are reused
/// at every index.
inline ConvergenceProfile mc_in_probability_profile(const Sampler& x,
                                                    const std::function<ExtendedReal(double)>& limit,
                                                    double lambda, std::vector<std::size_t> indices,
                                                    const MonteCarloOptions& opt) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    auto prof = detail::mc_profile(Mode::in_probability, std::move(indices), opt,
                                   [&](std::size_t n, double w) {
                                       return ExtendedReal(lambda) < abs(x(n, w) - limit(w));
                                   });
    prof.lambda = lambda;
    return prof;
}

/// Estimate of P(sup_{n <= m <= n + window} |X_m - X_inf| > lambda).
inline ConvergenceProfile mc_almost_sure_profile(const Sampler& x,
                                                 const std::function<ExtendedReal(double)>& limit,
                                                 double lambda, std::size_t window,
                                                 std::vector<std::size_t> indices,
                                                 const MonteCarloOptions& opt) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (window < 1) throw ConfigError("window must be >= 1");
    auto prof = detail::mc_profile(Mode::almost_sure, std::move(indices), opt,
                                   [&](std::size_t n, double w) {
                                       const auto target = limit(w);
                                       for (std::size_t m = n; m <= n + window; ++m)
                                           if (ExtendedReal(lambda) < abs(x(m, w) - target))
                                               return true;
                                       return false;
                                   });
    prof.lambda = lambda;
    prof.window = window;
    prof.lower_bound = true;
    return prof;
}

}  // namespace summa
