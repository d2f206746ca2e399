#pragma once

// Reference computations written without the library's round helpers, so
// tests compare two independent implementations.

#include <cmath>
#include <cstdint>
#include <optional>

namespace oracle {

inline double gap(int omega) { return std::pow(2.0, -omega); }

inline std::int64_t tau(double T, int omega) {
    const double g = gap(omega);
    return static_cast<std::int64_t>(std::ceil(2.0 * std::log(T * g * g) / (g * g)));
}

inline double beta(double T, int omega) {
    const double g = gap(omega);
    return std::sqrt(std::log(T * g * g) / (2.0 * static_cast<double>(tau(T, omega))));
}

// Largest w with 4^w * e <= T.
inline int max_round(double T) {
    int w = 0;
    while (std::pow(4.0, w + 1) * std::exp(1.0) <= T) ++w;
    return w;
}

// Smallest integer b with b >= 5 (T/K)^(2/3), i.e. b^3 >= 125 (T/K)^2.
// T must be a multiple of K.
inline std::int64_t etc_budget(std::int64_t T, std::int64_t K) {
    const std::int64_t x = T / K;
    const __int128 target = static_cast<__int128>(125) * x * x;
    std::int64_t b = static_cast<std::int64_t>(5.0 * std::cbrt(static_cast<double>(x) * static_cast<double>(x))) - 2;
    if (b < 0) b = 0;
    while (static_cast<__int128>(b) * b * b < target) ++b;
    return b;
}

// First round at which a noiseless pairwise comparison with mean gap
// `diff` (reference minus candidate) separates: 2 beta < diff. Empty when
// no round up to the cap separates.
inline std::optional<int> separating_round(double T, double diff) {
    for (int w = 0; w <= max_round(T); ++w) {
        if (2.0 * beta(T, w) < diff) return w;
    }
    return std::nullopt;
}

}  // namespace oracle
