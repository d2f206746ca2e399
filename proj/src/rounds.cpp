#include <csb/rounds.hpp>

#include <csb/error.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace csb::rounds {

double presumed_gap(int omega) {
    if (omega < 0) throw ContractViolation("negative round number");
    return std::ldexp(1.0, -omega);
}

namespace {

double log_argument(double horizon, double gap) {
    const double arg = horizon * gap * gap;
    if (!(arg > 1.0))
        throw RoundOverflowError("T * gap^2 = " + std::to_string(arg) + " <= 1; round is past the cap");
    return std::log(arg);
}

}  // namespace

std::int64_t sample_quota(double horizon, double gap) {
    const double l = log_argument(horizon, gap);
    return static_cast<std::int64_t>(std::ceil(2.0 * l / (gap * gap)));
}

double exploration_bonus(double horizon, double gap, std::int64_t tau) {
    const double l = log_argument(horizon, gap);
    if (tau < 1) throw ContractViolation("quota must be >= 1");
    return std::sqrt(l / (2.0 * static_cast<double>(tau)));
}

int max_round(double horizon) {
    if (!(horizon >= 3.0)) throw DegenerateHorizonError("horizon must be >= 3");
    constexpr double e = std::numbers::e;
    int omega = static_cast<int>(std::floor(0.5 * std::log2(horizon / e)));
    // log2 can land a hair off at exact powers; settle on the scaled test.
    while (std::ldexp(horizon, -2 * (omega + 1)) >= e) ++omega;
    while (omega > 0 && std::ldexp(horizon, -2 * omega) < e) --omega;
    return omega;
}

Round at(double horizon, int omega) {
    const double gap = presumed_gap(omega);
    const auto tau = sample_quota(horizon, gap);
    return {omega, gap, tau, exploration_bonus(horizon, gap, tau)};
}

}  // namespace csb::rounds
