#pragma once

#include <cstdint>

// Round arithmetic shared by the elimination policies. Round `omega`
// presumes a gap of 2^-omega, asks every arm in play for `sample_quota`
// samples and then compares confidence intervals of half-width
// `exploration_bonus`. Horizons are real-valued so the formulas can be
// probed at non-integer points; policies pass integers.

namespace csb::rounds {

/// 2^-omega, exact.
double presumed_gap(int omega);

/// ceil(2 ln(T g^2) / g^2). Throws RoundOverflowError unless T g^2 > 1.
std::int64_t sample_quota(double horizon, double gap);

/// sqrt(ln(T g^2) / (2 tau)). Throws RoundOverflowError unless T g^2 > 1
/// and tau >= 1.
double exploration_bonus(double horizon, double gap, std::int64_t tau);

/// floor(log2(sqrt(T / e))): the last round whose formulas are evaluated.
/// Throws DegenerateHorizonError for T < 3.
int max_round(double horizon);

/// Quota and bonus of one round, bundled.
struct Round {
    int omega;
    double gap;
    std::int64_t tau;
    double beta;
};

Round at(double horizon, int omega);

}  // namespace csb::rounds
