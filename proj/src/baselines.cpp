#include <csb/policies.hpp>

#include <csb/error.hpp>

#include <cmath>

namespace csb {

namespace {

// Lowest index whose score clears the threshold; cost order makes that the
// cheapest such arm. Unbounded rewards can leave the reference arm itself
// below its own scaled score, in which case it is the fallback.
Index cheapest_at_least(const Vector& score, double threshold, Index fallback) {
    for (Index i = 0; i < score.size(); ++i) {
        if (score(i) >= threshold) return i;
    }
    return fallback;
}

}  // namespace

FixedThresholdUcb::FixedThresholdUcb(Index num_arms, double mu0, std::mt19937_64 rng)
    : Policy(num_arms, std::move(rng)), mu0_(mu0) {}

Index FixedThresholdUcb::select(std::int64_t t) {
    const Index k = state_.num_arms();
    if (t <= k) return static_cast<Index>(t - 1);
    const double log_t = std::log(static_cast<double>(t));
    for (Index i = 0; i < k; ++i) {
        const double ucb = state_.mu_hat(i) + std::sqrt(2.0 * log_t / static_cast<double>(state_.n(i)));
        if (ucb >= mu0_) return i;
    }
    std::uniform_int_distribution<Index> uniform(0, k - 1);
    return uniform(rng_);
}

ExploreThenCommitCs::ExploreThenCommitCs(Index num_arms, std::int64_t horizon, double alpha,
                                         std::mt19937_64 rng)
    : Policy(num_arms, std::move(rng)),
      horizon_(horizon),
      alpha_(alpha),
      log_horizon_(std::log(static_cast<double>(horizon))) {
    state_.explore_budget = exploration_budget(horizon, num_arms);
}

std::int64_t ExploreThenCommitCs::exploration_budget(std::int64_t horizon, Index num_arms) {
    const double raw = 5.0 * std::pow(static_cast<double>(horizon) / static_cast<double>(num_arms), 2.0 / 3.0);
    // pow(125000, 2/3) lands a few ulps off 2500; keep exact cubes exact.
    const double nearest = std::round(raw);
    return static_cast<std::int64_t>(std::abs(raw - nearest) < 1e-9 * raw ? nearest : std::ceil(raw));
}

Index ExploreThenCommitCs::select(std::int64_t t) {
    const Index k = state_.num_arms();
    if (t <= k * state_.explore_budget) return static_cast<Index>((t - 1) % k);

    Vector ucb(k), lcb(k);
    for (Index i = 0; i < k; ++i) {
        const double bonus = std::sqrt(2.0 * log_horizon_ / static_cast<double>(state_.n(i)));
        ucb(i) = std::min(state_.mu_hat(i) + bonus, 1.0);
        lcb(i) = std::max(state_.mu_hat(i) - bonus, 0.0);
    }
    const Index ref = argmax_first(lcb);
    return cheapest_at_least(ucb, (1.0 - alpha_) * lcb(ref), ref);
}

ThompsonSamplingCs::ThompsonSamplingCs(Index num_arms, double alpha, std::mt19937_64 rng)
    : Policy(num_arms, std::move(rng)), alpha_(alpha), theta_(num_arms) {}

Index ThompsonSamplingCs::select(std::int64_t t) {
    const Index k = state_.num_arms();
    if (t <= k) return static_cast<Index>(t - 1);
    for (Index i = 0; i < k; ++i) {
        theta_(i) = sample_beta(static_cast<double>(state_.successes(i) + 1),
                                static_cast<double>(state_.failures(i) + 1), rng_);
    }
    const Index ref = argmax_first(theta_);
    return cheapest_at_least(theta_, (1.0 - alpha_) * theta_(ref), ref);
}

void ThompsonSamplingCs::observe(Index arm, double reward) {
    if (reward != 0.0 && reward != 1.0)
        throw ContractViolation("ts-cs needs rewards in {0,1}, got " + std::to_string(reward));
    state_.record(arm, reward);
    state_.successes(arm) += static_cast<std::int64_t>(reward);
    state_.failures(arm) += static_cast<std::int64_t>(1.0 - reward);
}

UcbCs::UcbCs(Index num_arms, std::int64_t horizon, double alpha, std::optional<Index> known_ell,
             std::mt19937_64 rng)
    : Policy(num_arms, std::move(rng)),
      alpha_(alpha),
      log_horizon_(std::log(static_cast<double>(horizon))),
      known_ell_(known_ell),
      ucb_(num_arms) {
    if (known_ell_ && (*known_ell_ < 0 || *known_ell_ >= num_arms))
        throw ArmIndexError("reference arm out of range");
}

PolicyId UcbCs::id() const { return known_ell_ ? PolicyId::UCBCSKnownEll : PolicyId::UCBCS; }

Index UcbCs::select(std::int64_t t) {
    const Index k = state_.num_arms();
    if (t <= k) return static_cast<Index>(t - 1);
    for (Index i = 0; i < k; ++i) {
        ucb_(i) = std::min(state_.mu_hat(i) + std::sqrt(2.0 * log_horizon_ / static_cast<double>(state_.n(i))), 1.0);
    }
    const Index ref = known_ell_ ? *known_ell_ : argmax_first(ucb_);
    state_.ell = ref;
    return cheapest_at_least(ucb_, (1.0 - alpha_) * ucb_(ref), ref);
}

}  // namespace csb
