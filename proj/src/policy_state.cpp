#include <csb/policies.hpp>

#include <csb/error.hpp>

#include <algorithm>
#include <array>
#include <utility>

namespace csb {

namespace {

constexpr std::array<std::pair<PolicyId, std::string_view>, 8> kPolicyNames{{
    {PolicyId::PE, "pe"},
    {PolicyId::AsymPE, "asym-pe"},
    {PolicyId::PECS, "pe-cs"},
    {PolicyId::FTUCB, "ft-ucb"},
    {PolicyId::ETCCS, "etc-cs"},
    {PolicyId::TSCS, "ts-cs"},
    {PolicyId::UCBCS, "ucb-cs"},
    {PolicyId::UCBCSKnownEll, "ucb-cs-known-ell"},
}};

}  // namespace

std::string_view to_string(PolicyId id) {
    for (const auto& [key, name] : kPolicyNames) {
        if (key == id) return name;
    }
    return "unknown";
}

PolicyId parse_policy_id(std::string_view text) {
    for (const auto& [key, name] : kPolicyNames) {
        if (name == text) return key;
    }
    throw ConfigError("unknown policy id '" + std::string(text) + "'");
}

const std::vector<PolicyId>& all_policy_ids() {
    static const std::vector<PolicyId> ids = [] {
        std::vector<PolicyId> v;
        for (const auto& entry : kPolicyNames) v.push_back(entry.first);
        return v;
    }();
    return ids;
}

PolicyState::PolicyState(Index num_arms)
    : n(Counts::Zero(num_arms)),
      mu_hat(Vector::Zero(num_arms)),
      omega(Rounds::Zero(num_arms)),
      successes(Counts::Zero(num_arms)),
      failures(Counts::Zero(num_arms)) {}

void PolicyState::record(Index arm, double reward) {
    const auto count = static_cast<double>(n(arm));
    mu_hat(arm) = (mu_hat(arm) * count + reward) / (count + 1.0);
    n(arm) += 1;
    t += 1;
}

RoundSchedule::RoundSchedule(std::int64_t horizon) : horizon_(horizon) {
    const int cap = rounds::max_round(static_cast<double>(horizon));
    rounds_.reserve(static_cast<std::size_t>(cap) + 1);
    for (int w = 0; w <= cap; ++w) rounds_.push_back(rounds::at(static_cast<double>(horizon), w));
}

const rounds::Round& RoundSchedule::operator[](int omega) const {
    return rounds_[static_cast<std::size_t>(std::clamp(omega, 0, max_round()))];
}

double sample_beta(double a, double b, std::mt19937_64& rng) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
}

}  // namespace csb
