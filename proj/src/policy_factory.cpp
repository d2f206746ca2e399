#include <csb/policies.hpp>

#include <csb/error.hpp>

#include <string>

namespace csb {

bool policy_supports(PolicyId id, const SubsidySetting& setting) {
    const bool fixed = std::holds_alternative<FixedThreshold>(setting);
    const bool known = std::holds_alternative<KnownReferenceArm>(setting);
    const bool subsidized = std::holds_alternative<SubsidizedBestReward>(setting);
    switch (id) {
        case PolicyId::PE:
        case PolicyId::AsymPE:
        case PolicyId::UCBCSKnownEll:
            return known;
        case PolicyId::PECS:
            return subsidized;
        case PolicyId::FTUCB:
            return fixed;
        case PolicyId::ETCCS:
        case PolicyId::TSCS:
        case PolicyId::UCBCS:
            return known || subsidized;
    }
    return false;
}

std::unique_ptr<Policy> make_policy(PolicyId id, const BanditInstance& instance,
                                    const SubsidySetting& setting, const PolicyOptions& options,
                                    std::mt19937_64 rng) {
    validate_setting(instance, setting);
    if (!policy_supports(id, setting))
        throw ConfigError("policy '" + std::string(to_string(id)) + "' cannot run under the '" +
                          setting_name(setting) + "' setting");
    const Index k = instance.num_arms();
    const double alpha = setting_alpha(setting);
    const auto horizon = options.horizon;
    if (horizon < 1) throw ConfigError("horizon must be >= 1");

    std::optional<Index> ell;
    if (const auto* s = std::get_if<KnownReferenceArm>(&setting)) ell = s->ell;

    switch (id) {
        case PolicyId::PE:
            return std::make_unique<PairwiseElimination>(
                k, PairwiseElimination::Config{horizon, alpha, ell, std::nullopt}, std::move(rng));
        case PolicyId::AsymPE:
            if (options.kappa < 0) throw ConfigError("kappa must be >= 0");
            return std::make_unique<PairwiseElimination>(
                k, PairwiseElimination::Config{horizon, alpha, ell, options.kappa}, std::move(rng));
        case PolicyId::PECS:
            return std::make_unique<PairwiseElimination>(
                k, PairwiseElimination::Config{horizon, alpha, std::nullopt, std::nullopt}, std::move(rng));
        case PolicyId::FTUCB:
            return std::make_unique<FixedThresholdUcb>(k, std::get<FixedThreshold>(setting).mu0, std::move(rng));
        case PolicyId::ETCCS:
            return std::make_unique<ExploreThenCommitCs>(k, horizon, alpha, std::move(rng));
        case PolicyId::TSCS:
            if (instance.reward().kind != RewardKind::Bernoulli)
                throw ConfigError("ts-cs requires Bernoulli rewards");
            return std::make_unique<ThompsonSamplingCs>(k, alpha, std::move(rng));
        case PolicyId::UCBCS:
            return std::make_unique<UcbCs>(k, horizon, alpha, std::nullopt, std::move(rng));
        case PolicyId::UCBCSKnownEll:
            return std::make_unique<UcbCs>(k, horizon, alpha, ell, std::move(rng));
    }
    throw ConfigError("unhandled policy id");
}

}  // namespace csb
