#pragma once

#include <csb/instance.hpp>
#include <csb/rounds.hpp>
#include <csb/types.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace csb {

enum class PolicyId { PE, AsymPE, PECS, FTUCB, ETCCS, TSCS, UCBCS, UCBCSKnownEll };

/// `pe`, `asym-pe`, `pe-cs`, `ft-ucb`, `etc-cs`, `ts-cs`, `ucb-cs`, `ucb-cs-known-ell`.
std::string_view to_string(PolicyId id);
/// Throws ConfigError on an unknown identifier.
PolicyId parse_policy_id(std::string_view text);
const std::vector<PolicyId>& all_policy_ids();

enum class Phase { Interleaved, BestArmId, Pairwise, Commit };

/// Mutable bookkeeping shared by every policy. Arm indices are 0-based in
/// cost order; `t` counts completed steps.
struct PolicyState {
    explicit PolicyState(Index num_arms = 0);

    Counts n;
    Vector mu_hat;
    Rounds omega;
    std::optional<Index> episode;  // nullopt once a winner is declared
    Index ell = -1;                // reference arm, -1 until known
    std::vector<Index> active;     // best-arm-identification survivors
    Phase phase = Phase::Interleaved;
    std::optional<Index> committed_arm;
    Counts successes;  // Thompson sampling only
    Counts failures;
    std::int64_t explore_budget = 0;  // ETC-CS pulls per arm
    std::int64_t t = 0;

    Index num_arms() const { return n.size(); }

    /// Running-mean update for one observed reward.
    void record(Index arm, double reward);
};

/// Precomputed quota and bonus for rounds 0..max_round(T).
class RoundSchedule {
public:
    explicit RoundSchedule(std::int64_t horizon);

    std::int64_t horizon() const { return horizon_; }
    int max_round() const { return static_cast<int>(rounds_.size()) - 1; }
    /// Rounds past the cap read the capped round.
    const rounds::Round& operator[](int omega) const;

private:
    std::int64_t horizon_;
    std::vector<rounds::Round> rounds_;
};

struct PEDecision {
    enum class Kind {
        Sample,     // an arm of the pair is below quota
        Winner,     // the candidate beats the reference arm
        Advance,    // the reference arm beats the candidate; `arm` is the next episode
        NextRound,  // no elimination; `arm` is the arm to sample next
    };
    Kind kind;
    Index arm;

    friend bool operator==(const PEDecision&, const PEDecision&) = default;
};

/// One call of the pairwise comparison between candidate `i` and
/// reference `ell`. On NextRound below the cap, omega[i] is incremented;
/// at the cap the pair is sampled alternately (fewer samples first).
PEDecision pe_decide(PolicyState& state, const RoundSchedule& schedule, Index i, Index ell,
                     double alpha);

/// As pe_decide but the reference arm's presumed gap uses round
/// min(omega_i + kappa, omega_ell), so a better-sampled reference arm gets
/// a tighter bonus. kappa = 0 reproduces pe_decide.
PEDecision asymmetric_pe_decide(PolicyState& state, const RoundSchedule& schedule, Index i, Index ell,
                                double alpha, int kappa);

struct BaiStep {
    Index arm;              // arm to sample (the survivor when collapsed)
    bool collapsed = false; // exactly one active arm remains
};

/// One call of round-based best-arm identification over `state.active`.
BaiStep bai_decide(PolicyState& state, const RoundSchedule& schedule, std::mt19937_64& rng);

/// Draw from Beta(a, b) as X / (X + Y) with X ~ Gamma(a, 1), Y ~ Gamma(b, 1).
double sample_beta(double a, double b, std::mt19937_64& rng);

class Policy {
public:
    explicit Policy(Index num_arms, std::mt19937_64 rng) : state_(num_arms), rng_(std::move(rng)) {}
    virtual ~Policy() = default;
    Policy(const Policy&) = delete;
    Policy& operator=(const Policy&) = delete;

    virtual PolicyId id() const = 0;

    /// Arm to pull at step t (1-based, t = state().t + 1).
    virtual Index select(std::int64_t t) = 0;

    /// Feed back the reward of the arm returned by the last select().
    virtual void observe(Index arm, double reward) { state_.record(arm, reward); }

    const PolicyState& state() const { return state_; }

protected:
    PolicyState state_;
    std::mt19937_64 rng_;
};

struct PolicyOptions {
    std::int64_t horizon = 0;
    int kappa = 2;  // asym-pe max round deviation
};

/// Builds a policy for the given setting. Throws ConfigError when the
/// policy cannot run under the setting (e.g. `pe` needs a reference arm,
/// `ft-ucb` a fixed threshold, `ts-cs` Bernoulli rewards).
std::unique_ptr<Policy> make_policy(PolicyId id, const BanditInstance& instance,
                                    const SubsidySetting& setting, const PolicyOptions& options,
                                    std::mt19937_64 rng);

/// Whether `id` accepts the setting variant.
bool policy_supports(PolicyId id, const SubsidySetting& setting);

// Concrete policies, exposed for direct use in tests.

/// PE, asymmetric PE and PE-CS share the episode machinery; PE-CS runs
/// best-arm identification first and takes the survivor as reference arm.
class PairwiseElimination final : public Policy {
public:
    struct Config {
        std::int64_t horizon;
        double alpha;
        std::optional<Index> ell;   // nullopt: identify it (PE-CS)
        std::optional<int> kappa;   // set: asymmetric comparison
    };
    PairwiseElimination(Index num_arms, Config config, std::mt19937_64 rng);

    PolicyId id() const override;
    Index select(std::int64_t t) override;

    const RoundSchedule& schedule() const { return schedule_; }
    /// Decision taken by the last select() that went through the pairwise step.
    const std::optional<PEDecision>& last_decision() const { return last_decision_; }

private:
    Index commit(Index arm);
    Index pairwise_step();

    Config config_;
    RoundSchedule schedule_;
    std::optional<PEDecision> last_decision_;
};

class FixedThresholdUcb final : public Policy {
public:
    FixedThresholdUcb(Index num_arms, double mu0, std::mt19937_64 rng);
    PolicyId id() const override { return PolicyId::FTUCB; }
    Index select(std::int64_t t) override;

private:
    double mu0_;
};

class ExploreThenCommitCs final : public Policy {
public:
    ExploreThenCommitCs(Index num_arms, std::int64_t horizon, double alpha, std::mt19937_64 rng);
    PolicyId id() const override { return PolicyId::ETCCS; }
    Index select(std::int64_t t) override;

    /// ceil(5 (T/K)^(2/3)).
    static std::int64_t exploration_budget(std::int64_t horizon, Index num_arms);

private:
    std::int64_t horizon_;
    double alpha_;
    double log_horizon_;
};

class ThompsonSamplingCs final : public Policy {
public:
    ThompsonSamplingCs(Index num_arms, double alpha, std::mt19937_64 rng);
    PolicyId id() const override { return PolicyId::TSCS; }
    Index select(std::int64_t t) override;
    /// Throws ContractViolation for rewards outside {0, 1}.
    void observe(Index arm, double reward) override;

private:
    double alpha_;
    Vector theta_;
};

class UcbCs final : public Policy {
public:
    UcbCs(Index num_arms, std::int64_t horizon, double alpha, std::optional<Index> known_ell,
          std::mt19937_64 rng);
    PolicyId id() const override;
    Index select(std::int64_t t) override;

private:
    double alpha_;
    double log_horizon_;
    std::optional<Index> known_ell_;
    Vector ucb_;
};

}  // namespace csb
