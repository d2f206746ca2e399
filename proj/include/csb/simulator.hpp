#pragma once

#include <csb/error.hpp>
#include <csb/instance.hpp>
#include <csb/policies.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace csb {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

struct Checkpoint {
    std::int64_t t;
    double cost_regret;
    double quality_regret;
};

struct RegretTrace {
    std::vector<Checkpoint> checkpoints;
    Counts pulls;
    CompensatedSum cost;
    CompensatedSum quality;

    explicit RegretTrace(Index num_arms = 0) : pulls(Counts::Zero(num_arms)) {}
    double cost_regret() const { return cost.value(); }
    double quality_regret() const { return quality.value(); }
};

/// Adds the clipped cost and quality gaps of one pull.
void accumulate_regret(RegretTrace& trace, Index arm, const GapProfile& profile);

/// Cost and quality regret recomputed from pull counts alone.
std::pair<double, double> decomposed_regret(const Counts& pulls, const GapProfile& profile);

/// `count` log-spaced timesteps in [1, T], deduplicated, always ending at T.
std::vector<std::int64_t> log_checkpoints(std::int64_t horizon, int count = 50);

/// Independent generator per (seed, stream tag, index).
std::mt19937_64 make_stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

struct RunResult {
    std::uint64_t seed = 0;
    std::size_t run_id = 0;
    PolicyId policy = PolicyId::PE;
    std::string instance;
    SubsidySetting setting = FixedThreshold{0.0};
    std::int64_t horizon = 0;
    RegretTrace trace;
    Index terminal_arm = 0;               // committed arm, else the last pulled arm
    std::optional<std::int64_t> commit_t; // step of the first committed pull
    std::chrono::duration<double> wall_time{};
};

struct StepEvent {
    std::int64_t t;
    Index arm;
    double reward;
    const Policy& policy;
};
using StepHook = std::function<void(const StepEvent&)>;

/// Drives any policy for T steps against the instance. Rewards for arm k
/// come from their own stream, so a seed fixes each arm's reward sequence
/// regardless of which arms the policy pulls.
RunResult run_policy(Policy& policy, const BanditInstance& instance, const GapProfile& profile,
                     std::int64_t horizon, std::uint64_t seed, const std::vector<std::int64_t>& checkpoints,
                     const StepHook& hook = {});

struct RunSpec {
    PolicyId policy = PolicyId::PE;
    SubsidySetting setting = FixedThreshold{0.0};
    std::int64_t horizon = 0;
    std::vector<std::int64_t> checkpoints;  // empty: log_checkpoints(horizon)
    PolicyOptions options;
};

/// Builds the policy and runs it. Throws InfeasibleInstanceError when the
/// setting leaves no feasible arm and ConfigError when T < K.
RunResult run_single(const RunSpec& spec, const BanditInstance& instance, std::uint64_t seed,
                     const StepHook& hook = {});

struct BatchSpec {
    RunSpec run;
    std::size_t runs = 1;
    std::uint64_t base_seed = 0;
    unsigned jobs = 0;  // 0: hardware concurrency
};

class RunError : public Error {
public:
    RunError(std::size_t run_id, const std::string& what)
        : Error("run " + std::to_string(run_id) + ": " + what), run_id_(run_id) {}
    std::size_t run_id() const noexcept { return run_id_; }

private:
    std::size_t run_id_;
};

/// Runs `runs` seeds base_seed, base_seed+1, ... concurrently. Results are
/// ordered by run id. The lowest-id failure is rethrown as RunError.
std::vector<RunResult> run_batch(const BatchSpec& spec, const BanditInstance& instance);

// Result files --------------------------------------------------------------

/// `policy,instance,setting,alpha,ell,horizon,seed,cost_regret,quality_regret,terminal_arm`
void write_results_csv(std::ostream& out, const std::vector<RunResult>& results);
/// `policy,seed,t,cost_regret,quality_regret`
void write_trace_csv(std::ostream& out, const std::vector<RunResult>& results);

}  // namespace csb
