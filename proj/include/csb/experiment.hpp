#pragma once

#include <csb/error.hpp>
#include <csb/instance.hpp>
#include <csb/policies.hpp>
#include <csb/simulator.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csb {

/// Everything a `run` or `sweep` needs. Keys of the flat config file and
/// CLI flags share the names used in `apply`.
struct ExperimentConfig {
    // `toy:<mu1>`, `four-arm-reference`, `dataset:<summary.csv>` or an instance CSV path.
    std::string instance;
    std::string reward = "bernoulli";  // bernoulli | gaussian
    double sigma = 1.0;
    std::uint64_t cost_seed = 0;       // dataset instances only

    std::string setting = "subsidized";  // fixed | known-ell | subsidized
    double mu0 = 0.0;
    std::optional<Index> ell;  // 1-based, as written in files and flags
    double alpha = 0.0;
    int kappa = 2;

    std::vector<PolicyId> policies;  // empty: every policy the setting admits
    std::int64_t horizon = 200000;
    std::size_t runs = 25;
    std::uint64_t seed = 0;
    int checkpoint_count = 50;
    std::vector<std::int64_t> checkpoint_list;  // overrides checkpoint_count when non-empty
    std::filesystem::path out;
    unsigned jobs = 0;

    std::string axis;  // sweep only: alpha | ell | mu1
    std::vector<double> values;

    /// Sets one field from its text form. Throws ConfigError on an unknown
    /// key or a malformed value.
    void apply(const std::string& key, const std::string& value);
    /// `desk` (T=200000, N=25) or `full` (T=5000000, N=25).
    void apply_preset(const std::string& name);
};

/// Reads `key = value` lines; `#` starts a comment, strings may be quoted.
/// A `preset` key is applied before the others.
ExperimentConfig parse_config(std::istream& in, const std::string& source);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Config file text that parses back to the same config.
std::string echo_config(const ExperimentConfig& config);

RewardModel reward_model(const ExperimentConfig& config);
BanditInstance resolve_instance(const ExperimentConfig& config);
SubsidySetting resolve_setting(const ExperimentConfig& config, const BanditInstance& instance);
/// The configured policies, or all that support the setting.
std::vector<PolicyId> resolve_policies(const ExperimentConfig& config, const SubsidySetting& setting);

/// `out`, else $CS_BANDITS_OUT, else `./cs_bandits_out`.
std::filesystem::path output_dir(const ExperimentConfig& config);

/// Runs every policy for `runs` seeds. Results are grouped by policy in
/// configured order, then by seed.
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

/// run_experiment plus results.csv, trace.csv and config.toml in `dir`.
std::vector<RunResult> run_and_write(const ExperimentConfig& config, const std::filesystem::path& dir);

struct SweepRow {
    double axis_value;
    PolicyId policy;
    std::uint64_t seed;
    double cost_regret;
    double quality_regret;
};

class SweepError : public Error {
public:
    SweepError(std::string axis, double value, const std::string& what);
    const std::string& axis() const noexcept { return axis_; }
    double value() const noexcept { return value_; }

private:
    std::string axis_;
    double value_;
};

/// Config for one grid point of `config.axis`.
ExperimentConfig sweep_point(const ExperimentConfig& config, double value);

/// The grid; for the `ell` axis an empty value list means every arm.
std::vector<double> sweep_values(const ExperimentConfig& config);

/// Runs each grid point in turn. With `dir` set, writes
/// results_<axis>_<value>.csv per point, terminal.csv and config.toml.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::optional<std::filesystem::path>& dir = std::nullopt);

/// `axis_value,policy,seed,cost_regret,quality_regret,summed_regret`
void write_terminal_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace csb
