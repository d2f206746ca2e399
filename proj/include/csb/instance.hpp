#pragma once

#include <csb/types.hpp>

#include <algorithm>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace csb {

enum class RewardKind { Bernoulli, Gaussian };

struct RewardModel {
    RewardKind kind = RewardKind::Bernoulli;
    double sigma = 0.0;  // Gaussian only

    static RewardModel bernoulli() { return {}; }
    static RewardModel gaussian(double sigma) { return {RewardKind::Gaussian, sigma}; }
};

/// A stochastic multi-armed bandit with known per-arm sampling costs.
///
/// Arms are kept in non-decreasing cost order; every arm index in the
/// library (0-based) refers to this order. `source_index` remembers where
/// each arm sat in the input it was built from.
class BanditInstance {
public:
    BanditInstance() = default;

    /// Validates and stores arms that are already cost-sorted.
    /// Throws ValidationError on empty input, unsorted costs, negative
    /// costs or Bernoulli means outside [0,1].
    BanditInstance(Vector means, Vector costs, RewardModel reward, std::string name = {},
                   std::vector<std::string> labels = {}, std::vector<Index> source_index = {});

    Index num_arms() const { return means_.size(); }
    const Vector& means() const { return means_; }
    const Vector& costs() const { return costs_; }
    double mean(Index arm) const { return means_(arm); }
    double cost(Index arm) const { return costs_(arm); }
    const RewardModel& reward() const { return reward_; }
    const std::string& name() const { return name_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Index>& source_index() const { return source_index_; }

    void set_name(std::string name) { name_ = std::move(name); }

    friend bool operator==(const BanditInstance& a, const BanditInstance& b);

private:
    Vector means_;
    Vector costs_;
    RewardModel reward_;
    std::string name_;
    std::vector<std::string> labels_;
    std::vector<Index> source_index_;
};

/// Stable-sorts arms by cost and builds the instance.
BanditInstance make_instance(const Vector& means, const Vector& costs, RewardModel reward,
                             std::string name = {}, std::vector<std::string> labels = {});

struct FixedThreshold {
    double mu0;
};
struct KnownReferenceArm {
    Index ell;  // 0-based, cost order
    double alpha;
};
struct SubsidizedBestReward {
    double alpha;
};

using SubsidySetting = std::variant<FixedThreshold, KnownReferenceArm, SubsidizedBestReward>;

/// "fixed", "known-ell" or "subsidized".
std::string setting_name(const SubsidySetting& setting);
double setting_alpha(const SubsidySetting& setting);  // 0 for FixedThreshold

/// Throws ArmIndexError / ValidationError when the setting does not fit the instance.
void validate_setting(const BanditInstance& instance, const SubsidySetting& setting);

/// The reward level an arm must reach to be acceptable.
double feasibility_threshold(const BanditInstance& instance, const SubsidySetting& setting);

struct GapProfile {
    SubsidySetting setting;
    Vector means;
    Vector costs;
    double mu_cs = 0.0;
    double mu_star = 0.0;
    Index a_star = 0;  // cheapest feasible arm
    Index i_star = 0;  // best-reward arm
    Vector delta_c;    // max(0, c_i - c_{a*})
    Vector delta_q;    // mu_cs - mu_i, signed
    Vector delta_conv; // mu* - mu_i
    double delta_min = 0.0;
    bool unique_best = true;

    Index num_arms() const { return means.size(); }
    double delta_q_plus(Index i) const { return std::max(0.0, delta_q(i)); }
};

/// Throws InfeasibleInstanceError when no arm reaches the threshold.
GapProfile gap_profile(const BanditInstance& instance, const SubsidySetting& setting);

/// One reward draw. Bernoulli arms yield 0 or 1; Gaussian arms yield
/// mean + sigma * N(0,1).
double sample_reward(const BanditInstance& instance, Index arm, std::mt19937_64& rng);

// File formats -------------------------------------------------------------

/// Instance CSV: header `label,mean,cost`, one arm per row, any order.
BanditInstance load_instance(const std::filesystem::path& path,
                             RewardModel reward = RewardModel::bernoulli());
BanditInstance parse_instance(std::istream& in, const std::string& source,
                              RewardModel reward = RewardModel::bernoulli());
void write_instance(const BanditInstance& instance, std::ostream& out);
void write_instance(const BanditInstance& instance, const std::filesystem::path& path);

struct GenreRating {
    std::string genre;
    double mean_rating;  // 5-point scale
};

/// Dataset summary CSV: header `genre,mean_rating`.
std::vector<GenreRating> load_dataset_summary(const std::filesystem::path& path);
std::vector<GenreRating> parse_dataset_summary(std::istream& in, const std::string& source);

/// Means are rating / 5; costs are i.i.d. Uniform(0,1) from a generator
/// seeded with `cost_seed`.
BanditInstance build_dataset_instance(const std::vector<GenreRating>& summary,
                                      std::uint64_t cost_seed, std::string name = "dataset");

/// Four-arm family with means (mu1, 0.81, 0.95, 0.8) and costs
/// (0.05, 0.9, 0.9, 1.0), one instance per grid value.
std::vector<BanditInstance> toy_family(const std::vector<double>& mu1_grid);
BanditInstance toy_instance(double mu1);

/// The four-arm instance with means (0.74, 0.5, 0.8, 0.75) and costs
/// (0.15, 0.2, 0.21, 0.25) used to compare symmetric and asymmetric
/// pairwise elimination.
BanditInstance four_arm_reference_instance();

}  // namespace csb
