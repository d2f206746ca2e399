#include <csb/instance.hpp>

#include <csb/csv.hpp>
#include <csb/error.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace csb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_header(const std::string& line, const std::vector<std::string>& expected,
                  const std::string& source, std::size_t line_no) {
    const auto fields = csv::split(line);
    if (fields != expected) {
        std::string want;
        for (const auto& f : expected) want += (want.empty() ? "" : ",") + f;
        throw ParseError(source, line_no, "expected header `" + want + "`");
    }
}

}  // namespace

BanditInstance::BanditInstance(Vector means, Vector costs, RewardModel reward, std::string name,
                               std::vector<std::string> labels, std::vector<Index> source_index)
    : means_(std::move(means)),
      costs_(std::move(costs)),
      reward_(reward),
      name_(std::move(name)),
      labels_(std::move(labels)),
      source_index_(std::move(source_index)) {
    const Index k = means_.size();
    if (k == 0) throw ValidationError("instance has no arms");
    if (costs_.size() != k) throw ValidationError("means and costs differ in length");
    if (reward_.kind == RewardKind::Gaussian && !(reward_.sigma >= 0.0))
        throw ValidationError("Gaussian sigma must be >= 0");
    for (Index i = 0; i < k; ++i) {
        if (!std::isfinite(means_(i)) || !std::isfinite(costs_(i)))
            throw ValidationError("arm " + std::to_string(i + 1) + " has a non-finite value");
        if (costs_(i) < 0.0) throw ValidationError("arm " + std::to_string(i + 1) + " has negative cost");
        if (reward_.kind == RewardKind::Bernoulli && (means_(i) < 0.0 || means_(i) > 1.0))
            throw ValidationError("arm " + std::to_string(i + 1) + " Bernoulli mean outside [0,1]");
        if (i > 0 && costs_(i) < costs_(i - 1))
            throw ValidationError("arms are not sorted by non-decreasing cost");
    }
    if (labels_.empty()) {
        for (Index i = 0; i < k; ++i) labels_.push_back("arm" + std::to_string(i + 1));
    }
    if (source_index_.empty()) {
        source_index_.resize(static_cast<std::size_t>(k));
        std::iota(source_index_.begin(), source_index_.end(), Index{0});
    }
    if (static_cast<Index>(labels_.size()) != k || static_cast<Index>(source_index_.size()) != k)
        throw ValidationError("label / source index count differs from arm count");
}

bool operator==(const BanditInstance& a, const BanditInstance& b) {
    return a.means_ == b.means_ && a.costs_ == b.costs_ && a.reward_.kind == b.reward_.kind &&
           a.reward_.sigma == b.reward_.sigma && a.labels_ == b.labels_;
}

BanditInstance make_instance(const Vector& means, const Vector& costs, RewardModel reward,
                             std::string name, std::vector<std::string> labels) {
    if (means.size() != costs.size()) throw ValidationError("means and costs differ in length");
    const auto k = static_cast<std::size_t>(means.size());
    if (labels.empty()) {
        for (std::size_t i = 0; i < k; ++i) labels.push_back("arm" + std::to_string(i + 1));
    }
    if (labels.size() != k) throw ValidationError("label count differs from arm count");

    std::vector<Index> order(k);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return costs(a) < costs(b); });

    Vector m(means.size()), c(costs.size());
    std::vector<std::string> sorted_labels;
    for (std::size_t j = 0; j < k; ++j) {
        m(static_cast<Index>(j)) = means(order[j]);
        c(static_cast<Index>(j)) = costs(order[j]);
        sorted_labels.push_back(labels[static_cast<std::size_t>(order[j])]);
    }
    return BanditInstance(std::move(m), std::move(c), reward, std::move(name),
                          std::move(sorted_labels), std::move(order));
}

std::string setting_name(const SubsidySetting& setting) {
    return std::visit(overloaded{[](const FixedThreshold&) { return std::string("fixed"); },
                                 [](const KnownReferenceArm&) { return std::string("known-ell"); },
                                 [](const SubsidizedBestReward&) { return std::string("subsidized"); }},
                      setting);
}

double setting_alpha(const SubsidySetting& setting) {
    return std::visit(overloaded{[](const FixedThreshold&) { return 0.0; },
                                 [](const KnownReferenceArm& s) { return s.alpha; },
                                 [](const SubsidizedBestReward& s) { return s.alpha; }},
                      setting);
}

void validate_setting(const BanditInstance& instance, const SubsidySetting& setting) {
    auto check_alpha = [](double alpha) {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0,1]");
    };
    std::visit(overloaded{[](const FixedThreshold& s) {
                              if (!std::isfinite(s.mu0)) throw ValidationError("mu0 must be finite");
                          },
                          [&](const KnownReferenceArm& s) {
                              if (s.ell < 0 || s.ell >= instance.num_arms())
                                  throw ArmIndexError("reference arm " + std::to_string(s.ell + 1) +
                                                      " outside 1.." +
                                                      std::to_string(instance.num_arms()));
                              check_alpha(s.alpha);
                          },
                          [&](const SubsidizedBestReward& s) { check_alpha(s.alpha); }},
               setting);
}

double feasibility_threshold(const BanditInstance& instance, const SubsidySetting& setting) {
    validate_setting(instance, setting);
    return std::visit(
        overloaded{[](const FixedThreshold& s) { return s.mu0; },
                   [&](const KnownReferenceArm& s) { return (1.0 - s.alpha) * instance.mean(s.ell); },
                   [&](const SubsidizedBestReward& s) {
                       return (1.0 - s.alpha) * instance.means().maxCoeff();
                   }},
        setting);
}

GapProfile gap_profile(const BanditInstance& instance, const SubsidySetting& setting) {
    GapProfile p;
    p.setting = setting;
    p.means = instance.means();
    p.costs = instance.costs();
    p.mu_cs = feasibility_threshold(instance, setting);

    const Index k = instance.num_arms();
    Index a_star = -1;
    for (Index i = 0; i < k; ++i) {
        if (p.means(i) >= p.mu_cs) {
            // Cost-sorted, so the first feasible arm is a cheapest one.
            a_star = i;
            break;
        }
    }
    if (a_star < 0)
        throw InfeasibleInstanceError("no arm of '" + instance.name() + "' reaches the threshold " +
                                      csv::format_double(p.mu_cs));
    p.a_star = a_star;
    p.i_star = argmax_first(p.means);
    p.mu_star = p.means(p.i_star);

    p.delta_c = (p.costs.array() - p.costs(a_star)).max(0.0).matrix();
    p.delta_q = (p.mu_cs - p.means.array()).matrix();
    p.delta_conv = (p.mu_star - p.means.array()).matrix();

    p.delta_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < k; ++i) {
        if (i != p.i_star) p.delta_min = std::min(p.delta_min, p.delta_conv(i));
    }
    p.unique_best = !(p.delta_min == 0.0);
    return p;
}

double sample_reward(const BanditInstance& instance, Index arm, std::mt19937_64& rng) {
    const double mu = instance.mean(arm);
    if (instance.reward().kind == RewardKind::Bernoulli) {
        std::bernoulli_distribution draw(mu);
        return draw(rng) ? 1.0 : 0.0;
    }
    const double sigma = instance.reward().sigma;
    if (sigma == 0.0) return mu;
    std::normal_distribution<double> draw(mu, sigma);
    return draw(rng);
}

BanditInstance parse_instance(std::istream& in, const std::string& source, RewardModel reward) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<double> means, costs;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::skippable(line)) continue;
        if (!header_seen) {
            header_seen = true;
            const auto first = csv::split(line);
            double probe;
            if (first.size() == 2 && csv::parse_double(first[0], probe)) {
                // Headerless two-column form: mean,cost.
            } else {
                check_header(line, {"label", "mean", "cost"}, source, line_no);
                continue;
            }
        }
        const auto f = csv::split(line);
        double mean = 0.0, cost = 0.0;
        std::string label;
        if (f.size() == 3) {
            label = f[0];
            if (!csv::parse_double(f[1], mean)) throw ParseError(source, line_no, "bad mean `" + f[1] + "`");
            if (!csv::parse_double(f[2], cost)) throw ParseError(source, line_no, "bad cost `" + f[2] + "`");
        } else if (f.size() == 2) {
            if (!csv::parse_double(f[0], mean)) throw ParseError(source, line_no, "bad mean `" + f[0] + "`");
            if (!csv::parse_double(f[1], cost)) throw ParseError(source, line_no, "bad cost `" + f[1] + "`");
        } else {
            throw ParseError(source, line_no, "expected 3 fields, got " + std::to_string(f.size()));
        }
        if (reward.kind == RewardKind::Bernoulli && (mean < 0.0 || mean > 1.0))
            throw ParseError(source, line_no, "Bernoulli mean " + f[f.size() - 2] + " outside [0,1]");
        if (cost < 0.0) throw ParseError(source, line_no, "negative cost");
        if (label.empty()) label = "arm" + std::to_string(means.size() + 1);
        means.push_back(mean);
        costs.push_back(cost);
        labels.push_back(std::move(label));
    }
    if (means.empty()) throw ParseError(source, 0, "no arms");
    const Eigen::Map<const Vector> m(means.data(), static_cast<Index>(means.size()));
    const Eigen::Map<const Vector> c(costs.data(), static_cast<Index>(costs.size()));
    return make_instance(m, c, reward, std::filesystem::path(source).stem().string(), std::move(labels));
}

BanditInstance load_instance(const std::filesystem::path& path, RewardModel reward) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    return parse_instance(in, path.string(), reward);
}

void write_instance(const BanditInstance& instance, std::ostream& out) {
    out << csv::kSchemaLine << " instance\n";
    out << "label,mean,cost\n";
    for (Index i = 0; i < instance.num_arms(); ++i) {
        out << instance.labels()[static_cast<std::size_t>(i)] << ',' << csv::format_double(instance.mean(i))
            << ',' << csv::format_double(instance.cost(i)) << '\n';
    }
}

void write_instance(const BanditInstance& instance, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_instance(instance, out);
}

std::vector<GenreRating> parse_dataset_summary(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<GenreRating> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::skippable(line)) continue;
        if (!header_seen) {
            header_seen = true;
            check_header(line, {"genre", "mean_rating"}, source, line_no);
            continue;
        }
        const auto f = csv::split(line);
        if (f.size() != 2) throw ParseError(source, line_no, "expected 2 fields");
        double rating = 0.0;
        if (!csv::parse_double(f[1], rating)) throw ParseError(source, line_no, "bad rating `" + f[1] + "`");
        out.push_back({f[0], rating});
    }
    if (out.empty()) throw ParseError(source, 0, "no genres");
    return out;
}

std::vector<GenreRating> load_dataset_summary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    return parse_dataset_summary(in, path.string());
}

BanditInstance build_dataset_instance(const std::vector<GenreRating>& summary, std::uint64_t cost_seed,
                                      std::string name) {
    if (summary.empty()) throw ValidationError("empty dataset summary");
    const auto k = static_cast<Index>(summary.size());
    Vector means(k), costs(k);
    std::vector<std::string> labels;
    std::mt19937_64 rng(cost_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Index i = 0; i < k; ++i) {
        const auto& g = summary[static_cast<std::size_t>(i)];
        if (!(g.mean_rating >= 0.0 && g.mean_rating <= 5.0))
            throw ValidationError("rating of '" + g.genre + "' outside [0,5]");
        means(i) = g.mean_rating / 5.0;
        costs(i) = unit(rng);
        labels.push_back(g.genre);
    }
    return make_instance(means, costs, RewardModel::bernoulli(), std::move(name), std::move(labels));
}

BanditInstance toy_instance(double mu1) {
    if (!(mu1 >= 0.0 && mu1 <= 1.0)) throw ValidationError("toy mu1 must lie in [0,1]");
    Vector means(4), costs(4);
    means << mu1, 0.81, 0.95, 0.8;
    costs << 0.05, 0.9, 0.9, 1.0;
    return BanditInstance(means, costs, RewardModel::bernoulli(), "toy_mu1_" + csv::format_double(mu1));
}

std::vector<BanditInstance> toy_family(const std::vector<double>& mu1_grid) {
    std::vector<BanditInstance> out;
    out.reserve(mu1_grid.size());
    for (double mu1 : mu1_grid) out.push_back(toy_instance(mu1));
    return out;
}

BanditInstance four_arm_reference_instance() {
    Vector means(4), costs(4);
    means << 0.74, 0.5, 0.8, 0.75;
    costs << 0.15, 0.2, 0.21, 0.25;
    return BanditInstance(means, costs, RewardModel::bernoulli(), "four_arm_reference");
}

}  // namespace csb
