#include <csb/simulator.hpp>

#include <csb/csv.hpp>
#include <csb/error.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace csb {

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        carry_ += (sum_ - t) + x;
    } else {
        carry_ += (x - t) + sum_;
    }
    sum_ = t;
}

void accumulate_regret(RegretTrace& trace, Index arm, const GapProfile& profile) {
    trace.cost.add(profile.delta_c(arm));
    trace.quality.add(profile.delta_q_plus(arm));
    trace.pulls(arm) += 1;
}

std::pair<double, double> decomposed_regret(const Counts& pulls, const GapProfile& profile) {
    const Vector n = pulls.cast<double>();
    const Vector q_plus = profile.delta_q.cwiseMax(0.0);
    return {profile.delta_c.dot(n), q_plus.dot(n)};
}

std::vector<std::int64_t> log_checkpoints(std::int64_t horizon, int count) {
    std::vector<std::int64_t> out;
    if (horizon < 1) return out;
    const double top = std::log(static_cast<double>(horizon));
    for (int j = 0; j < count; ++j) {
        const double frac = count > 1 ? static_cast<double>(j) / (count - 1) : 1.0;
        auto t = static_cast<std::int64_t>(std::llround(std::exp(frac * top)));
        t = std::clamp<std::int64_t>(t, 1, horizon);
        if (out.empty() || t > out.back()) out.push_back(t);
    }
    if (out.empty() || out.back() != horizon) out.push_back(horizon);
    return out;
}

namespace {

// 64-bit FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string ell_field(const SubsidySetting& setting) {
    if (const auto* s = std::get_if<KnownReferenceArm>(&setting)) return std::to_string(s->ell + 1);
    return {};
}

std::string alpha_field(const SubsidySetting& setting) {
    if (std::holds_alternative<FixedThreshold>(setting)) return {};
    return csv::format_double(setting_alpha(setting));
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    const std::uint64_t h = fnv1a(tag);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

RunResult run_policy(Policy& policy, const BanditInstance& instance, const GapProfile& profile,
                     std::int64_t horizon, std::uint64_t seed, const std::vector<std::int64_t>& checkpoints,
                     const StepHook& hook) {
    const auto start = std::chrono::steady_clock::now();
    const Index k = instance.num_arms();
    std::vector<std::mt19937_64> env;
    env.reserve(static_cast<std::size_t>(k));
    for (Index a = 0; a < k; ++a) env.push_back(make_stream(seed, "env", static_cast<std::uint64_t>(a)));

    RunResult result;
    result.seed = seed;
    result.policy = policy.id();
    result.instance = instance.name();
    result.setting = profile.setting;
    result.horizon = horizon;
    result.trace = RegretTrace(k);

    auto next_cp = checkpoints.begin();
    Index arm = 0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
        arm = policy.select(t);
        if (arm < 0 || arm >= k) throw ContractViolation("policy selected arm outside the instance");
        const double reward = sample_reward(instance, arm, env[static_cast<std::size_t>(arm)]);
        policy.observe(arm, reward);
        accumulate_regret(result.trace, arm, profile);
        if (!result.commit_t && policy.state().committed_arm) result.commit_t = t;
        if (hook) hook(StepEvent{t, arm, reward, policy});
        while (next_cp != checkpoints.end() && *next_cp <= t) {
            if (*next_cp == t)
                result.trace.checkpoints.push_back({t, result.trace.cost_regret(), result.trace.quality_regret()});
            ++next_cp;
        }
    }
    if (result.trace.checkpoints.empty() || result.trace.checkpoints.back().t != horizon)
        result.trace.checkpoints.push_back({horizon, result.trace.cost_regret(), result.trace.quality_regret()});
    result.terminal_arm = policy.state().committed_arm.value_or(arm);
    result.wall_time = std::chrono::steady_clock::now() - start;
    return result;
}

RunResult run_single(const RunSpec& spec, const BanditInstance& instance, std::uint64_t seed,
                     const StepHook& hook) {
    const auto profile = gap_profile(instance, spec.setting);
    if (spec.horizon < instance.num_arms())
        throw ConfigError("horizon " + std::to_string(spec.horizon) + " is shorter than the arm count " +
                          std::to_string(instance.num_arms()));
    PolicyOptions options = spec.options;
    options.horizon = spec.horizon;
    auto policy = make_policy(spec.policy, instance, spec.setting, options,
                              make_stream(seed, to_string(spec.policy)));
    const auto checkpoints = spec.checkpoints.empty() ? log_checkpoints(spec.horizon) : spec.checkpoints;
    return run_policy(*policy, instance, profile, spec.horizon, seed, checkpoints, hook);
}

std::vector<RunResult> run_batch(const BatchSpec& spec, const BanditInstance& instance) {
    if (spec.runs < 1) throw ConfigError("run count must be >= 1");
    // Fail fast on configuration problems shared by every run.
    (void)gap_profile(instance, spec.run.setting);

    std::vector<std::optional<RunResult>> slots(spec.runs);
    std::vector<std::exception_ptr> errors(spec.runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t id = next++; id < spec.runs; id = next++) {
            try {
                auto r = run_single(spec.run, instance, spec.base_seed + id);
                r.run_id = id;
                slots[id] = std::move(r);
            } catch (...) {
                errors[id] = std::current_exception();
            }
        }
    };
    unsigned jobs = spec.jobs ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, spec.runs));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    std::vector<RunResult> out;
    out.reserve(spec.runs);
    for (std::size_t id = 0; id < spec.runs; ++id) {
        if (errors[id]) {
            try {
                std::rethrow_exception(errors[id]);
            } catch (const std::exception& e) {
                throw RunError(id, e.what());
            }
        }
        out.push_back(std::move(*slots[id]));
    }
    return out;
}

void write_results_csv(std::ostream& out, const std::vector<RunResult>& results) {
    out << csv::kSchemaLine << " results\n";
    out << "policy,instance,setting,alpha,ell,horizon,seed,cost_regret,quality_regret,terminal_arm\n";
    for (const auto& r : results) {
        out << to_string(r.policy) << ',' << r.instance << ',' << setting_name(r.setting) << ','
            << alpha_field(r.setting) << ',' << ell_field(r.setting) << ',' << r.horizon << ',' << r.seed << ','
            << csv::format_double(r.trace.cost_regret()) << ',' << csv::format_double(r.trace.quality_regret())
            << ',' << r.terminal_arm + 1 << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<RunResult>& results) {
    out << csv::kSchemaLine << " trace\n";
    out << "policy,seed,t,cost_regret,quality_regret\n";
    for (const auto& r : results) {
        for (const auto& cp : r.trace.checkpoints) {
            out << to_string(r.policy) << ',' << r.seed << ',' << cp.t << ',' << csv::format_double(cp.cost_regret)
                << ',' << csv::format_double(cp.quality_regret) << '\n';
        }
    }
}

}  // namespace csb
