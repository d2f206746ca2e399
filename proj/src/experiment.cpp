#include <csb/experiment.hpp>

#include <csb/csv.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace csb {

namespace {

template <typename Int>
Int parse_int(const std::string& key, std::string_view text) {
    text = csv::trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ConfigError(key + ": expected an integer, got '" + std::string(text) + "'");
    return v;
}

double parse_real(const std::string& key, std::string_view text) {
    double v = 0.0;
    if (!csv::parse_double(text, v)) throw ConfigError(key + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

std::vector<std::string> list_items(std::string_view text) {
    std::vector<std::string> out;
    if (csv::trim(text).empty()) return out;
    for (auto& item : csv::split(text)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + csv::format_double(v[i]);
    return s;
}

std::string quoted(const std::string& s) { return '"' + s + '"'; }

std::string unquote(std::string_view v) {
    v = csv::trim(v);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return std::string(v);
}

// Drops a trailing `# ...` comment outside of quotes.
std::string_view strip_comment(std::string_view line) {
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quotes = !in_quotes;
        if (line[i] == '#' && !in_quotes) return line.substr(0, i);
    }
    return line;
}

void open_for_write(std::ofstream& f, const std::filesystem::path& path) {
    f.open(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
}

std::vector<std::int64_t> checkpoints_for(const ExperimentConfig& c) {
    if (!c.checkpoint_list.empty()) return c.checkpoint_list;
    return log_checkpoints(c.horizon, c.checkpoint_count);
}

}  // namespace

void ExperimentConfig::apply(const std::string& key, const std::string& raw) {
    const std::string value = unquote(raw);
    if (key == "instance") {
        instance = value;
    } else if (key == "reward") {
        if (value != "bernoulli" && value != "gaussian")
            throw ConfigError("reward: expected bernoulli or gaussian, got '" + value + "'");
        reward = value;
    } else if (key == "sigma") {
        sigma = parse_real(key, value);
        if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    } else if (key == "cost_seed") {
        cost_seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "setting") {
        if (value != "fixed" && value != "known-ell" && value != "subsidized")
            throw ConfigError("setting: expected fixed, known-ell or subsidized, got '" + value + "'");
        setting = value;
    } else if (key == "mu0") {
        mu0 = parse_real(key, value);
    } else if (key == "ell") {
        if (value.empty()) {
            ell.reset();
        } else {
            ell = parse_int<Index>(key, value);
            if (*ell < 1) throw ConfigError("ell is 1-based and must be >= 1");
        }
    } else if (key == "alpha") {
        alpha = parse_real(key, value);
    } else if (key == "kappa") {
        kappa = parse_int<int>(key, value);
        if (kappa < 0) throw ConfigError("kappa must be >= 0");
    } else if (key == "policies") {
        policies.clear();
        for (const auto& id : list_items(value)) policies.push_back(parse_policy_id(id));
    } else if (key == "horizon") {
        // Accepts 200000 as well as 5e6.
        const double h = parse_real(key, value);
        if (!(h >= 1.0) || h != std::floor(h) || h > 1e15) throw ConfigError("horizon must be a positive integer");
        horizon = static_cast<std::int64_t>(h);
    } else if (key == "runs") {
        runs = parse_int<std::size_t>(key, value);
        if (runs < 1) throw ConfigError("runs must be >= 1");
    } else if (key == "seed") {
        seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "checkpoints") {
        const auto items = list_items(value);
        checkpoint_list.clear();
        if (items.size() == 1 && value.find(',') == std::string::npos) {
            checkpoint_count = parse_int<int>(key, items.front());
            if (checkpoint_count < 1) throw ConfigError("checkpoints must be >= 1");
        } else {
            for (const auto& item : items) checkpoint_list.push_back(parse_int<std::int64_t>(key, item));
        }
    } else if (key == "out") {
        out = value;
    } else if (key == "jobs") {
        jobs = parse_int<unsigned>(key, value);
    } else if (key == "axis") {
        if (!value.empty() && value != "alpha" && value != "ell" && value != "mu1")
            throw ConfigError("axis: expected alpha, ell or mu1, got '" + value + "'");
        axis = value;
    } else if (key == "values") {
        values.clear();
        for (const auto& item : list_items(value)) values.push_back(parse_real(key, item));
    } else if (key == "preset") {
        apply_preset(value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void ExperimentConfig::apply_preset(const std::string& name) {
    if (name == "desk") {
        horizon = 200000;
        runs = 25;
    } else if (name == "full") {
        horizon = 5000000;
        runs = 25;
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = csv::trim(strip_comment(line));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, lineno, "expected key = value");
        const std::string key(csv::trim(body.substr(0, eq)));
        if (key.empty()) throw ParseError(source, lineno, "empty key");
        entries.emplace_back(key, std::string(body.substr(eq + 1)));
    }
    ExperimentConfig c;
    for (const auto& [k, v] : entries) {
        if (k == "preset") c.apply(k, v);
    }
    for (const auto& [k, v] : entries) {
        if (k != "preset") c.apply(k, v);
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path.string(), 0, "cannot read config file");
    return parse_config(f, path.string());
}

std::string echo_config(const ExperimentConfig& c) {
    std::ostringstream o;
    o << csv::kSchemaLine << " config\n";
    o << "instance = " << quoted(c.instance) << '\n';
    o << "reward = " << quoted(c.reward) << '\n';
    o << "sigma = " << csv::format_double(c.sigma) << '\n';
    o << "cost_seed = " << c.cost_seed << '\n';
    o << "setting = " << quoted(c.setting) << '\n';
    o << "mu0 = " << csv::format_double(c.mu0) << '\n';
    o << "ell = " << quoted(c.ell ? std::to_string(*c.ell) : "") << '\n';
    o << "alpha = " << csv::format_double(c.alpha) << '\n';
    o << "kappa = " << c.kappa << '\n';
    std::string ids;
    for (std::size_t i = 0; i < c.policies.size(); ++i) ids += (i ? "," : "") + std::string(to_string(c.policies[i]));
    o << "policies = " << quoted(ids) << '\n';
    o << "horizon = " << c.horizon << '\n';
    o << "runs = " << c.runs << '\n';
    o << "seed = " << c.seed << '\n';
    if (c.checkpoint_list.empty()) {
        o << "checkpoints = " << c.checkpoint_count << '\n';
    } else {
        std::string cps;
        for (std::size_t i = 0; i < c.checkpoint_list.size(); ++i)
            cps += (i ? "," : "") + std::to_string(c.checkpoint_list[i]);
        o << "checkpoints = " << quoted(cps) << '\n';
    }
    o << "out = " << quoted(c.out.string()) << '\n';
    o << "jobs = " << c.jobs << '\n';
    o << "axis = " << quoted(c.axis) << '\n';
    o << "values = " << quoted(join_doubles(c.values)) << '\n';
    return o.str();
}

RewardModel reward_model(const ExperimentConfig& c) {
    return c.reward == "gaussian" ? RewardModel::gaussian(c.sigma) : RewardModel::bernoulli();
}

BanditInstance resolve_instance(const ExperimentConfig& c) {
    const auto& src = c.instance;
    if (src.empty()) throw ConfigError("no instance given");
    const auto reward = reward_model(c);
    if (src.rfind("toy:", 0) == 0) {
        const double mu1 = parse_real("instance", src.substr(4));
        auto inst = toy_instance(mu1);
        return BanditInstance(inst.means(), inst.costs(), reward, inst.name(), inst.labels(), inst.source_index());
    }
    if (src == "four-arm-reference") {
        auto inst = four_arm_reference_instance();
        return BanditInstance(inst.means(), inst.costs(), reward, inst.name(), inst.labels(), inst.source_index());
    }
    if (src.rfind("dataset:", 0) == 0) {
        const std::filesystem::path path = src.substr(8);
        auto inst = build_dataset_instance(load_dataset_summary(path), c.cost_seed, path.stem().string());
        return BanditInstance(inst.means(), inst.costs(), reward, inst.name(), inst.labels(), inst.source_index());
    }
    return load_instance(src, reward);
}

SubsidySetting resolve_setting(const ExperimentConfig& c, const BanditInstance& instance) {
    SubsidySetting s;
    if (c.setting == "fixed") {
        s = FixedThreshold{c.mu0};
    } else if (c.setting == "known-ell") {
        if (!c.ell) throw ConfigError("setting known-ell needs ell");
        s = KnownReferenceArm{*c.ell - 1, c.alpha};
    } else {
        s = SubsidizedBestReward{c.alpha};
    }
    validate_setting(instance, s);
    return s;
}

std::vector<PolicyId> resolve_policies(const ExperimentConfig& c, const SubsidySetting& setting) {
    if (c.policies.empty()) {
        std::vector<PolicyId> ids;
        for (auto id : all_policy_ids()) {
            if (policy_supports(id, setting)) ids.push_back(id);
        }
        return ids;
    }
    for (auto id : c.policies) {
        if (!policy_supports(id, setting))
            throw ConfigError("policy " + std::string(to_string(id)) + " does not run under setting " +
                              setting_name(setting));
    }
    return c.policies;
}

std::filesystem::path output_dir(const ExperimentConfig& c) {
    if (!c.out.empty()) return c.out;
    if (const char* env = std::getenv("CS_BANDITS_OUT"); env && *env) return env;
    return "cs_bandits_out";
}

std::vector<RunResult> run_experiment(const ExperimentConfig& c) {
    if (c.runs < 1) throw ConfigError("runs must be >= 1");
    if (c.horizon < 1) throw ConfigError("horizon must be >= 1");
    const auto instance = resolve_instance(c);
    const auto setting = resolve_setting(c, instance);
    const auto ids = resolve_policies(c, setting);
    (void)gap_profile(instance, setting);

    std::vector<RunResult> all;
    for (auto id : ids) {
        BatchSpec batch;
        batch.run.policy = id;
        batch.run.setting = setting;
        batch.run.horizon = c.horizon;
        batch.run.checkpoints = checkpoints_for(c);
        batch.run.options.horizon = c.horizon;
        batch.run.options.kappa = c.kappa;
        batch.runs = c.runs;
        batch.base_seed = c.seed;
        batch.jobs = c.jobs;
        auto results = run_batch(batch, instance);
        for (auto& r : results) all.push_back(std::move(r));
    }
    return all;
}

std::vector<RunResult> run_and_write(const ExperimentConfig& c, const std::filesystem::path& dir) {
    auto results = run_experiment(c);
    std::filesystem::create_directories(dir);
    std::ofstream f;
    open_for_write(f, dir / "results.csv");
    write_results_csv(f, results);
    f.close();
    open_for_write(f, dir / "trace.csv");
    write_trace_csv(f, results);
    f.close();
    open_for_write(f, dir / "config.toml");
    f << echo_config(c);
    return results;
}

SweepError::SweepError(std::string axis, double value, const std::string& what)
    : Error(axis + "=" + csv::format_double(value) + ": " + what), axis_(std::move(axis)), value_(value) {}

ExperimentConfig sweep_point(const ExperimentConfig& c, double value) {
    ExperimentConfig p = c;
    if (c.axis == "alpha") {
        p.alpha = value;
    } else if (c.axis == "ell") {
        const auto arm = static_cast<Index>(value);
        if (static_cast<double>(arm) != value || arm < 1) throw ConfigError("ell values must be positive integers");
        p.ell = arm;
    } else if (c.axis == "mu1") {
        p.instance = "toy:" + csv::format_double(value);
    } else {
        throw ConfigError("sweep needs an axis: alpha, ell or mu1");
    }
    return p;
}

std::vector<double> sweep_values(const ExperimentConfig& c) {
    if (!c.values.empty()) return c.values;
    if (c.axis == "ell") {
        const auto k = resolve_instance(c).num_arms();
        std::vector<double> v;
        for (Index i = 1; i <= k; ++i) v.push_back(static_cast<double>(i));
        return v;
    }
    throw ConfigError("sweep over " + c.axis + " needs values");
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& c, const std::optional<std::filesystem::path>& dir) {
    const auto grid = sweep_values(c);
    if (dir) std::filesystem::create_directories(*dir);
    std::vector<SweepRow> rows;
    for (double v : grid) {
        std::vector<RunResult> results;
        try {
            results = run_experiment(sweep_point(c, v));
        } catch (const Error& e) {
            throw SweepError(c.axis, v, e.what());
        }
        for (const auto& r : results)
            rows.push_back({v, r.policy, r.seed, r.trace.cost_regret(), r.trace.quality_regret()});
        if (dir) {
            std::ofstream f;
            open_for_write(f, *dir / ("results_" + c.axis + "_" + csv::format_double(v) + ".csv"));
            write_results_csv(f, results);
        }
    }
    if (dir) {
        std::ofstream f;
        open_for_write(f, *dir / "terminal.csv");
        write_terminal_csv(f, rows);
        f.close();
        open_for_write(f, *dir / "config.toml");
        f << echo_config(c);
    }
    return rows;
}

void write_terminal_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << csv::kSchemaLine << " terminal\n";
    out << "axis_value,policy,seed,cost_regret,quality_regret,summed_regret\n";
    for (const auto& r : rows) {
        out << csv::format_double(r.axis_value) << ',' << to_string(r.policy) << ',' << r.seed << ','
            << csv::format_double(r.cost_regret) << ',' << csv::format_double(r.quality_regret) << ','
            << csv::format_double(r.cost_regret + r.quality_regret) << '\n';
    }
}

}  // namespace csb
