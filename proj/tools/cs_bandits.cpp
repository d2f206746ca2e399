#include <csb/bounds.hpp>
#include <csb/experiment.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace {

// Flags that mirror config keys. Each is applied on top of --config.
struct Overrides {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void add(CLI::App& app, const std::string& key, const std::string& flag, const std::string& help) {
        options[key] = app.add_option(flag, values[key], help);
    }

    csb::ExperimentConfig build(const std::string& config_path) const {
        csb::ExperimentConfig c = config_path.empty() ? csb::ExperimentConfig{} : csb::load_config(config_path);
        if (options.at("preset")->count()) c.apply("preset", values.at("preset"));
        for (const auto& [key, opt] : options) {
            if (key != "preset" && opt->count()) c.apply(key, values.at(key));
        }
        return c;
    }
};

void add_experiment_flags(CLI::App& app, Overrides& o, std::string& config_path) {
    app.add_option("--config", config_path, "flat key = value config file");
    o.add(app, "preset", "--preset", "desk (T=200000, N=25) or full (T=5000000, N=25)");
    o.add(app, "instance", "--instance", "instance CSV, toy:<mu1>, four-arm-reference or dataset:<summary.csv>");
    o.add(app, "reward", "--reward", "bernoulli or gaussian");
    o.add(app, "sigma", "--sigma", "Gaussian reward noise");
    o.add(app, "cost_seed", "--cost-seed", "seed for dataset arm costs");
    o.add(app, "setting", "--setting", "fixed, known-ell or subsidized");
    o.add(app, "mu0", "--mu0", "fixed threshold");
    o.add(app, "ell", "--ell", "reference arm, 1-based in cost order");
    o.add(app, "alpha", "--alpha", "subsidy factor");
    o.add(app, "kappa", "--kappa", "asym-pe max round deviation");
    o.add(app, "policies", "--policies", "comma-separated policy ids");
    o.add(app, "horizon", "--horizon", "steps per run");
    o.add(app, "runs", "--runs", "independent runs per policy");
    o.add(app, "seed", "--seed", "base seed; run i uses seed + i");
    o.add(app, "checkpoints", "--checkpoints", "log-spaced checkpoint count, or a comma-separated list of steps");
    o.add(app, "out", "--out", "output directory (default $CS_BANDITS_OUT)");
    o.add(app, "jobs", "--jobs", "worker threads (0: all cores)");
}

int fail(const std::string& kind, const std::string& what) {
    std::cerr << "cs_bandits: " << kind << ": " << what << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-armed bandits with cost subsidy: simulations and bounds"};
    app.require_subcommand(1);

    std::string run_config, sweep_config, bounds_config;
    Overrides run_flags, sweep_flags, bounds_flags;

    auto* run = app.add_subcommand("run", "run policies on one instance and write results.csv and trace.csv");
    add_experiment_flags(*run, run_flags, run_config);

    auto* sweep = app.add_subcommand("sweep", "repeat run over a grid of alpha, ell or mu1");
    add_experiment_flags(*sweep, sweep_flags, sweep_config);
    sweep_flags.add(*sweep, "axis", "--axis", "alpha, ell or mu1");
    sweep_flags.add(*sweep, "values", "--values", "comma-separated grid (ell defaults to every arm)");

    auto* bounds = app.add_subcommand("bounds", "print lower and upper bound evaluations as JSON");
    add_experiment_flags(*bounds, bounds_flags, bounds_config);

    auto* gen = app.add_subcommand("gen-instance", "build an instance CSV from a dataset summary");
    std::string summary_path, gen_out, gen_name;
    std::uint64_t gen_seed = 0;
    gen->add_option("--summary", summary_path, "CSV with header genre,mean_rating")->required();
    gen->add_option("--cost-seed", gen_seed, "seed for the Uniform(0,1) arm costs");
    gen->add_option("--out", gen_out, "instance CSV to write (default stdout)");
    gen->add_option("--name", gen_name, "instance name");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto config = run_flags.build(run_config);
            const auto dir = csb::output_dir(config);
            const auto results = csb::run_and_write(config, dir);
            std::cout << "wrote " << results.size() << " runs to " << dir.string() << '\n';
        } else if (*sweep) {
            const auto config = sweep_flags.build(sweep_config);
            const auto dir = csb::output_dir(config);
            const auto rows = csb::run_sweep(config, dir);
            std::cout << "wrote " << rows.size() << " terminal rows to " << (dir / "terminal.csv").string() << '\n';
        } else if (*bounds) {
            const auto config = bounds_flags.build(bounds_config);
            const auto instance = csb::resolve_instance(config);
            const auto setting = csb::resolve_setting(config, instance);
            const auto report = csb::bounds::report_json(csb::gap_profile(instance, setting),
                                                         static_cast<double>(config.horizon));
            if (bounds_flags.options.at("out")->count()) {
                std::filesystem::create_directories(config.out);
                std::ofstream f(config.out / "bounds.json");
                if (!f) return fail("io error", "cannot write " + (config.out / "bounds.json").string());
                f << report << '\n';
            } else {
                std::cout << report << '\n';
            }
        } else if (*gen) {
            const auto summary = csb::load_dataset_summary(summary_path);
            const auto name = gen_name.empty() ? std::filesystem::path(summary_path).stem().string() : gen_name;
            const auto instance = csb::build_dataset_instance(summary, gen_seed, name);
            if (gen_out.empty()) csb::write_instance(instance, std::cout);
            else csb::write_instance(instance, std::filesystem::path(gen_out));
        }
    } catch (const csb::ParseError& e) {
        return fail("unreadable input", e.what());
    } catch (const csb::InfeasibleInstanceError& e) {
        return fail("infeasible instance", e.what());
    } catch (const csb::ConfigError& e) {
        return fail("configuration error", e.what());
    } catch (const csb::SweepError& e) {
        return fail("sweep failed", e.what());
    } catch (const csb::RunError& e) {
        return fail("run failed", e.what());
    } catch (const csb::Error& e) {
        return fail("error", e.what());
    } catch (const std::exception& e) {
        return fail("unexpected error", e.what());
    }
    return 0;
}
