// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// regtrace: record per-sample accuracy traces and analyze sample regularity.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regtrace/commands.hpp"
#include "regtrace/config.hpp"
#include "regtrace/errors.hpp"

namespace {

namespace fs = std::filesystem;
using namespace regtrace;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "experiment config file")->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "output directory (default: experiment.out)");
    cmd->add_option("--seed", c.seed, "override experiment.base_seed");
    cmd->add_option("--workers", c.workers, "override experiment.workers");
}

ExperimentConfig resolve(const Common& c, fs::path& out) {
    ExperimentConfig config = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.seed) config.base_seed = *c.seed;
    if (c.workers) config.workers = *c.workers;
    config.validate();
    out = c.out.empty() ? config.out : fs::path(c.out);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Per-sample accuracy traces, regularity maps, pruning and test-set compression"};
    app.require_subcommand(1);

    Common common;
    std::vector<std::string> inputs;

    auto* gen = app.add_subcommand("gen-data", "write the configured dataset to <out>/data.csv");
    auto* run = app.add_subcommand("run", "train repeated seeded runs and record traces");
    auto* analyze = app.add_subcommand("analyze", "regularity, histograms, density and scatter plot of traces");
    auto* prune = app.add_subcommand("prune-eval", "test accuracy after pruning, per strategy and fraction");
    auto* sweep = app.add_subcommand("radius-sweep", "density pruning accuracy per radius and fraction");
    auto* compress = app.add_subcommand("compress-test", "difficulty-balanced test subsets and ranking fidelity");
    auto* compare = app.add_subcommand("compare-runs", "density-map correlation between runs");
    auto* sync = app.add_subcommand("sync", "event synchronization between test and train samples");
    for (auto* cmd : {gen, run, analyze, prune, sweep, compress, compare, sync}) add_common(cmd, common);
    analyze->add_option("traces", inputs, "trace files of one role")->required()->check(CLI::ExistingFile);
    compare->add_option("runs", inputs, "run directories")->required()->expected(2, -1);
    sync->add_option("run", inputs, "run directory")->required()->expected(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        fs::path out;
        const ExperimentConfig config = resolve(common, out);
        const std::vector<fs::path> paths(inputs.begin(), inputs.end());
        if (gen->parsed()) {
            std::cout << cmd_gen_data(config, out).string() << '\n';
        } else if (run->parsed()) {
            cmd_run(config, out);
        } else if (analyze->parsed()) {
            cmd_analyze(paths, config, out);
        } else if (prune->parsed()) {
            cmd_prune_eval(config, out);
        } else if (sweep->parsed()) {
            cmd_radius_sweep(config, out);
        } else if (compress->parsed()) {
            cmd_compress_test(config, out);
        } else if (compare->parsed()) {
            const auto m = cmd_compare_runs(paths, config, out);
            std::cout << "off-diagonal mean " << m.off_diagonal_mean << '\n';
        } else if (sync->parsed()) {
            cmd_sync(paths.front(), config, out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const ArgumentError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const RangeError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const UndefinedCorrelation& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
