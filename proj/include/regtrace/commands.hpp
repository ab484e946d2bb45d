// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Subcommands behind the regtrace CLI. Each writes its outputs under `out`
// and throws on failure; the CLI maps exception types to exit codes.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "regtrace/config.hpp"
#include "regtrace/stats.hpp"
#include "regtrace/trace.hpp"

namespace regtrace {

namespace fs = std::filesystem;

/// Runs body(0..n-1) on up to `workers` threads. The first exception thrown
/// by any call is rethrown after all threads finish.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

struct MeanRegularity {
    std::size_t sample_id = 0;
    double cumulative_loss = 0.0;
    double event_count = 0.0;
};

/// Per-sample mean of the final-epoch records over traces of equal shape.
std::vector<MeanRegularity> mean_regularity(std::span<const AccuracyTrace> traces);

/// Writes out/data.csv and returns its path.
fs::path cmd_gen_data(const ExperimentConfig& config, const fs::path& out);

/// Trains every model `repetitions` times with seeds base_seed + i. Layout:
///   out/<model>/run_NNN/{train.trace,test.trace,run.meta}
///   out/<model>/regularity_{train,test}.csv   (means over repetitions)
/// Outputs of a failed call are removed.
void cmd_run(const ExperimentConfig& config, const fs::path& out);

/// regularity.csv, histograms.csv, density.csv and scatter.svg for the mean
/// regularity of one or more traces of the same shape.
void cmd_analyze(std::span<const fs::path> traces, const ExperimentConfig& config, const fs::path& out);

/// prune_eval.csv: one row per strategy, one column per fraction.
void cmd_prune_eval(const ExperimentConfig& config, const fs::path& out);

/// radius_sweep.csv: one row per radius, one column per fraction.
void cmd_radius_sweep(const ExperimentConfig& config, const fs::path& out);

/// compress_accuracy.csv, compress_fidelity.csv and compress_manifest.csv.
void cmd_compress_test(const ExperimentConfig& config, const fs::path& out);

/// correlation.csv and correlation_summary.csv over the train traces of the
/// given run directories.
RunCorrelationMatrix cmd_compare_runs(std::span<const fs::path> run_dirs, const ExperimentConfig& config,
                                      const fs::path& out);

/// sync.csv for one run directory, both synchronization modes side by side.
void cmd_sync(const fs::path& run_dir, const ExperimentConfig& config, const fs::path& out);

}  // namespace regtrace
