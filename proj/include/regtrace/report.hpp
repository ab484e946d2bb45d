// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "regtrace/density.hpp"

namespace regtrace {

/// Shortest round-trippable form with at least 6 significant digits.
std::string format_number(double value);

/// Header-first CSV file. Throws std::runtime_error when the file cannot be
/// written.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

struct ScatterStyle {
    std::string title;
    std::string x_label = "cumulative loss";
    std::string y_label = "events";
    int width = 640;
    int height = 480;
};

/// One circle per point, colored by `values` (same order as `points`) on a
/// dark-to-bright ramp, with both axes starting at 0.
void write_scatter_svg(const std::filesystem::path& path, std::span<const RepresentationPoint> points,
                       std::span<const double> values, const ScatterStyle& style = {});

/// Sidecar written next to each run's trace files.
struct RunMetadata {
    std::string model;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    std::size_t epochs = 0;
    double final_train_acc = 0.0;
    double final_test_acc = 0.0;
    std::vector<std::size_t> train_ids;
    std::vector<std::size_t> test_ids;
    std::vector<double> epoch_loss;

    friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

// Layout: a `RUN v1` line followed by one JSON object.
void write_run_metadata(const RunMetadata& meta, const std::filesystem::path& path);
RunMetadata read_run_metadata(const std::filesystem::path& path);

}  // namespace regtrace
