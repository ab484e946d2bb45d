// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "regtrace/trace.hpp"

namespace regtrace {

/// Product-moment correlation. Throws UndefinedCorrelation when either
/// input has zero variance and ArgumentError on length mismatch or n < 2.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average-tie ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct Histogram {
    std::size_t bin_width = 1;
    std::vector<std::size_t> lower_edges;  // bin k covers [lower_edges[k], lower_edges[k] + bin_width)
    std::vector<std::size_t> counts;
};

/// Integer bins starting at 0 and covering max(values) (or `cover_up_to`
/// when larger, so two histograms can share edges).
Histogram histogram(std::span<const std::size_t> values, std::size_t bin_width, std::size_t cover_up_to = 0);

struct RunCorrelationMatrix {
    std::size_t n_runs = 0;
    std::vector<double> entries;  // row-major n_runs x n_runs
    double off_diagonal_mean = 0.0;

    double at(std::size_t i, std::size_t j) const { return entries[i * n_runs + j]; }
};

RunCorrelationMatrix run_correlation(const std::vector<std::vector<double>>& density_vectors);

enum class SyncMode {
    identical_sets,  // event-epoch sets are equal
    shared_epoch,    // event-epoch sets intersect
};

/// For each test sample, the number of train samples whose forgetting
/// epochs are synchronized with its mal-generalizing epochs. Test samples
/// without events report 0.
std::vector<std::size_t> synchronization_counts(const AccuracyTrace& test_trace, const AccuracyTrace& train_trace,
                                                SyncMode mode);

/// Pearson correlation between the event-count histograms of two traces,
/// built over the shared range [0, max event count of either trace].
double event_distribution_similarity(const AccuracyTrace& train_trace, const AccuracyTrace& test_trace,
                                     std::size_t bin_width);

}  // namespace regtrace
