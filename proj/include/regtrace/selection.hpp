// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Training-set pruning by regularity measures and test-set compression by
// angular difficulty bins in the (cumulative loss, event count) plane.

#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "regtrace/dataset.hpp"
#include "regtrace/density.hpp"
#include "regtrace/trace.hpp"
#include "regtrace/trainer.hpp"

namespace regtrace {

enum class PruneKind {
    density_desc,    // highest neighbourhood density removed first
    cbtl_desc,       // highest cumulative loss (easiest) removed first
    forgetting_asc,  // fewest events removed first
    random,          // uniform without replacement
};

std::string_view to_string(PruneKind kind);
PruneKind parse_prune_kind(std::string_view text);

struct PruneStrategy {
    PruneKind kind = PruneKind::density_desc;
    double radius = 1.0;     // density_desc only
    std::uint64_t seed = 0;  // random only
    bool reverse = false;    // flips the removal order of the ranked kinds
};

/// Removes round(fraction * N) samples and returns the retained sample ids
/// in ascending order. Ties are broken by removing the lower sample id
/// first. `density` must be non-null exactly when kind is density_desc and
/// is indexed like `records`.
std::vector<std::size_t> prune(std::span<const RegularityRecord> records, const DensityMap* density,
                               const PruneStrategy& strategy, double fraction);

/// Prunes the proxy run's training set, retrains from scratch on what is
/// left (test split untouched) and returns the final test accuracy.
double pruned_test_accuracy(const LabeledDataset& data, const RunBundle& proxy, const PruneStrategy& strategy,
                            double fraction, const ModelSpec& spec, const TrainConfig& config);

struct SweepTable {
    std::vector<double> radii;
    std::vector<double> fractions;
    std::vector<double> accuracy;  // row-major radii x fractions

    double at(std::size_t r, std::size_t f) const { return accuracy[r * fractions.size() + f]; }
};

SweepTable radius_sweep(const LabeledDataset& data, const RunBundle& proxy, std::span<const double> radii,
                        std::span<const double> fractions, const ModelSpec& spec, const TrainConfig& eval_config);

/// Bin 0 holds points on the left half-axis (event count 0, left of the
/// center), bins 1..180/sector_deg hold the sectors (0, s], (s, 2s], ...
/// measured clockwise from the left half-axis, and the last bin holds the
/// right half-axis including the center itself.
struct AngularBinning {
    double center_x = 0.0;
    double sector_deg = 18.0;
    std::size_t bin_count = 0;
    std::vector<std::size_t> bins;        // per point
    std::vector<std::size_t> sample_ids;  // per point

    std::vector<std::size_t> bin_sizes() const;
};

AngularBinning angular_bins(std::span<const RepresentationPoint> points, double sector_deg);

/// Takes every member of the bins in `take_all` and min(n_per_bin, size)
/// members of every other bin. Returns sample ids in ascending order.
std::vector<std::size_t> stratified_sample(const AngularBinning& binning, std::size_t n_per_bin,
                                           const std::set<std::size_t>& take_all, std::uint64_t seed);

struct Fidelity {
    double spearman = 0.0;
    double map_at_k = 0.0;
};

/// Mean over i = 1..K of |top_i(compressed) ∩ top_i(full)| / i, higher
/// scores ranking first and ties going to the lower index.
double map_at_k(std::span<const double> full_scores, std::span<const double> compressed_scores);

/// Agreement between algorithm rankings on the full and compressed test sets.
/// A compressed set on which every algorithm scores the same carries no
/// ranking information and gets spearman 0.
Fidelity compression_fidelity(std::span<const double> full_scores, std::span<const double> compressed_scores);

}  // namespace regtrace
