// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "regtrace/errors.hpp"
#include "regtrace/stats.hpp"

namespace regtrace {

std::string_view to_string(PruneKind kind) {
    switch (kind) {
        case PruneKind::density_desc: return "density";
        case PruneKind::cbtl_desc: return "cbtl";
        case PruneKind::forgetting_asc: return "forgetting";
        case PruneKind::random: return "random";
    }
    return "?";
}

PruneKind parse_prune_kind(std::string_view text) {
    if (text == "density" || text == "density_desc") return PruneKind::density_desc;
    if (text == "cbtl" || text == "cbtl_desc") return PruneKind::cbtl_desc;
    if (text == "forgetting" || text == "forgetting_asc") return PruneKind::forgetting_asc;
    if (text == "random") return PruneKind::random;
    throw ArgumentError("unknown prune strategy '" + std::string(text) + "'");
}

std::vector<std::size_t> prune(std::span<const RegularityRecord> records, const DensityMap* density,
                               const PruneStrategy& strategy, double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0)) throw ArgumentError("prune: fraction must be in [0, 1)");
    const bool wants_density = strategy.kind == PruneKind::density_desc;
    if (wants_density != (density != nullptr))
        throw ArgumentError("prune: a density map is required for density pruning and only for it");
    if (density && density->values.size() != records.size())
        throw ArgumentError("prune: density map and records differ in length");
    if (wants_density && !(strategy.radius > 0.0)) throw ArgumentError("prune: radius must be > 0");

    const std::size_t n = records.size();
    const std::size_t remove = std::min(n, round_half_up(fraction * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    if (strategy.kind == PruneKind::random) {
        std::mt19937_64 rng(strategy.seed);
        std::shuffle(order.begin(), order.end(), rng);
    } else {
        // Larger key = removed earlier.
        auto key = [&](std::size_t k) -> double {
            switch (strategy.kind) {
                case PruneKind::density_desc: return density->values[k];
                case PruneKind::cbtl_desc: return static_cast<double>(records[k].cumulative_loss);
                case PruneKind::forgetting_asc: return -static_cast<double>(records[k].event_count);
                case PruneKind::random: break;
            }
            return 0.0;
        };
        const double sign = strategy.reverse ? -1.0 : 1.0;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ka = sign * key(a), kb = sign * key(b);
            if (ka != kb) return ka > kb;
            return records[a].sample_id < records[b].sample_id;
        });
    }

    std::vector<std::size_t> retained;
    retained.reserve(n - remove);
    for (std::size_t k = remove; k < n; ++k) retained.push_back(records[order[k]].sample_id);
    std::sort(retained.begin(), retained.end());
    return retained;
}

double pruned_test_accuracy(const LabeledDataset& data, const RunBundle& proxy, const PruneStrategy& strategy,
                            double fraction, const ModelSpec& spec, const TrainConfig& config) {
    const auto records = regularity_records(proxy.train_trace);
    std::vector<std::size_t> retained;
    if (strategy.kind == PruneKind::density_desc) {
        const auto points = to_points(records);
        const auto density = density_map(points, strategy.radius);
        retained = prune(records, &density, strategy, fraction);
    } else {
        retained = prune(records, nullptr, strategy, fraction);
    }
    std::vector<std::size_t> dataset_ids;
    dataset_ids.reserve(retained.size());
    for (auto k : retained) dataset_ids.push_back(proxy.train_ids.at(k));
    const auto subset = keep_train_subset(data, dataset_ids);
    return train_and_trace(subset, spec, config).final_test_acc;
}

SweepTable radius_sweep(const LabeledDataset& data, const RunBundle& proxy, std::span<const double> radii,
                        std::span<const double> fractions, const ModelSpec& spec, const TrainConfig& eval_config) {
    for (double r : radii)
        if (!(r > 0.0)) throw ArgumentError("radius_sweep: radii must be > 0");
    SweepTable table;
    table.radii.assign(radii.begin(), radii.end());
    table.fractions.assign(fractions.begin(), fractions.end());
    for (double r : radii) {
        PruneStrategy s;
        s.kind = PruneKind::density_desc;
        s.radius = r;
        for (double f : fractions) table.accuracy.push_back(pruned_test_accuracy(data, proxy, s, f, spec, eval_config));
    }
    return table;
}

std::vector<std::size_t> AngularBinning::bin_sizes() const {
    std::vector<std::size_t> sizes(bin_count, 0);
    for (auto b : bins) sizes[b] += 1;
    return sizes;
}

AngularBinning angular_bins(std::span<const RepresentationPoint> points, double sector_deg) {
    if (points.empty()) throw ArgumentError("angular_bins: no points");
    const double sectors_real = 180.0 / sector_deg;
    const double sectors_rounded = std::round(sectors_real);
    if (!(sector_deg > 0.0) || sectors_rounded < 1.0 || std::abs(sectors_real - sectors_rounded) > 1e-9)
        throw ArgumentError("angular_bins: sector_deg must divide 180");
    const auto sectors = static_cast<std::size_t>(sectors_rounded);

    double lo = points.front().x, hi = points.front().x;
    for (const auto& p : points) {
        if (p.y < 0.0) throw ArgumentError("angular_bins: negative event count");
        lo = std::min(lo, p.x);
        hi = std::max(hi, p.x);
    }

    AngularBinning b;
    b.center_x = (lo + hi) / 2.0;
    b.sector_deg = sector_deg;
    b.bin_count = sectors + 2;
    b.bins.reserve(points.size());
    b.sample_ids.reserve(points.size());
    for (const auto& p : points) {
        const double dx = p.x - b.center_x;
        std::size_t bin;
        if (p.y == 0.0) {
            bin = dx < 0.0 ? 0 : sectors + 1;
        } else {
            // Angle from the left half-axis: 0 at (-1, 0), 90 straight up, 180 at (+1, 0).
            const double theta = 180.0 - std::atan2(p.y, dx) * 180.0 / std::numbers::pi;
            double q = theta / sector_deg;
            const double nearest = std::round(q);
            if (std::abs(q - nearest) < 1e-9) q = nearest;
            bin = static_cast<std::size_t>(std::clamp(std::ceil(q), 1.0, static_cast<double>(sectors)));
        }
        b.bins.push_back(bin);
        b.sample_ids.push_back(p.sample_id);
    }
    return b;
}

std::vector<std::size_t> stratified_sample(const AngularBinning& binning, std::size_t n_per_bin,
                                           const std::set<std::size_t>& take_all, std::uint64_t seed) {
    if (n_per_bin < 1) throw ArgumentError("stratified_sample: n_per_bin must be >= 1");
    std::vector<std::vector<std::size_t>> members(binning.bin_count);
    for (std::size_t k = 0; k < binning.bins.size(); ++k) members[binning.bins[k]].push_back(binning.sample_ids[k]);

    std::vector<std::size_t> chosen;
    for (std::size_t bin = 0; bin < members.size(); ++bin) {
        auto& m = members[bin];
        std::sort(m.begin(), m.end());
        if (take_all.count(bin) || m.size() <= n_per_bin) {
            chosen.insert(chosen.end(), m.begin(), m.end());
            continue;
        }
        std::seed_seq seq{seed, static_cast<std::uint64_t>(bin)};
        std::mt19937_64 rng(seq);
        std::shuffle(m.begin(), m.end(), rng);
        chosen.insert(chosen.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(n_per_bin));
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

namespace {

std::vector<std::size_t> ranking(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

double map_at_k(std::span<const double> full_scores, std::span<const double> compressed_scores) {
    if (full_scores.size() != compressed_scores.size()) throw ArgumentError("map_at_k: score lists differ in length");
    if (full_scores.empty()) throw ArgumentError("map_at_k: no algorithms");
    const auto a = ranking(full_scores);
    const auto b = ranking(compressed_scores);
    const std::size_t k = a.size();
    std::vector<char> in_a(k, 0), in_b(k, 0);
    std::size_t overlap = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        in_a[a[i]] = 1;
        if (in_b[a[i]]) ++overlap;
        in_b[b[i]] = 1;
        if (in_a[b[i]]) ++overlap;
        total += static_cast<double>(overlap) / static_cast<double>(i + 1);
    }
    return total / static_cast<double>(k);
}

Fidelity compression_fidelity(std::span<const double> full_scores, std::span<const double> compressed_scores) {
    if (full_scores.size() != compressed_scores.size())
        throw ArgumentError("compression_fidelity: score lists differ in length");
    if (full_scores.size() < 3) throw ArgumentError("compression_fidelity: need at least 3 algorithms");
    Fidelity f;
    const bool flat = std::adjacent_find(compressed_scores.begin(), compressed_scores.end(),
                                         std::not_equal_to<>()) == compressed_scores.end();
    f.spearman = flat ? 0.0 : spearman(full_scores, compressed_scores);
    f.map_at_k = map_at_k(full_scores, compressed_scores);
    return f;
}

}  // namespace regtrace
