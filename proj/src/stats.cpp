// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>

#include "regtrace/errors.hpp"

namespace regtrace {

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw ArgumentError("pearson: lengths differ (" + std::to_string(xs.size()) + " vs " +
                            std::to_string(ys.size()) + ")");
    if (xs.size() < 2) throw ArgumentError("pearson: need at least 2 observations");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ArgumentError("spearman: lengths differ");
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    return pearson(rx, ry);
}

Histogram histogram(std::span<const std::size_t> values, std::size_t bin_width, std::size_t cover_up_to) {
    if (bin_width < 1) throw ArgumentError("histogram: bin_width must be >= 1");
    std::size_t top = cover_up_to;
    for (auto v : values) top = std::max(top, v);
    const std::size_t bins = top / bin_width + 1;
    Histogram h;
    h.bin_width = bin_width;
    h.counts.assign(bins, 0);
    h.lower_edges.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) h.lower_edges[k] = k * bin_width;
    for (auto v : values) h.counts[v / bin_width] += 1;
    return h;
}

RunCorrelationMatrix run_correlation(const std::vector<std::vector<double>>& vectors) {
    if (vectors.size() < 2) throw ArgumentError("run_correlation: need at least 2 runs");
    for (const auto& v : vectors)
        if (v.size() != vectors.front().size()) throw ArgumentError("run_correlation: vector lengths differ");
    const std::size_t n = vectors.size();
    RunCorrelationMatrix m;
    m.n_runs = n;
    m.entries.assign(n * n, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m.entries[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = pearson(vectors[i], vectors[j]);
            m.entries[i * n + j] = r;
            m.entries[j * n + i] = r;
            sum += r;
        }
    }
    m.off_diagonal_mean = sum / static_cast<double>(n * (n - 1) / 2);
    return m;
}

std::vector<std::size_t> synchronization_counts(const AccuracyTrace& test_trace, const AccuracyTrace& train_trace,
                                                SyncMode mode) {
    if (test_trace.n_epochs() != train_trace.n_epochs())
        throw ArgumentError("synchronization_counts: traces cover " + std::to_string(test_trace.n_epochs()) +
                            " and " + std::to_string(train_trace.n_epochs()) + " epochs");
    const std::size_t epochs = train_trace.n_epochs();
    const std::size_t n_train = train_trace.n_samples();
    std::vector<std::size_t> counts(test_trace.n_samples(), 0);

    if (mode == SyncMode::identical_sets) {
        std::map<std::vector<std::size_t>, std::size_t> by_set;
        for (std::size_t j = 0; j < n_train; ++j) {
            auto e = event_epochs(train_trace, j);
            if (!e.empty()) by_set[std::move(e)] += 1;
        }
        for (std::size_t i = 0; i < counts.size(); ++i) {
            auto e = event_epochs(test_trace, i);
            if (e.empty()) continue;
            auto it = by_set.find(e);
            if (it != by_set.end()) counts[i] = it->second;
        }
        return counts;
    }

    // One bitset of train samples per epoch; a test sample's count is the
    // popcount of the union over its event epochs.
    const std::size_t words = (n_train + 63) / 64;
    std::vector<std::uint64_t> by_epoch((epochs + 1) * words, 0);
    for (std::size_t j = 0; j < n_train; ++j)
        for (auto e : event_epochs(train_trace, j)) by_epoch[e * words + j / 64] |= std::uint64_t{1} << (j % 64);
    std::vector<std::uint64_t> acc(words);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        auto e = event_epochs(test_trace, i);
        if (e.empty()) continue;
        std::fill(acc.begin(), acc.end(), 0);
        for (auto epoch : e)
            for (std::size_t w = 0; w < words; ++w) acc[w] |= by_epoch[epoch * words + w];
        std::size_t c = 0;
        for (auto w : acc) c += static_cast<std::size_t>(std::popcount(w));
        counts[i] = c;
    }
    return counts;
}

double event_distribution_similarity(const AccuracyTrace& train_trace, const AccuracyTrace& test_trace,
                                     std::size_t bin_width) {
    auto events = [](const AccuracyTrace& t) {
        std::vector<std::size_t> v;
        for (const auto& r : regularity_records(t)) v.push_back(r.event_count);
        return v;
    };
    const auto a = events(train_trace);
    const auto b = events(test_trace);
    std::size_t top = 0;
    for (auto v : a) top = std::max(top, v);
    for (auto v : b) top = std::max(top, v);
    const auto ha = histogram(a, bin_width, top);
    const auto hb = histogram(b, bin_width, top);
    std::vector<double> ca(ha.counts.begin(), ha.counts.end());
    std::vector<double> cb(hb.counts.begin(), hb.counts.end());
    return pearson(ca, cb);
}

}  // namespace regtrace
