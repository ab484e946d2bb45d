// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "regtrace/errors.hpp"

namespace regtrace {

namespace {

constexpr std::pair<ZooAlgorithm, std::string_view> kNames[] = {
    {ZooAlgorithm::logreg, "logreg"},
    {ZooAlgorithm::mlp_small, "mlp_small"},
    {ZooAlgorithm::mlp_large, "mlp_large"},
    {ZooAlgorithm::knn, "knn"},
    {ZooAlgorithm::nearest_centroid, "nearest_centroid"},
    {ZooAlgorithm::ridge_onehot, "ridge_onehot"},
};

std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < v.size(); ++c)
        if (v[c] > v[best]) best = c;
    return best;
}

std::vector<std::uint8_t> score(const LabeledDataset& data, const std::vector<std::size_t>& test,
                                const std::vector<std::size_t>& predicted) {
    std::vector<std::uint8_t> bits(test.size());
    for (std::size_t k = 0; k < test.size(); ++k) bits[k] = predicted[k] == data.labels[test[k]] ? 1 : 0;
    return bits;
}

std::vector<std::uint8_t> fit_network(const LabeledDataset& data, std::vector<std::size_t> widths,
                                      std::uint64_t seed, const ZooOptions& options) {
    ModelSpec spec;
    spec.hidden_widths = std::move(widths);
    TrainConfig config = options.train;
    config.seed = seed;
    auto run = train_and_trace(data, spec, config);
    const auto last = run.test_trace.n_epochs();
    std::vector<std::uint8_t> bits(run.test_trace.n_samples());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = run.test_trace.bit(i, last);
    return bits;
}

std::vector<std::size_t> predict_knn(const LabeledDataset& data, const std::vector<std::size_t>& train,
                                     const std::vector<std::size_t>& test, std::size_t k) {
    if (k < 1 || k > train.size())
        throw ArgumentError("knn: k = " + std::to_string(k) + " outside 1.." + std::to_string(train.size()));
    std::vector<std::size_t> out;
    std::vector<std::pair<double, std::size_t>> dist(train.size());
    for (auto t : test) {
        auto x = data.row(t);
        for (std::size_t j = 0; j < train.size(); ++j) {
            auto r = data.row(train[j]);
            double d = 0.0;
            for (std::size_t f = 0; f < data.dim; ++f) d += (x[f] - r[f]) * (x[f] - r[f]);
            dist[j] = {d, j};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::vector<double> votes(data.num_classes, 0.0);
        for (std::size_t j = 0; j < k; ++j) votes[data.labels[train[dist[j].second]]] += 1.0;
        out.push_back(argmax(votes));
    }
    return out;
}

std::vector<std::size_t> predict_centroid(const LabeledDataset& data, const std::vector<std::size_t>& train,
                                          const std::vector<std::size_t>& test) {
    const std::size_t k = data.num_classes, d = data.dim;
    std::vector<double> centroid(k * d, 0.0);
    std::vector<double> count(k, 0.0);
    for (auto i : train) {
        auto r = data.row(i);
        for (std::size_t f = 0; f < d; ++f) centroid[data.labels[i] * d + f] += r[f];
        count[data.labels[i]] += 1.0;
    }
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t f = 0; f < d; ++f)
            if (count[c] > 0) centroid[c * d + f] /= count[c];
    std::vector<std::size_t> out;
    for (auto t : test) {
        auto x = data.row(t);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] == 0) continue;
            double dd = 0.0;
            for (std::size_t f = 0; f < d; ++f) dd += (x[f] - centroid[c * d + f]) * (x[f] - centroid[c * d + f]);
            if (dd < best_d) {
                best_d = dd;
                best = c;
            }
        }
        out.push_back(best);
    }
    return out;
}

// Solves A X = B for symmetric positive definite A (n x n) and B (n x m), in place.
void cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n, std::size_t m) {
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a[j * n + j];
        for (std::size_t p = 0; p < j; ++p) diag -= a[j * n + p] * a[j * n + p];
        if (!(diag > 0.0)) throw TrainingError("ridge: normal matrix is not positive definite");
        diag = std::sqrt(diag);
        a[j * n + j] = diag;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t p = 0; p < j; ++p) v -= a[i * n + p] * a[j * n + p];
            a[i * n + j] = v / diag;
        }
    }
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = b[i * m + c];
            for (std::size_t p = 0; p < i; ++p) v -= a[i * n + p] * b[p * m + c];
            b[i * m + c] = v / a[i * n + i];
        }
        for (std::size_t i = n; i-- > 0;) {
            double v = b[i * m + c];
            for (std::size_t p = i + 1; p < n; ++p) v -= a[p * n + i] * b[p * m + c];
            b[i * m + c] = v / a[i * n + i];
        }
    }
}

std::vector<std::size_t> predict_ridge(const LabeledDataset& data, const std::vector<std::size_t>& train,
                                       const std::vector<std::size_t>& test, double lambda) {
    const std::size_t n = data.dim + 1, k = data.num_classes;
    std::vector<double> gram(n * n, 0.0), rhs(n * k, 0.0), x(n);
    for (auto i : train) {
        auto r = data.row(i);
        std::copy(r.begin(), r.end(), x.begin());
        x[n - 1] = 1.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) gram[p * n + q] += x[p] * x[q];
            rhs[p * k + data.labels[i]] += x[p];
        }
    }
    for (std::size_t p = 0; p < n; ++p) gram[p * n + p] += lambda;
    cholesky_solve(gram, rhs, n, k);
    std::vector<std::size_t> out;
    std::vector<double> scores(k);
    for (auto t : test) {
        auto r = data.row(t);
        for (std::size_t c = 0; c < k; ++c) {
            double s = rhs[(n - 1) * k + c];
            for (std::size_t f = 0; f < data.dim; ++f) s += r[f] * rhs[f * k + c];
            scores[c] = s;
        }
        out.push_back(argmax(scores));
    }
    return out;
}

}  // namespace

std::string_view to_string(ZooAlgorithm algorithm) {
    for (const auto& [a, name] : kNames)
        if (a == algorithm) return name;
    return "?";
}

ZooAlgorithm parse_zoo_algorithm(std::string_view text) {
    for (const auto& [a, name] : kNames)
        if (name == text) return a;
    throw ArgumentError("unknown zoo algorithm '" + std::string(text) + "'");
}

std::vector<ZooAlgorithm> default_zoo() {
    std::vector<ZooAlgorithm> all;
    for (const auto& entry : kNames) all.push_back(entry.first);
    return all;
}

std::vector<std::uint8_t> zoo_predict(ZooAlgorithm algorithm, const LabeledDataset& data, std::uint64_t seed,
                                      const ZooOptions& options) {
    data.validate();
    const auto train = data.ids_with(Split::train);
    const auto test = data.ids_with(Split::test);
    if (train.empty() || test.empty()) throw ArgumentError("zoo: dataset needs train and test samples");
    switch (algorithm) {
        case ZooAlgorithm::logreg: return fit_network(data, {}, seed, options);
        case ZooAlgorithm::mlp_small: return fit_network(data, options.mlp_small_widths, seed, options);
        case ZooAlgorithm::mlp_large: return fit_network(data, options.mlp_large_widths, seed, options);
        case ZooAlgorithm::knn: return score(data, test, predict_knn(data, train, test, options.knn_k));
        case ZooAlgorithm::nearest_centroid: return score(data, test, predict_centroid(data, train, test));
        case ZooAlgorithm::ridge_onehot:
            return score(data, test, predict_ridge(data, train, test, options.ridge_lambda));
    }
    throw ArgumentError("zoo: unhandled algorithm");
}

}  // namespace regtrace
