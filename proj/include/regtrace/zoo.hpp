// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Testee classifiers used to rank a test set's discriminative power.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "regtrace/dataset.hpp"
#include "regtrace/trainer.hpp"

namespace regtrace {

enum class ZooAlgorithm { logreg, mlp_small, mlp_large, knn, nearest_centroid, ridge_onehot };

std::string_view to_string(ZooAlgorithm algorithm);
ZooAlgorithm parse_zoo_algorithm(std::string_view text);
std::vector<ZooAlgorithm> default_zoo();

struct ZooOptions {
    std::size_t knn_k = 1;
    double ridge_lambda = 1.0;
    std::vector<std::size_t> mlp_small_widths{2};
    std::vector<std::size_t> mlp_large_widths{64, 64};
    TrainConfig train = [] {
        TrainConfig c;
        c.epochs = 20;
        c.batch_size = 32;
        c.optimizer.learning_rate = 0.05;
        c.optimizer.momentum = 0.9;
        c.lr_schedule.clear();
        return c;
    }();
};

/// Fits on the train split and returns one correctness bit per test sample,
/// in dataset order.
std::vector<std::uint8_t> zoo_predict(ZooAlgorithm algorithm, const LabeledDataset& data, std::uint64_t seed,
                                      const ZooOptions& options = {});

}  // namespace regtrace
