// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: sectioned key=value text.
//
//   [data]        classes, per_class, dim, separation, noise_frac, seed,
//                 train_frac, csv
//   [model]       hidden, activation, init_scale   (model named "default")
//   [model.NAME]  same keys, one extra model per section
//   [train]       epochs, batch_size, optimizer, learning_rate, momentum,
//                 epsilon, beta1, beta2, lr_schedule ("25:0.1, 37:0.1")
//   [experiment]  repetitions, base_seed, workers, out
//   [analysis]    radius (0 = automatic), histogram_width, scatter,
//                 histograms
//   [prune]       fractions, strategies, radius, radii, seeds, train_seed
//   [compress]    sector_deg, n_per_bin, take_all, seeds, zoo, knn_k
//
// Lists are comma separated. Unknown sections and keys are errors.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "regtrace/dataset.hpp"
#include "regtrace/selection.hpp"
#include "regtrace/trainer.hpp"
#include "regtrace/zoo.hpp"

namespace regtrace {

struct NamedModel {
    std::string name;
    ModelSpec spec;

    friend bool operator==(const NamedModel&, const NamedModel&) = default;
};

struct DataSection {
    MixtureParams mixture{4, 300, 16, 3.0, 0.02, 1};
    double train_frac = 0.5;
    std::filesystem::path csv;  // empty: generate from `mixture`
};

struct AnalysisSection {
    double radius = 0.0;  // 0 picks default_radius from the axis ranges
    std::size_t histogram_width = 1;
    bool scatter = true;
    bool histograms = true;
};

struct PruneSection {
    std::vector<double> fractions{0.0, 0.2, 0.4, 0.6, 0.8};
    std::vector<PruneKind> strategies{PruneKind::density_desc, PruneKind::cbtl_desc, PruneKind::forgetting_asc,
                                      PruneKind::random};
    double radius = 1.0;
    std::vector<double> radii{0.5, 1.0, 2.0, 4.0};
    std::size_t seeds = 5;
    std::uint64_t train_seed = 0;
};

struct CompressSection {
    double sector_deg = 18.0;
    std::vector<std::size_t> n_per_bin{1, 2, 5, 10, 20, 50, 100, 200};
    std::vector<std::size_t> take_all{0};
    std::size_t seeds = 5;
    std::vector<ZooAlgorithm> zoo = default_zoo();
    std::size_t knn_k = 1;
};

struct ExperimentConfig {
    DataSection data;
    std::vector<NamedModel> models{{"default", ModelSpec{}}};
    TrainConfig train;
    std::size_t repetitions = 5;
    std::uint64_t base_seed = 0;
    std::size_t workers = 1;
    std::filesystem::path out = "out";
    AnalysisSection analysis;
    PruneSection prune;
    CompressSection compress;

    /// Throws ConfigError naming the first field that breaks an invariant.
    void validate() const;
};

ExperimentConfig parse_config(std::istream& in, const std::string& source = "<stream>");
/// A relative data.csv path is resolved against the config file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Dataset described by the [data] section, split into train/test. A csv
/// without test rows is split with data.train_frac and data.seed.
LabeledDataset load_experiment_data(const ExperimentConfig& config);

}  // namespace regtrace
