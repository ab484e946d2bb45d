// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace regtrace {

enum class Split : std::uint8_t { train, test };

/// Dense feature matrix with class labels and a train/test tag per sample.
/// `irregular` lists ids whose label was deliberately corrupted by a
/// generator; it is empty for loaded data.
struct LabeledDataset {
    std::size_t dim = 0;
    std::size_t num_classes = 0;
    std::vector<double> features;  // row-major, size() * dim
    std::vector<std::size_t> labels;
    std::vector<Split> split;
    std::vector<std::size_t> irregular;

    std::size_t size() const noexcept { return labels.size(); }
    std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }

    std::vector<std::size_t> ids_with(Split tag) const;

    /// Throws ArgumentError when the invariants (shared dimension, labels
    /// below num_classes, equal lengths) do not hold.
    void validate() const;

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

struct MixtureParams {
    std::size_t classes = 4;
    std::size_t per_class = 200;
    std::size_t dim = 8;
    double separation = 3.0;
    double noise_frac = 0.1;
    std::uint64_t seed = 1;
};

/// Gaussian clusters with unit covariance. Centers sit on a scaled simplex
/// (pairwise distance exactly `separation`) when dim >= classes, otherwise
/// on a line with spacing `separation`. Exactly round(noise_frac * N)
/// samples get a uniformly drawn wrong label and are listed in `irregular`.
/// Samples come out in random order and every one is tagged train; use
/// stratified_split afterwards. Features and order do not depend on
/// noise_frac, so the noise-free dataset with the same seed holds the clean
/// labels.
LabeledDataset synth_mixture(const MixtureParams& params);

/// Per class, round(train_frac * count) members (clamped to 1..count-1) are
/// tagged train and the rest test.
LabeledDataset stratified_split(const LabeledDataset& data, double train_frac, std::uint64_t seed);

/// Copy of `data` keeping all test samples and only the listed train samples.
/// Sample order is preserved; `irregular` is remapped to the new ids.
LabeledDataset keep_train_subset(const LabeledDataset& data, std::span<const std::size_t> train_ids);

// CSV layout: header `label,f1,...,fd[,split]`, one sample per row.
LabeledDataset load_csv(std::istream& in, const std::string& source = "<stream>");
LabeledDataset load_csv(const std::filesystem::path& path);
void write_csv(const LabeledDataset& data, std::ostream& out);
void write_csv(const LabeledDataset& data, const std::filesystem::path& path);

/// round-half-up of value, used wherever a fraction is turned into a count.
std::size_t round_half_up(double value);

}  // namespace regtrace
