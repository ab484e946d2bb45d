// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small fully connected softmax classifiers trained with mini-batch
// optimization. After every epoch all train and test samples are
// re-classified with the current parameters and one column is appended to
// each AccuracyTrace.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "regtrace/dataset.hpp"
#include "regtrace/optimizer.hpp"
#include "regtrace/trace.hpp"

namespace regtrace {

enum class Activation { relu, tanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

struct ModelSpec {
    std::vector<std::size_t> hidden_widths;  // empty: multinomial logistic regression
    Activation activation = Activation::relu;
    double init_scale = 0.1;

    void validate() const;
    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct LrStep {
    std::size_t epoch;  // first epoch (1-based) the multiplier applies to
    double multiplier;
    friend bool operator==(const LrStep&, const LrStep&) = default;
};

struct TrainConfig {
    std::size_t epochs = 60;
    std::size_t batch_size = 32;
    OptimizerHyper optimizer;
    std::vector<LrStep> lr_schedule{{25, 0.1}, {37, 0.1}};
    std::uint64_t seed = 0;

    void validate() const;
    /// Base rate times every schedule multiplier whose epoch is <= `epoch`.
    double learning_rate_at(std::size_t epoch) const;
};

/// Layer geometry plus a flat parameter vector. Layer l stores its weight
/// matrix (out x in, row-major) followed by its bias.
class Network {
public:
    Network(ModelSpec spec, std::size_t input_dim, std::size_t num_classes);

    /// Uniform in [-init_scale, init_scale].
    void initialize(std::uint64_t seed);

    const ModelSpec& spec() const noexcept { return spec_; }
    std::size_t input_dim() const noexcept { return sizes_.front(); }
    std::size_t num_classes() const noexcept { return sizes_.back(); }
    std::size_t num_layers() const noexcept { return sizes_.size() - 1; }
    std::size_t num_params() const noexcept { return params_.size(); }

    std::span<double> params() noexcept { return params_; }
    std::span<const double> params() const noexcept { return params_; }

    void logits(std::span<const double> x, std::vector<double>& out) const;
    /// argmax of the logits; ties go to the lowest class index.
    std::size_t predict(std::span<const double> x) const;

private:
    friend struct NetworkAccess;

    ModelSpec spec_;
    std::vector<std::size_t> sizes_;    // input, hidden..., classes
    std::vector<std::size_t> offsets_;  // start of each layer's weights
    std::vector<double> params_;
};

struct LossAndGrad {
    double loss = 0.0;
    std::vector<double> gradients;  // same layout as Network::params()
};

/// Log-probabilities are clamped at log(1e-12) when forming the loss.
inline constexpr double kMinProbability = 1e-12;

/// Mean softmax cross-entropy over `batch` (dataset row ids) and its exact
/// gradient with respect to every parameter.
LossAndGrad loss_and_grad(const Network& net, const LabeledDataset& data, std::span<const std::size_t> batch);

/// Mean cross-entropy without gradients.
double mean_loss(const Network& net, const LabeledDataset& data, std::span<const std::size_t> ids);

struct RunBundle {
    TrainConfig config;
    ModelSpec model_spec;
    AccuracyTrace train_trace;
    AccuracyTrace test_trace;
    double final_train_acc = 0.0;
    double final_test_acc = 0.0;
    std::vector<std::size_t> train_ids;  // dataset row of each train_trace sample
    std::vector<std::size_t> test_ids;   // dataset row of each test_trace sample
    std::vector<double> epoch_loss;      // mean mini-batch loss per epoch
};

/// Called after the epoch-end inference of each epoch (1-based).
using EpochObserver = std::function<void(std::size_t epoch, const Network&)>;

RunBundle train_and_trace(const LabeledDataset& data, const ModelSpec& spec, const TrainConfig& config,
                          const EpochObserver& observer = {});

}  // namespace regtrace
