// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "regtrace/errors.hpp"

namespace regtrace {

std::string_view to_string(Activation a) {
    return a == Activation::relu ? "relu" : "tanh";
}

Activation parse_activation(std::string_view text) {
    if (text == "relu") return Activation::relu;
    if (text == "tanh") return Activation::tanh;
    throw ArgumentError("unknown activation '" + std::string(text) + "'");
}

void ModelSpec::validate() const {
    for (auto w : hidden_widths)
        if (w < 1) throw ArgumentError("model: hidden widths must be >= 1");
    if (!(init_scale > 0.0)) throw ArgumentError("model: init_scale must be > 0");
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ArgumentError("train: epochs must be >= 1");
    if (batch_size < 1) throw ArgumentError("train: batch_size must be >= 1");
    if (!(optimizer.learning_rate > 0.0)) throw ArgumentError("train: learning rate must be > 0");
    for (std::size_t i = 1; i < lr_schedule.size(); ++i)
        if (lr_schedule[i].epoch <= lr_schedule[i - 1].epoch)
            throw ArgumentError("train: schedule epochs must be strictly increasing");
}

double TrainConfig::learning_rate_at(std::size_t epoch) const {
    double lr = optimizer.learning_rate;
    for (const auto& step : lr_schedule)
        if (step.epoch <= epoch) lr *= step.multiplier;
    return lr;
}

Network::Network(ModelSpec spec, std::size_t input_dim, std::size_t num_classes) : spec_(std::move(spec)) {
    spec_.validate();
    if (input_dim < 1 || num_classes < 2) throw ArgumentError("network: bad input or output size");
    sizes_.push_back(input_dim);
    sizes_.insert(sizes_.end(), spec_.hidden_widths.begin(), spec_.hidden_widths.end());
    sizes_.push_back(num_classes);
    std::size_t total = 0;
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
        offsets_.push_back(total);
        total += sizes_[l] * sizes_[l - 1] + sizes_[l];
    }
    params_.assign(total, 0.0);
}

void Network::initialize(std::uint64_t seed) {
    std::seed_seq seq{seed, std::uint64_t{0x1417}};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-spec_.init_scale, spec_.init_scale);
    for (auto& p : params_) p = u(rng);
}

struct NetworkAccess {
    // Forward pass keeping every layer's output (post-activation for hidden
    // layers, raw logits for the last one).
    static void forward(const Network& net, std::span<const double> x, std::vector<std::vector<double>>& acts) {
        const auto& sizes = net.sizes_;
        acts.resize(sizes.size());
        acts[0].assign(x.begin(), x.end());
        for (std::size_t l = 1; l < sizes.size(); ++l) {
            const std::size_t in = sizes[l - 1], out = sizes[l];
            const double* w = net.params_.data() + net.offsets_[l - 1];
            const double* b = w + in * out;
            auto& a = acts[l];
            a.resize(out);
            const auto& prev = acts[l - 1];
            const bool hidden = l + 1 < sizes.size();
            for (std::size_t o = 0; o < out; ++o) {
                double z = b[o];
                const double* wr = w + o * in;
                for (std::size_t i = 0; i < in; ++i) z += wr[i] * prev[i];
                if (hidden) z = net.spec_.activation == Activation::relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
                a[o] = z;
            }
        }
    }

    // Accumulates d(loss)/d(params) given d(loss)/d(logits) in `delta`.
    static void backward(const Network& net, const std::vector<std::vector<double>>& acts,
                         std::vector<double> delta, std::vector<double>& grads) {
        const auto& sizes = net.sizes_;
        std::vector<double> prev_delta;
        for (std::size_t l = sizes.size() - 1; l >= 1; --l) {
            const std::size_t in = sizes[l - 1], out = sizes[l];
            const double* w = net.params_.data() + net.offsets_[l - 1];
            double* gw = grads.data() + net.offsets_[l - 1];
            double* gb = gw + in * out;
            const auto& a_prev = acts[l - 1];
            for (std::size_t o = 0; o < out; ++o) {
                const double d = delta[o];
                if (d == 0.0) continue;
                double* gwr = gw + o * in;
                for (std::size_t i = 0; i < in; ++i) gwr[i] += d * a_prev[i];
                gb[o] += d;
            }
            if (l == 1) break;
            prev_delta.assign(in, 0.0);
            for (std::size_t o = 0; o < out; ++o) {
                const double d = delta[o];
                if (d == 0.0) continue;
                const double* wr = w + o * in;
                for (std::size_t i = 0; i < in; ++i) prev_delta[i] += wr[i] * d;
            }
            for (std::size_t i = 0; i < in; ++i) {
                const double a = a_prev[i];
                prev_delta[i] *= net.spec_.activation == Activation::relu ? (a > 0.0 ? 1.0 : 0.0) : 1.0 - a * a;
            }
            delta.swap(prev_delta);
        }
    }
};

void Network::logits(std::span<const double> x, std::vector<double>& out) const {
    if (x.size() != input_dim()) throw ArgumentError("network: feature dimension mismatch");
    std::vector<std::vector<double>> acts;
    NetworkAccess::forward(*this, x, acts);
    out = std::move(acts.back());
}

std::size_t Network::predict(std::span<const double> x) const {
    std::vector<double> z;
    logits(x, z);
    std::size_t best = 0;
    for (std::size_t c = 1; c < z.size(); ++c)
        if (z[c] > z[best]) best = c;
    return best;
}

namespace {

// Softmax probabilities of `z` in place; returns the clamped -log p[label].
double softmax_xent(std::vector<double>& z, std::size_t label) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - zmax);
    const double log_sum = std::log(sum);
    const double log_p = z[label] - zmax - log_sum;
    for (auto& v : z) v = std::exp(v - zmax - log_sum);
    return -std::max(log_p, std::log(kMinProbability));
}

void check_batch(const Network& net, const LabeledDataset& data, std::span<const std::size_t> ids) {
    if (ids.empty()) throw ArgumentError("loss: empty batch");
    if (data.dim != net.input_dim()) throw ArgumentError("loss: feature dimension mismatch");
    for (auto id : ids)
        if (id >= data.size()) throw ArgumentError("loss: batch id out of range");
}

}  // namespace

LossAndGrad loss_and_grad(const Network& net, const LabeledDataset& data, std::span<const std::size_t> batch) {
    check_batch(net, data, batch);
    LossAndGrad out;
    out.gradients.assign(net.num_params(), 0.0);
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    std::vector<std::vector<double>> acts;
    for (auto id : batch) {
        NetworkAccess::forward(net, data.row(id), acts);
        std::vector<double> delta = acts.back();
        const std::size_t y = data.labels[id];
        out.loss += softmax_xent(delta, y) * inv_b;
        delta[y] -= 1.0;
        for (auto& d : delta) d *= inv_b;
        NetworkAccess::backward(net, acts, std::move(delta), out.gradients);
    }
    return out;
}

double mean_loss(const Network& net, const LabeledDataset& data, std::span<const std::size_t> ids) {
    check_batch(net, data, ids);
    double total = 0.0;
    std::vector<double> z;
    for (auto id : ids) {
        net.logits(data.row(id), z);
        total += softmax_xent(z, data.labels[id]);
    }
    return total / static_cast<double>(ids.size());
}

RunBundle train_and_trace(const LabeledDataset& data, const ModelSpec& spec, const TrainConfig& config,
                          const EpochObserver& observer) {
    data.validate();
    spec.validate();
    config.validate();
    auto train_ids = data.ids_with(Split::train);
    auto test_ids = data.ids_with(Split::test);
    if (train_ids.empty()) throw ArgumentError("train_and_trace: dataset has no train samples");
    if (test_ids.empty()) throw ArgumentError("train_and_trace: dataset has no test samples");

    Network net(spec, data.dim, data.num_classes);
    net.initialize(config.seed);
    OptimizerState state;

    std::vector<std::vector<std::uint8_t>> train_cols, test_cols;
    std::vector<double> epoch_loss;
    std::vector<std::size_t> order = train_ids;
    auto infer = [&](const std::vector<std::size_t>& ids) {
        std::vector<std::uint8_t> col(ids.size());
        for (std::size_t k = 0; k < ids.size(); ++k)
            col[k] = net.predict(data.row(ids[k])) == data.labels[ids[k]] ? 1 : 0;
        return col;
    };

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::seed_seq seq{config.seed, static_cast<std::uint64_t>(epoch), std::uint64_t{0x5eed}};
        std::mt19937_64 rng(seq);
        std::shuffle(order.begin(), order.end(), rng);
        const double lr = config.learning_rate_at(epoch);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t len = std::min(config.batch_size, order.size() - start);
            auto lg = loss_and_grad(net, data, std::span<const std::size_t>(order).subspan(start, len));
            if (!std::isfinite(lg.loss))
                throw TrainingError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
            optimizer_step(config.optimizer, lr, net.params(), lg.gradients, state);
            loss_sum += lg.loss;
            ++batches;
        }
        for (double p : net.params())
            if (!std::isfinite(p))
                throw TrainingError("training diverged: non-finite parameter at epoch " + std::to_string(epoch));
        epoch_loss.push_back(loss_sum / static_cast<double>(batches));
        train_cols.push_back(infer(train_ids));
        test_cols.push_back(infer(test_ids));
        if (observer) observer(epoch, net);
    }

    auto train_trace = AccuracyTrace::from_columns(TraceRole::train, train_cols);
    auto test_trace = AccuracyTrace::from_columns(TraceRole::test, test_cols);
    const double train_acc = train_trace.accuracy_at(config.epochs);
    const double test_acc = test_trace.accuracy_at(config.epochs);
    return RunBundle{config, spec, std::move(train_trace), std::move(test_trace), train_acc, test_acc,
                     std::move(train_ids), std::move(test_ids), std::move(epoch_loss)};
}

}  // namespace regtrace
