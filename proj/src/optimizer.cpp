// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regtrace/errors.hpp"

namespace regtrace {

std::string_view to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::adagrad: return "adagrad";
        case OptimizerKind::adamax: return "adamax";
    }
    return "?";
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
    if (text == "sgd") return OptimizerKind::sgd;
    if (text == "adagrad") return OptimizerKind::adagrad;
    if (text == "adamax") return OptimizerKind::adamax;
    throw ArgumentError("unknown optimizer '" + std::string(text) + "'");
}

namespace {

void check_shapes(std::span<double> params, std::span<const double> grads) {
    if (params.size() != grads.size())
        throw ArgumentError("optimizer: " + std::to_string(params.size()) + " params but " +
                            std::to_string(grads.size()) + " gradients");
}

void ensure_slot(std::vector<double>& slot, std::size_t n) {
    if (slot.empty()) slot.assign(n, 0.0);
    else if (slot.size() != n)
        throw ArgumentError("optimizer: state holds " + std::to_string(slot.size()) + " slots for " +
                            std::to_string(n) + " params");
}

}  // namespace

void sgd_step(std::span<double> params, std::span<const double> grads, OptimizerState& state,
              double learning_rate, double momentum) {
    check_shapes(params, grads);
    ensure_slot(state.first, params.size());
    auto& velocity = state.first;
    for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = momentum * velocity[i] + grads[i];
        params[i] -= learning_rate * velocity[i];
    }
    ++state.step;
}

void adagrad_step(std::span<double> params, std::span<const double> grads, OptimizerState& state,
                  double learning_rate, double epsilon) {
    check_shapes(params, grads);
    ensure_slot(state.first, params.size());
    auto& accum = state.first;
    for (std::size_t i = 0; i < params.size(); ++i) {
        accum[i] += grads[i] * grads[i];
        params[i] -= learning_rate * grads[i] / std::sqrt(accum[i] + epsilon);
    }
    ++state.step;
}

void adamax_step(std::span<double> params, std::span<const double> grads, OptimizerState& state,
                 double learning_rate, double beta1, double beta2, double epsilon) {
    check_shapes(params, grads);
    ensure_slot(state.first, params.size());
    ensure_slot(state.second, params.size());
    ++state.step;
    const double step_size = learning_rate / (1.0 - std::pow(beta1, static_cast<double>(state.step)));
    auto& m = state.first;
    auto& u = state.second;
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
        u[i] = std::max(beta2 * u[i], std::abs(grads[i]));
        params[i] -= step_size * m[i] / std::max(u[i], epsilon);
    }
}

void optimizer_step(const OptimizerHyper& hyper, double learning_rate, std::span<double> params,
                    std::span<const double> grads, OptimizerState& state) {
    switch (hyper.kind) {
        case OptimizerKind::sgd: sgd_step(params, grads, state, learning_rate, hyper.momentum); break;
        case OptimizerKind::adagrad: adagrad_step(params, grads, state, learning_rate, hyper.epsilon); break;
        case OptimizerKind::adamax:
            adamax_step(params, grads, state, learning_rate, hyper.beta1, hyper.beta2, hyper.epsilon);
            break;
    }
}

}  // namespace regtrace
