// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace regtrace {

enum class OptimizerKind { sgd, adagrad, adamax };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view text);

struct OptimizerHyper {
    OptimizerKind kind = OptimizerKind::sgd;
    double learning_rate = 0.1;
    double momentum = 0.9;  // sgd
    double epsilon = 1e-8;  // adagrad, adamax
    double beta1 = 0.9;     // adamax
    double beta2 = 0.999;   // adamax
};

/// Per-parameter slots. Empty slots are sized on first use; a size that
/// disagrees with the parameter vector is an ArgumentError.
///   sgd:     first = velocity
///   adagrad: first = sum of squared gradients
///   adamax:  first = first moment, second = exponentially weighted inf-norm
struct OptimizerState {
    std::vector<double> first;
    std::vector<double> second;
    std::uint64_t step = 0;
};

/// v <- momentum * v + g;  p <- p - lr * v
void sgd_step(std::span<double> params, std::span<const double> grads, OptimizerState& state,
              double learning_rate, double momentum);

/// G <- G + g^2;  p <- p - lr * g / sqrt(G + eps)
void adagrad_step(std::span<double> params, std::span<const double> grads, OptimizerState& state,
                  double learning_rate, double epsilon);

/// m <- b1 m + (1 - b1) g;  u <- max(b2 u, |g|);  p <- p - lr / (1 - b1^t) * m / max(u, eps)
void adamax_step(std::span<double> params, std::span<const double> grads, OptimizerState& state,
                 double learning_rate, double beta1, double beta2, double epsilon);

/// Dispatches on hyper.kind, using `learning_rate` in place of hyper.learning_rate
/// so schedules can scale it.
void optimizer_step(const OptimizerHyper& hyper, double learning_rate, std::span<double> params,
                    std::span<const double> grads, OptimizerState& state);

}  // namespace regtrace
