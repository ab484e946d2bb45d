// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Epoch-wise correctness traces and the per-sample statistics derived from
// them: cumulative binary loss (number of correct epochs) and event counts
// (correct -> incorrect transitions between consecutive epochs). For a
// training trace these are CBTL and forgetting events; for a test trace,
// CBGL and mal-generalizing events.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace regtrace {

enum class TraceRole { train, test };

std::string_view to_string(TraceRole role);
TraceRole parse_trace_role(std::string_view text);

/// Binary correctness matrix, one row per sample and one column per epoch.
/// Epochs are 1-based in every public accessor.
class AccuracyTrace {
public:
    /// `bits` is row-major (n_samples x n_epochs); every entry must be 0 or 1.
    AccuracyTrace(TraceRole role, std::size_t n_samples, std::size_t n_epochs,
                  std::vector<std::uint8_t> bits);

    /// Builds a trace from epoch columns as produced by a trainer: columns[t][i]
    /// is the correctness of sample i after epoch t + 1.
    static AccuracyTrace from_columns(TraceRole role,
                                      const std::vector<std::vector<std::uint8_t>>& columns);

    TraceRole role() const noexcept { return role_; }
    std::size_t n_samples() const noexcept { return n_samples_; }
    std::size_t n_epochs() const noexcept { return n_epochs_; }

    std::uint8_t bit(std::size_t sample, std::size_t epoch) const;
    std::span<const std::uint8_t> row(std::size_t sample) const;
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    /// Mean correctness over samples at the given epoch.
    double accuracy_at(std::size_t epoch) const;

    friend bool operator==(const AccuracyTrace&, const AccuracyTrace&) = default;

private:
    TraceRole role_;
    std::size_t n_samples_;
    std::size_t n_epochs_;
    std::vector<std::uint8_t> bits_;
};

struct RegularityRecord {
    std::size_t sample_id = 0;
    std::size_t cumulative_loss = 0;  // correct epochs in 1..at_epoch
    std::size_t event_count = 0;      // 1 -> 0 transitions in 1..at_epoch
    std::size_t at_epoch = 0;

    friend bool operator==(const RegularityRecord&, const RegularityRecord&) = default;
};

std::size_t cumulative_binary_loss(const AccuracyTrace& trace, std::size_t sample, std::size_t epoch);
std::size_t event_count(const AccuracyTrace& trace, std::size_t sample, std::size_t epoch);

/// Epochs n (ascending) at which sample went from correct at n-1 to incorrect at n.
std::vector<std::size_t> event_epochs(const AccuracyTrace& trace, std::size_t sample);

/// One record per sample evaluated at the final epoch, ordered by sample id.
std::vector<RegularityRecord> regularity_records(const AccuracyTrace& trace);

// Text interchange format:
//   TRACE v1 role=<train|test> samples=<N> epochs=<T>
//   followed by N lines of T comma-separated 0/1 digits.
void write_trace(const AccuracyTrace& trace, std::ostream& out);
void write_trace(const AccuracyTrace& trace, const std::filesystem::path& path);
AccuracyTrace read_trace(std::istream& in, const std::string& source = "<stream>");
AccuracyTrace read_trace(const std::filesystem::path& path);

}  // namespace regtrace
