// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regtrace {

/// Invalid argument to an operation (bad fraction, empty split, shape mismatch).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sample or epoch index outside the trace.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed input file. The message carries the source and line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Experiment config problem; names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Training diverged or otherwise could not complete.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Correlation requested on a constant vector.
class UndefinedCorrelation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace regtrace
