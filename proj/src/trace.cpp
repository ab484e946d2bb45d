// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "regtrace/errors.hpp"

namespace regtrace {

std::string_view to_string(TraceRole role) {
    return role == TraceRole::train ? "train" : "test";
}

TraceRole parse_trace_role(std::string_view text) {
    if (text == "train") return TraceRole::train;
    if (text == "test") return TraceRole::test;
    throw ArgumentError("unknown trace role '" + std::string(text) + "'");
}

AccuracyTrace::AccuracyTrace(TraceRole role, std::size_t n_samples, std::size_t n_epochs,
                             std::vector<std::uint8_t> bits)
    : role_(role), n_samples_(n_samples), n_epochs_(n_epochs), bits_(std::move(bits)) {
    if (n_samples_ == 0 || n_epochs_ == 0)
        throw ArgumentError("trace needs at least one sample and one epoch");
    if (bits_.size() != n_samples_ * n_epochs_)
        throw ArgumentError("trace bit matrix has " + std::to_string(bits_.size()) +
                            " entries, expected " + std::to_string(n_samples_ * n_epochs_));
    for (auto b : bits_)
        if (b > 1) throw ArgumentError("trace entries must be 0 or 1");
}

AccuracyTrace AccuracyTrace::from_columns(TraceRole role,
                                          const std::vector<std::vector<std::uint8_t>>& columns) {
    if (columns.empty()) throw ArgumentError("trace needs at least one epoch");
    const std::size_t n = columns.front().size();
    const std::size_t t = columns.size();
    std::vector<std::uint8_t> bits(n * t);
    for (std::size_t e = 0; e < t; ++e) {
        if (columns[e].size() != n) throw ArgumentError("ragged epoch columns");
        for (std::size_t i = 0; i < n; ++i) bits[i * t + e] = columns[e][i];
    }
    return AccuracyTrace(role, n, t, std::move(bits));
}

std::uint8_t AccuracyTrace::bit(std::size_t sample, std::size_t epoch) const {
    if (sample >= n_samples_) throw RangeError("sample " + std::to_string(sample) + " out of range");
    if (epoch < 1 || epoch > n_epochs_)
        throw RangeError("epoch " + std::to_string(epoch) + " out of range 1.." + std::to_string(n_epochs_));
    return bits_[sample * n_epochs_ + (epoch - 1)];
}

std::span<const std::uint8_t> AccuracyTrace::row(std::size_t sample) const {
    if (sample >= n_samples_) throw RangeError("sample " + std::to_string(sample) + " out of range");
    return std::span<const std::uint8_t>(bits_).subspan(sample * n_epochs_, n_epochs_);
}

double AccuracyTrace::accuracy_at(std::size_t epoch) const {
    if (epoch < 1 || epoch > n_epochs_) throw RangeError("epoch out of range");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n_samples_; ++i) correct += bits_[i * n_epochs_ + epoch - 1];
    return static_cast<double>(correct) / static_cast<double>(n_samples_);
}

namespace {

std::span<const std::uint8_t> prefix(const AccuracyTrace& trace, std::size_t sample, std::size_t epoch) {
    auto r = trace.row(sample);
    if (epoch < 1 || epoch > trace.n_epochs())
        throw RangeError("epoch " + std::to_string(epoch) + " out of range 1.." +
                         std::to_string(trace.n_epochs()));
    return r.first(epoch);
}

}  // namespace

std::size_t cumulative_binary_loss(const AccuracyTrace& trace, std::size_t sample, std::size_t epoch) {
    std::size_t sum = 0;
    for (auto b : prefix(trace, sample, epoch)) sum += b;
    return sum;
}

std::size_t event_count(const AccuracyTrace& trace, std::size_t sample, std::size_t epoch) {
    auto r = prefix(trace, sample, epoch);
    std::size_t events = 0;
    for (std::size_t n = 1; n < r.size(); ++n) events += (r[n - 1] == 1 && r[n] == 0);
    return events;
}

std::vector<std::size_t> event_epochs(const AccuracyTrace& trace, std::size_t sample) {
    auto r = trace.row(sample);
    std::vector<std::size_t> epochs;
    for (std::size_t n = 1; n < r.size(); ++n)
        if (r[n - 1] == 1 && r[n] == 0) epochs.push_back(n + 1);
    return epochs;
}

std::vector<RegularityRecord> regularity_records(const AccuracyTrace& trace) {
    std::vector<RegularityRecord> records;
    records.reserve(trace.n_samples());
    const std::size_t t = trace.n_epochs();
    for (std::size_t i = 0; i < trace.n_samples(); ++i)
        records.push_back({i, cumulative_binary_loss(trace, i, t), event_count(trace, i, t), t});
    return records;
}

void write_trace(const AccuracyTrace& trace, std::ostream& out) {
    out << "TRACE v1 role=" << to_string(trace.role()) << " samples=" << trace.n_samples()
        << " epochs=" << trace.n_epochs() << '\n';
    std::string line;
    for (std::size_t i = 0; i < trace.n_samples(); ++i) {
        line.clear();
        for (auto b : trace.row(i)) {
            if (!line.empty()) line.push_back(',');
            line.push_back(static_cast<char>('0' + b));
        }
        line.push_back('\n');
        out << line;
    }
}

void write_trace(const AccuracyTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_trace(trace, out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

std::size_t parse_count_field(std::string_view token, std::string_view key, const std::string& source) {
    const std::string prefix_text = std::string(key) + "=";
    if (token.substr(0, prefix_text.size()) != prefix_text)
        throw ParseError(source, 1, "expected '" + prefix_text + "...' in header");
    auto digits = token.substr(prefix_text.size());
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
        throw ParseError(source, 1, "invalid value for " + std::string(key));
    return value;
}

}  // namespace

AccuracyTrace read_trace(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source, 1, "missing TRACE header");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::istringstream header(line);
    std::string magic, version, role_tok, samples_tok, epochs_tok, extra;
    header >> magic >> version >> role_tok >> samples_tok >> epochs_tok;
    if (magic != "TRACE" || version != "v1")
        throw ParseError(source, 1, "header must start with 'TRACE v1'");
    if (header >> extra) throw ParseError(source, 1, "unexpected header token '" + extra + "'");
    if (role_tok.rfind("role=", 0) != 0) throw ParseError(source, 1, "expected 'role=...' in header");
    TraceRole role;
    try {
        role = parse_trace_role(std::string_view(role_tok).substr(5));
    } catch (const ArgumentError& e) {
        throw ParseError(source, 1, e.what());
    }
    const std::size_t n = parse_count_field(samples_tok, "samples", source);
    const std::size_t t = parse_count_field(epochs_tok, "epochs", source);
    if (n == 0 || t == 0) throw ParseError(source, 1, "samples and epochs must be positive");

    std::vector<std::uint8_t> bits;
    bits.reserve(n * t);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lineno = i + 2;
        if (!std::getline(in, line))
            throw ParseError(source, lineno, "expected " + std::to_string(n) + " rows, file ended early");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t cells = 0;
        std::size_t pos = 0;
        while (true) {
            auto comma = line.find(',', pos);
            std::string_view cell = std::string_view(line).substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (cell != "0" && cell != "1")
                throw ParseError(source, lineno, "cell " + std::to_string(cells + 1) + " is '" +
                                                     std::string(cell) + "', expected 0 or 1");
            if (++cells > t)
                throw ParseError(source, lineno, "row has more than " + std::to_string(t) + " cells");
            bits.push_back(static_cast<std::uint8_t>(cell[0] - '0'));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (cells != t)
            throw ParseError(source, lineno, "row has " + std::to_string(cells) + " cells, header says " +
                                                 std::to_string(t));
    }
    std::size_t lineno = n + 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line != "\r") throw ParseError(source, lineno, "unexpected extra row");
    }
    return AccuracyTrace(role, n, t, std::move(bits));
}

AccuracyTrace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open trace file");
    return read_trace(in, path.string());
}

}  // namespace regtrace
