// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "regtrace/errors.hpp"

namespace regtrace {

std::size_t round_half_up(double value) {
    return static_cast<std::size_t>(std::floor(value + 0.5));
}

std::vector<std::size_t> LabeledDataset::ids_with(Split tag) const {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < split.size(); ++i)
        if (split[i] == tag) ids.push_back(i);
    return ids;
}

void LabeledDataset::validate() const {
    if (dim < 1) throw ArgumentError("dataset feature dimension must be >= 1");
    if (num_classes < 2) throw ArgumentError("dataset needs at least 2 classes");
    if (features.size() != labels.size() * dim || split.size() != labels.size())
        throw ArgumentError("dataset features, labels and split have inconsistent lengths");
    for (auto y : labels)
        if (y >= num_classes) throw ArgumentError("label " + std::to_string(y) + " >= class count");
}

LabeledDataset synth_mixture(const MixtureParams& p) {
    if (p.classes < 2) throw ArgumentError("synth_mixture: classes must be >= 2");
    if (p.per_class < 1) throw ArgumentError("synth_mixture: per_class must be >= 1");
    if (p.dim < 1) throw ArgumentError("synth_mixture: dim must be >= 1");
    if (!(p.noise_frac >= 0.0 && p.noise_frac < 1.0))
        throw ArgumentError("synth_mixture: noise_frac must be in [0, 1)");
    if (!(p.separation > 0.0)) throw ArgumentError("synth_mixture: separation must be > 0");

    const std::size_t n = p.classes * p.per_class;
    std::vector<double> centers(p.classes * p.dim, 0.0);
    if (p.dim >= p.classes) {
        // Scaled standard basis: every pair of vertices is `separation` apart.
        for (std::size_t c = 0; c < p.classes; ++c) centers[c * p.dim + c] = p.separation / std::sqrt(2.0);
    } else {
        for (std::size_t c = 0; c < p.classes; ++c) centers[c * p.dim] = p.separation * static_cast<double>(c);
    }

    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    LabeledDataset data;
    data.dim = p.dim;
    data.num_classes = p.classes;
    std::vector<double> drawn;
    drawn.reserve(n * p.dim);
    for (std::size_t c = 0; c < p.classes; ++c)
        for (std::size_t s = 0; s < p.per_class; ++s)
            for (std::size_t j = 0; j < p.dim; ++j) drawn.push_back(centers[c * p.dim + j] + gauss(rng));

    // Samples are emitted in random order so that id-based tie breaking
    // downstream does not favour any class.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    data.features.reserve(n * p.dim);
    data.labels.reserve(n);
    for (auto src : perm) {
        data.features.insert(data.features.end(), drawn.begin() + static_cast<std::ptrdiff_t>(src * p.dim),
                             drawn.begin() + static_cast<std::ptrdiff_t>((src + 1) * p.dim));
        data.labels.push_back(src / p.per_class);
    }
    data.split.assign(n, Split::train);

    const std::size_t noisy = round_half_up(p.noise_frac * static_cast<double>(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(noisy);
    std::sort(order.begin(), order.end());
    std::uniform_int_distribution<std::size_t> shift(1, p.classes - 1);
    for (auto id : order) data.labels[id] = (data.labels[id] + shift(rng)) % p.classes;
    data.irregular = std::move(order);
    return data;
}

LabeledDataset stratified_split(const LabeledDataset& data, double train_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0)) throw ArgumentError("split: train_frac must be in (0, 1)");
    data.validate();
    LabeledDataset out = data;
    for (std::size_t c = 0; c < data.num_classes; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.labels[i] == c) members.push_back(i);
        if (members.empty()) continue;
        if (members.size() < 2)
            throw ArgumentError("split: class " + std::to_string(c) + " has fewer than 2 samples");
        std::seed_seq seq{seed, static_cast<std::uint64_t>(c)};
        std::mt19937_64 rng(seq);
        std::shuffle(members.begin(), members.end(), rng);
        const std::size_t count = members.size();
        std::size_t n_train = round_half_up(train_frac * static_cast<double>(count));
        n_train = std::clamp<std::size_t>(n_train, 1, count - 1);
        for (std::size_t k = 0; k < count; ++k) out.split[members[k]] = k < n_train ? Split::train : Split::test;
    }
    return out;
}

LabeledDataset keep_train_subset(const LabeledDataset& data, std::span<const std::size_t> train_ids) {
    std::vector<char> keep(data.size(), 0);
    for (std::size_t i = 0; i < data.size(); ++i) keep[i] = data.split[i] == Split::test;
    for (auto id : train_ids) {
        if (id >= data.size() || data.split[id] != Split::train)
            throw ArgumentError("keep_train_subset: id " + std::to_string(id) + " is not a train sample");
        keep[id] = 1;
    }
    LabeledDataset out;
    out.dim = data.dim;
    out.num_classes = data.num_classes;
    std::vector<std::size_t> remap(data.size(), data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!keep[i]) continue;
        remap[i] = out.labels.size();
        auto r = data.row(i);
        out.features.insert(out.features.end(), r.begin(), r.end());
        out.labels.push_back(data.labels[i]);
        out.split.push_back(data.split[i]);
    }
    for (auto id : data.irregular)
        if (remap[id] != data.size()) out.irregular.push_back(remap[id]);
    return out;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        auto comma = line.find(',', pos);
        cells.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

LabeledDataset load_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
    auto header = split_commas(trim(line));
    for (auto& h : header) h = trim(h);
    if (header.size() < 2 || header.front() != "label")
        throw ParseError(source, 1, "header must be 'label,f1,...,fd[,split]'");
    const bool has_split = header.back() == "split";
    const std::size_t columns = header.size();
    const std::size_t dim = columns - 1 - (has_split ? 1 : 0);
    if (dim < 1) throw ParseError(source, 1, "header declares no feature columns");

    LabeledDataset data;
    data.dim = dim;
    std::size_t lineno = 1;
    std::size_t max_label = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto text = trim(line);
        if (text.empty()) continue;
        auto cells = split_commas(text);
        if (cells.size() != columns)
            throw ParseError(source, lineno, "expected " + std::to_string(columns) + " columns, got " +
                                                 std::to_string(cells.size()));
        auto label_text = trim(cells[0]);
        std::size_t label = 0;
        auto [lp, lec] = std::from_chars(label_text.data(), label_text.data() + label_text.size(), label);
        if (lec != std::errc() || lp != label_text.data() + label_text.size() || label_text.empty())
            throw ParseError(source, lineno, "label '" + std::string(label_text) + "' is not a class index");
        for (std::size_t j = 1; j <= dim; ++j) {
            auto cell = trim(cells[j]);
            double v = 0.0;
            auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || p != cell.data() + cell.size() || cell.empty() || !std::isfinite(v))
                throw ParseError(source, lineno, "non-numeric cell '" + std::string(cell) + "' in column " +
                                                     std::to_string(j + 1));
            data.features.push_back(v);
        }
        Split tag = Split::train;
        if (has_split) {
            auto s = trim(cells.back());
            if (s == "train") tag = Split::train;
            else if (s == "test") tag = Split::test;
            else throw ParseError(source, lineno, "split must be 'train' or 'test', got '" + std::string(s) + "'");
        }
        data.labels.push_back(label);
        data.split.push_back(tag);
        max_label = std::max(max_label, label);
    }
    if (data.labels.empty()) throw ParseError(source, lineno, "no data rows");
    data.num_classes = std::max<std::size_t>(2, max_label + 1);
    return data;
}

LabeledDataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open dataset file");
    return load_csv(in, path.string());
}

void write_csv(const LabeledDataset& data, std::ostream& out) {
    out << "label";
    for (std::size_t j = 1; j <= data.dim; ++j) out << ",f" << j;
    out << ",split\n";
    char buf[32];
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.labels[i];
        for (double v : data.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << ',' << (data.split[i] == Split::train ? "train" : "test") << '\n';
    }
}

void write_csv(const LabeledDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(data, out);
}

}  // namespace regtrace
