// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "regtrace/dataset.hpp"
#include "regtrace/errors.hpp"

using namespace regtrace;

TEST_CASE("synth_mixture flags exactly round(noise_frac * N) samples") {
    MixtureParams p;
    p.classes = 2;
    p.per_class = 10;
    p.dim = 3;
    p.noise_frac = 0.0;
    CHECK(synth_mixture(p).irregular.empty());

    p.noise_frac = 0.1;
    auto data = synth_mixture(p);
    CHECK(data.irregular.size() == 2);
    data.validate();
    CHECK(data.size() == 20);
    // The noise-free twin shares features and order; labels differ exactly at the flagged ids.
    auto clean_params = p;
    clean_params.noise_frac = 0.0;
    auto clean = synth_mixture(clean_params);
    CHECK(clean.features == data.features);
    std::vector<std::size_t> differing;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (data.labels[i] != clean.labels[i]) differing.push_back(i);
    CHECK(differing == data.irregular);
    std::vector<std::size_t> per_class(2, 0);
    for (auto y : clean.labels) per_class[y] += 1;
    CHECK(per_class == std::vector<std::size_t>{10, 10});
}

TEST_CASE("synth_mixture is deterministic in its seed") {
    MixtureParams p;
    p.seed = 99;
    CHECK(synth_mixture(p) == synth_mixture(p));
    auto other = p;
    other.seed = 100;
    CHECK_FALSE(synth_mixture(p) == synth_mixture(other));
}

TEST_CASE("synth_mixture cluster means are separated") {
    MixtureParams p;
    p.classes = 3;
    p.per_class = 4000;
    p.dim = 4;
    p.separation = 5.0;
    p.noise_frac = 0.0;
    auto data = synth_mixture(p);
    std::vector<std::vector<double>> mean(3, std::vector<double>(4, 0.0));
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t j = 0; j < 4; ++j) mean[data.labels[i]][j] += data.row(i)[j] / 4000.0;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            double d2 = 0;
            for (int j = 0; j < 4; ++j) d2 += (mean[a][j] - mean[b][j]) * (mean[a][j] - mean[b][j]);
            CHECK(std::sqrt(d2) == doctest::Approx(5.0).epsilon(0.03));
        }

    p.dim = 1;  // fewer dims than classes: centers on a line
    auto line = synth_mixture(p);
    line.validate();
}

TEST_CASE("synth_mixture rejects bad arguments") {
    MixtureParams p;
    p.classes = 1;
    CHECK_THROWS_AS(synth_mixture(p), ArgumentError);
    p = {};
    p.noise_frac = 1.0;
    CHECK_THROWS_AS(synth_mixture(p), ArgumentError);
    p = {};
    p.separation = 0.0;
    CHECK_THROWS_AS(synth_mixture(p), ArgumentError);
    p = {};
    p.per_class = 0;
    CHECK_THROWS_AS(synth_mixture(p), ArgumentError);
}

namespace {

LabeledDataset with_class_counts(std::vector<std::size_t> counts) {
    LabeledDataset d;
    d.dim = 1;
    d.num_classes = counts.size();
    for (std::size_t c = 0; c < counts.size(); ++c)
        for (std::size_t k = 0; k < counts[c]; ++k) {
            d.features.push_back(static_cast<double>(d.labels.size()));
            d.labels.push_back(c);
            d.split.push_back(Split::train);
        }
    return d;
}

std::map<std::size_t, std::size_t> train_per_class(const LabeledDataset& d) {
    std::map<std::size_t, std::size_t> m;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.split[i] == Split::train) m[d.labels[i]] += 1;
    return m;
}

}  // namespace

TEST_CASE("stratified split rounds per class") {
    auto even = stratified_split(with_class_counts({10, 10}), 0.5, 1);
    CHECK(train_per_class(even) == std::map<std::size_t, std::size_t>{{0, 5}, {1, 5}});

    // round-half-up of 0.5 * {4, 6}
    auto uneven = stratified_split(with_class_counts({4, 6}), 0.5, 1);
    CHECK(train_per_class(uneven) == std::map<std::size_t, std::size_t>{{0, 2}, {1, 3}});

    auto data = with_class_counts({7, 9, 13});
    CHECK(stratified_split(data, 0.3, 5) == stratified_split(data, 0.3, 5));
    CHECK_FALSE(stratified_split(data, 0.3, 5).split == stratified_split(data, 0.3, 6).split);

    CHECK_THROWS_AS(stratified_split(with_class_counts({1, 5}), 0.5, 1), ArgumentError);
    CHECK_THROWS_AS(stratified_split(data, 0.0, 1), ArgumentError);
    CHECK_THROWS_AS(stratified_split(data, 1.0, 1), ArgumentError);
}

TEST_CASE("property: per-class train fraction is within 1/count of train_frac") {
    for (std::size_t count = 2; count < 40; ++count)
        for (double frac : {0.05, 0.25, 0.5, 0.7, 0.95}) {
            auto d = stratified_split(with_class_counts({count, count + 3}), frac, count);
            auto m = train_per_class(d);
            CHECK(std::abs(static_cast<double>(m[0]) / count - frac) < 1.0 / count);
            CHECK(std::abs(static_cast<double>(m[1]) / (count + 3) - frac) < 1.0 / (count + 3));
        }
}

TEST_CASE("keep_train_subset drops unlisted train samples only") {
    auto d = stratified_split(with_class_counts({4, 4}), 0.5, 2);
    d.irregular = d.ids_with(Split::train);
    auto train = d.ids_with(Split::train);
    std::vector<std::size_t> keep{train[1], train[3]};
    auto sub = keep_train_subset(d, keep);
    CHECK(sub.size() == 6);
    CHECK(sub.ids_with(Split::train).size() == 2);
    CHECK(sub.irregular.size() == 2);
    CHECK_THROWS_AS(keep_train_subset(d, std::vector<std::size_t>{d.ids_with(Split::test)[0]}), ArgumentError);
}

TEST_CASE("load_csv") {
    std::istringstream two("label,f1,f2\n0,1.5,2\n1,-3,4e-1\n");
    auto d = load_csv(two);
    CHECK(d.size() == 2);
    CHECK(d.dim == 2);
    CHECK(d.num_classes == 2);
    CHECK(d.split == std::vector<Split>{Split::train, Split::train});
    CHECK(d.row(1)[1] == doctest::Approx(0.4));

    std::istringstream gap("label,f1\n0,1\n2,3\n");
    CHECK(load_csv(gap).num_classes == 3);

    std::istringstream tagged("label,f1,split\n0,1,test\n1,2,train\n");
    CHECK(load_csv(tagged).split == std::vector<Split>{Split::test, Split::train});

    auto error_line = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            load_csv(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(error_line("label,f1,f2\n0,1,2\n1,3\n") == 3);
    CHECK(error_line("label,f1,f2\n0,1,x\n") == 2);
    CHECK(error_line("label,f1\n-1,1\n") == 2);
    CHECK(error_line("label,f1,split\n0,1,val\n") == 2);
    CHECK(error_line("f1,label\n0,1\n") == 1);
}

TEST_CASE("csv write then load preserves the dataset") {
    MixtureParams p;
    p.per_class = 5;
    auto d = stratified_split(synth_mixture(p), 0.6, 3);
    std::stringstream buf;
    write_csv(d, buf);
    auto back = load_csv(buf);
    d.irregular.clear();
    CHECK(back == d);
}
