// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "regtrace/errors.hpp"
#include "regtrace/stats.hpp"

using namespace regtrace;

namespace {

AccuracyTrace rows_trace(TraceRole role, const std::vector<std::vector<std::uint8_t>>& rows) {
    std::vector<std::uint8_t> bits;
    for (const auto& r : rows) bits.insert(bits.end(), r.begin(), r.end());
    return AccuracyTrace(role, rows.size(), rows.front().size(), bits);
}

AccuracyTrace random_trace(std::mt19937_64& rng, TraceRole role, std::size_t n, std::size_t t) {
    std::vector<std::vector<std::uint8_t>> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(oracle::random_row(rng, t));
    return rows_trace(role, rows);
}

std::set<std::size_t> epoch_set(const AccuracyTrace& t, std::size_t i) {
    auto e = event_epochs(t, i);
    return {e.begin(), e.end()};
}

}  // namespace

TEST_CASE("pearson") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    std::vector<double> affine, neg;
    for (double x : xs) {
        affine.push_back(2 * x + 3);
        neg.push_back(-x);
    }
    CHECK(pearson(xs, affine) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(xs, neg) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pearson(xs, xs) == 1.0);
    CHECK_THROWS_AS(pearson(xs, std::vector<double>(5, 2.0)), UndefinedCorrelation);
    CHECK_THROWS_AS(pearson(xs, std::vector<double>{1, 2}), ArgumentError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), ArgumentError);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int draw = 0; draw < 50; ++draw) {
        std::vector<double> a(3 + rng() % 50), b(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = g(rng);
            b[i] = 0.5 * a[i] + g(rng);
        }
        CHECK(pearson(a, b) == doctest::Approx(oracle::pearson(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("spearman") {
    CHECK(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 4, 3}) ==
          doctest::Approx(0.8).epsilon(1e-15));
    CHECK(spearman(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{9, 7, 5, 3, 1}) == doctest::Approx(-1.0));

    CHECK(average_ranks(std::vector<double>{10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});

    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int draw = 0; draw < 200; ++draw) {
        std::vector<double> xs(2 + rng() % 40);
        for (auto& x : xs) x = std::round(u(rng) * 4) / 4;  // include ties
        if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) continue;
        const double a = 0.1 + std::abs(u(rng));
        std::vector<double> ys;
        for (double x : xs) ys.push_back(std::exp(a * x) + x * x * x);  // strictly increasing
        REQUIRE(spearman(xs, ys) == doctest::Approx(1.0).epsilon(1e-12));
        std::vector<double> other(xs.size());
        for (auto& o : other) o = u(rng);
        REQUIRE(average_ranks(xs) == oracle::ranks(xs));
        REQUIRE(spearman(xs, other) == doctest::Approx(oracle::pearson(oracle::ranks(xs), oracle::ranks(other))));
    }
}

TEST_CASE("histogram") {
    auto h = histogram(std::vector<std::size_t>{0, 0, 1}, 1);
    CHECK(h.counts == std::vector<std::size_t>{2, 1});
    CHECK(h.lower_edges == std::vector<std::size_t>{0, 1});

    auto zeros = histogram(std::vector<std::size_t>(7, 0), 1);
    CHECK(zeros.counts == std::vector<std::size_t>{7});
    auto sevens = histogram(std::vector<std::size_t>(5, 7), 3);
    CHECK(std::count_if(sevens.counts.begin(), sevens.counts.end(), [](auto c) { return c > 0; }) == 1);
    CHECK(sevens.counts.back() == 5);

    std::vector<std::size_t> ten(10);
    for (std::size_t i = 0; i < 10; ++i) ten[i] = i;
    CHECK(histogram(ten, 5).counts == std::vector<std::size_t>{5, 5});
    CHECK(histogram(ten, 5, 14).counts == std::vector<std::size_t>{5, 5, 0});
    CHECK_THROWS_AS(histogram(ten, 0), ArgumentError);

    std::mt19937_64 rng(1);
    for (int draw = 0; draw < 100; ++draw) {
        std::vector<std::size_t> v(rng() % 300);
        for (auto& x : v) x = rng() % 90;
        auto hh = histogram(v, 1 + rng() % 12);
        std::size_t total = 0;
        for (auto c : hh.counts) total += c;
        REQUIRE(total == v.size());
    }
}

TEST_CASE("run correlation") {
    std::vector<double> v{0.1, 0.5, 0.3, 0.8};
    auto same = run_correlation({v, v});
    CHECK(same.entries == std::vector<double>{1, 1, 1, 1});
    CHECK(same.off_diagonal_mean == 1.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (std::size_t k = 2; k < 7; ++k) {
        std::vector<double> w(30);
        for (auto& x : w) x = u(rng);
        auto copies = run_correlation(std::vector<std::vector<double>>(k, w));
        CHECK(std::all_of(copies.entries.begin(), copies.entries.end(), [](double e) { return e == 1.0; }));
    }

    std::vector<std::vector<double>> runs(3, std::vector<double>(20));
    for (auto& r : runs)
        for (auto& x : r) x = u(rng);
    auto m = run_correlation(runs);
    CHECK(m.n_runs == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m.at(i, i) == 1.0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(m.at(i, j) == m.at(j, i));
            CHECK(std::abs(m.at(i, j)) <= 1.0);
        }
    }
    CHECK(m.off_diagonal_mean == doctest::Approx((m.at(0, 1) + m.at(0, 2) + m.at(1, 2)) / 3.0));
    CHECK_THROWS_AS(run_correlation({v}), ArgumentError);
    CHECK_THROWS_AS(run_correlation({v, {1, 2}}), ArgumentError);
}

TEST_CASE("synchronization examples") {
    // test sample 0 has no events, sample 1 = [1,0,1,0]
    auto test = rows_trace(TraceRole::test, {{0, 0, 0, 0, 0, 0}, {1, 0, 1, 0, 1, 1}});
    auto train = rows_trace(TraceRole::train, {{1, 0, 1, 0, 1, 1}, {1, 1, 1, 0, 1, 0}, {1, 1, 1, 1, 1, 1}});
    auto identical = synchronization_counts(test, train, SyncMode::identical_sets);
    auto shared = synchronization_counts(test, train, SyncMode::shared_epoch);
    CHECK(identical == std::vector<std::size_t>{0, 1});
    // test epochs {2,4}; train 1 has {4,6}: intersects but is not equal
    CHECK(shared == std::vector<std::size_t>{0, 2});

    auto short_train = rows_trace(TraceRole::train, {{1, 0}});
    CHECK_THROWS_AS(synchronization_counts(test, short_train, SyncMode::shared_epoch), ArgumentError);
}

TEST_CASE("property: synchronization counts match a set-operation oracle") {
    std::mt19937_64 rng(17);
    for (int draw = 0; draw < 20; ++draw) {
        const std::size_t t = 2 + rng() % 8;
        auto test = random_trace(rng, TraceRole::test, 1 + rng() % 30, t);
        auto train = random_trace(rng, TraceRole::train, 1 + rng() % 150, t);
        auto identical = synchronization_counts(test, train, SyncMode::identical_sets);
        auto shared = synchronization_counts(test, train, SyncMode::shared_epoch);
        std::set<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < test.n_samples(); ++i) {
            const auto ei = epoch_set(test, i);
            std::size_t eq = 0, inter = 0;
            for (std::size_t j = 0; j < train.n_samples(); ++j) {
                const auto ej = epoch_set(train, j);
                if (ei.empty()) continue;
                if (ei == ej) {
                    ++eq;
                    pairs.insert({i, j});
                }
                bool any = false;
                for (auto e : ei) any = any || ej.count(e);
                inter += any;
            }
            REQUIRE(identical[i] == eq);
            REQUIRE(shared[i] == inter);
            REQUIRE(identical[i] <= shared[i]);
        }
        // Swapping roles yields the transposed pair set.
        auto swapped_test = AccuracyTrace(TraceRole::test, train.n_samples(), t,
                                          std::vector<std::uint8_t>(train.bits().begin(), train.bits().end()));
        auto swapped_train = AccuracyTrace(TraceRole::train, test.n_samples(), t,
                                           std::vector<std::uint8_t>(test.bits().begin(), test.bits().end()));
        auto back = synchronization_counts(swapped_test, swapped_train, SyncMode::identical_sets);
        for (std::size_t j = 0; j < back.size(); ++j) {
            std::size_t expected = 0;
            for (const auto& [pi, pj] : pairs) expected += pj == j;
            REQUIRE(back[j] == expected);
        }
    }
}

TEST_CASE("event distribution similarity") {
    std::mt19937_64 rng(23);
    auto a = random_trace(rng, TraceRole::train, 200, 20);
    CHECK(event_distribution_similarity(a, a, 1) == 1.0);

    auto never = rows_trace(TraceRole::train, std::vector<std::vector<std::uint8_t>>(5, {1, 1, 1, 1}));
    auto always = rows_trace(TraceRole::test, std::vector<std::vector<std::uint8_t>>(5, {1, 0, 0, 1}));
    CHECK(event_distribution_similarity(never, always, 1) == doctest::Approx(-1.0));
    auto twice = rows_trace(TraceRole::test, std::vector<std::vector<std::uint8_t>>(5, {1, 0, 1, 0}));
    CHECK(event_distribution_similarity(never, twice, 1) < 0.0);

    for (int draw = 0; draw < 20; ++draw) {
        auto tr = random_trace(rng, TraceRole::train, 100, 30);
        auto te = random_trace(rng, TraceRole::test, 60, 30);
        const std::size_t width = 1 + rng() % 3;
        std::vector<std::size_t> ea, eb;
        for (std::size_t i = 0; i < tr.n_samples(); ++i) ea.push_back(event_count(tr, i, 30));
        for (std::size_t i = 0; i < te.n_samples(); ++i) eb.push_back(event_count(te, i, 30));
        const std::size_t top = std::max(*std::max_element(ea.begin(), ea.end()), *std::max_element(eb.begin(), eb.end()));
        auto ha = histogram(ea, width, top), hb = histogram(eb, width, top);
        std::vector<double> ca(ha.counts.begin(), ha.counts.end()), cb(hb.counts.begin(), hb.counts.end());
        CHECK(event_distribution_similarity(tr, te, width) == doctest::Approx(oracle::pearson(ca, cb)).epsilon(1e-9));
    }
}
