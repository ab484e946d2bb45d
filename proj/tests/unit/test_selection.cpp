// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "regtrace/errors.hpp"
#include "regtrace/selection.hpp"

using namespace regtrace;

namespace {

std::vector<RegularityRecord> records_with_loss(const std::vector<std::size_t>& loss) {
    std::vector<RegularityRecord> r;
    for (std::size_t i = 0; i < loss.size(); ++i) r.push_back({i, loss[i], 0, 20});
    return r;
}

// Brute-force top-i overlap average.
double map_oracle(const std::vector<double>& full, const std::vector<double>& comp) {
    auto top = [](const std::vector<double>& s, std::size_t i) {
        std::vector<std::size_t> idx(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) idx[k] = k;
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s[a] > s[b]; });
        return std::set<std::size_t>(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(i));
    };
    double total = 0;
    for (std::size_t i = 1; i <= full.size(); ++i) {
        auto a = top(full, i), b = top(comp, i);
        std::size_t common = 0;
        for (auto x : a) common += b.count(x);
        total += static_cast<double>(common) / i;
    }
    return total / full.size();
}

}  // namespace

TEST_CASE("prune examples") {
    auto recs = records_with_loss({3, 1, 4, 1, 5, 9, 2, 6, 5, 3});
    PruneStrategy cbtl{PruneKind::cbtl_desc};
    CHECK(prune(recs, nullptr, cbtl, 0.0) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});

    PruneStrategy rnd{PruneKind::random, 1.0, 42};
    auto kept = prune(recs, nullptr, rnd, 0.3);
    CHECK(kept.size() == 7);
    CHECK(prune(recs, nullptr, rnd, 0.3) == kept);
    CHECK(std::is_sorted(kept.begin(), kept.end()));

    auto four = records_with_loss({5, 9, 9, 1});
    CHECK(prune(four, nullptr, cbtl, 0.5) == std::vector<std::size_t>{0, 3});
    PruneStrategy easiest_last{PruneKind::cbtl_desc};
    easiest_last.reverse = true;
    CHECK(prune(four, nullptr, easiest_last, 0.5) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("prune by density and by events") {
    std::vector<RegularityRecord> recs{{0, 10, 0, 10}, {1, 10, 0, 10}, {2, 10, 0, 10}, {3, 4, 3, 10}, {4, 6, 1, 10}};
    auto pts = to_points(recs);
    auto dm = density_map(pts, 1.0);
    PruneStrategy dens{PruneKind::density_desc, 1.0};
    // The three coincident points are densest; ties remove lower ids first.
    CHECK(prune(recs, &dm, dens, 0.4) == std::vector<std::size_t>{2, 3, 4});

    PruneStrategy forget{PruneKind::forgetting_asc};
    CHECK(prune(recs, nullptr, forget, 0.6) == std::vector<std::size_t>{3, 4});
}

TEST_CASE("prune argument errors") {
    auto recs = records_with_loss({1, 2, 3});
    PruneStrategy cbtl{PruneKind::cbtl_desc};
    CHECK_THROWS_AS(prune(recs, nullptr, cbtl, 1.0), ArgumentError);
    CHECK_THROWS_AS(prune(recs, nullptr, cbtl, -0.1), ArgumentError);
    CHECK_THROWS_AS(prune(recs, nullptr, PruneStrategy{PruneKind::density_desc}, 0.2), ArgumentError);
    auto dm = density_map(to_points(recs), 1.0);
    CHECK_THROWS_AS(prune(recs, &dm, cbtl, 0.2), ArgumentError);
}

TEST_CASE("property: prune determinism and size") {
    std::mt19937_64 rng(12);
    for (int draw = 0; draw < 50; ++draw) {
        std::vector<RegularityRecord> recs;
        const std::size_t n = 1 + rng() % 200;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t loss = rng() % 31;
            recs.push_back({i, loss, std::min<std::size_t>(rng() % 8, loss), 30});
        }
        const double f = (rng() % 100) / 100.0;
        const auto expected = n - round_half_up(f * n);
        for (auto kind : {PruneKind::cbtl_desc, PruneKind::forgetting_asc}) {
            PruneStrategy a{kind, 1.0, 1}, b{kind, 1.0, 999};
            auto ka = prune(recs, nullptr, a, f);
            REQUIRE(ka == prune(recs, nullptr, b, f));
            REQUIRE(ka.size() == expected);
        }
        auto dm = density_map(to_points(recs), 1.0);
        PruneStrategy d{PruneKind::density_desc, 1.0};
        REQUIRE(prune(recs, &dm, d, f).size() == expected);
        PruneStrategy r{PruneKind::random, 1.0, 5};
        REQUIRE(prune(recs, nullptr, r, f) == prune(recs, nullptr, r, f));
    }
}

TEST_CASE("angular bins: axis rules and sectors") {
    // x range [0, 20] puts the center at 10.
    std::vector<RepresentationPoint> pts{{0, 0, 0}, {20, 0, 1}, {5, 0, 2}, {15, 0, 3}, {10, 7, 4}, {10, 0, 5}};
    auto b = angular_bins(pts, 18);
    CHECK(b.center_x == 10.0);
    CHECK(b.bin_count == 12);
    CHECK(b.bins[2] == 0);
    CHECK(b.bins[3] == 11);
    CHECK(b.bins[4] == 5);
    CHECK(b.bins[5] == 11);  // the center itself

    auto b45 = angular_bins(pts, 45);
    CHECK(b45.bin_count == 6);

    CHECK_THROWS_AS(angular_bins(pts, 50), ArgumentError);
    CHECK_THROWS_AS(angular_bins(pts, 0), ArgumentError);
    CHECK_THROWS_AS(angular_bins(std::vector<RepresentationPoint>{}, 18), ArgumentError);
}

TEST_CASE("angular bins: boundary points fall in the lower sector") {
    // center 0 via symmetric x extent
    for (double s : {18.0, 45.0, 30.0, 60.0}) {
        const auto sectors = static_cast<std::size_t>(180.0 / s);
        std::vector<RepresentationPoint> pts{{-50, 0, 0}, {50, 0, 1}};
        for (std::size_t k = 1; k < sectors; ++k) {
            const double theta = k * s * std::numbers::pi / 180.0;
            pts.push_back({-10.0 * std::cos(theta), 10.0 * std::sin(theta), 1 + k});
        }
        auto b = angular_bins(pts, s);
        REQUIRE(b.center_x == 0.0);
        for (std::size_t k = 1; k < sectors; ++k) CHECK(b.bins[1 + k] == k);
        // Just past each boundary goes to the next sector.
        std::vector<RepresentationPoint> past{{-50, 0, 0}, {50, 0, 1}};
        for (std::size_t k = 1; k < sectors; ++k) {
            const double theta = (k * s + 0.01) * std::numbers::pi / 180.0;
            past.push_back({-10.0 * std::cos(theta), 10.0 * std::sin(theta), 1 + k});
        }
        auto bp = angular_bins(past, s);
        for (std::size_t k = 1; k < sectors; ++k) CHECK(bp.bins[1 + k] == k + 1);
    }
}

TEST_CASE("property: angular bins partition the points") {
    std::mt19937_64 rng(77);
    for (int draw = 0; draw < 20; ++draw) {
        std::vector<RepresentationPoint> pts;
        const std::size_t n = 1 + rng() % 2000;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(rng() % 61);
            pts.push_back({x, static_cast<double>(rng() % (1 + static_cast<std::size_t>(x) / 2 + 1)), i});
        }
        for (double s : {18.0, 45.0, 10.0}) {
            auto b = angular_bins(pts, s);
            REQUIRE(b.bins.size() == n);
            auto sizes = b.bin_sizes();
            std::size_t total = 0;
            for (auto c : sizes) total += c;
            REQUIRE(total == n);
            for (auto bin : b.bins) REQUIRE(bin < b.bin_count);
        }
    }
}

TEST_CASE("stratified sample sizes") {
    AngularBinning b;
    b.sector_deg = 18;
    b.bin_count = 12;
    std::size_t id = 0;
    for (std::size_t bin = 0; bin < 12; ++bin) {
        const std::size_t size = bin == 0 ? 3 : 40 + bin;
        for (std::size_t k = 0; k < size; ++k) {
            b.bins.push_back(bin);
            b.sample_ids.push_back(id++);
        }
    }
    auto s = stratified_sample(b, 30, {0}, 9);
    CHECK(s.size() == 333);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 333);
    CHECK(stratified_sample(b, 30, {0}, 9) == s);
    CHECK_FALSE(stratified_sample(b, 30, {0}, 10) == s);
    for (std::size_t n = 1; n <= 41; ++n) CHECK(stratified_sample(b, n, {0}, 1).size() == 11 * n + 3);

    auto all = stratified_sample(b, 1000, {}, 1);
    CHECK(all.size() == id);
    CHECK(stratified_sample(b, 5, {0, 3}, 1).size() == 3 + 43 + 10 * 5);
    CHECK_THROWS_AS(stratified_sample(b, 0, {}, 1), ArgumentError);
}

TEST_CASE("compression fidelity") {
    std::vector<double> full{0.9, 0.8, 0.7, 0.6, 0.5};
    auto same = compression_fidelity(full, full);
    CHECK(same.spearman == 1.0);
    CHECK(same.map_at_k == 1.0);

    std::vector<double> reversed(full.rbegin(), full.rend());
    CHECK(compression_fidelity(full, reversed).spearman == doctest::Approx(-1.0));

    std::vector<double> four{0.9, 0.8, 0.7, 0.6};
    std::vector<double> swapped{0.8, 0.9, 0.7, 0.6};
    CHECK(map_at_k(four, swapped) == doctest::Approx(0.75).epsilon(1e-15));

    std::vector<double> flat(5, 0.5);
    CHECK(compression_fidelity(full, flat).spearman == 0.0);
    CHECK_THROWS_AS(compression_fidelity(full, four), ArgumentError);
    CHECK_THROWS_AS(compression_fidelity(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ArgumentError);

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> u(0, 10);
    for (int draw = 0; draw < 200; ++draw) {
        std::vector<double> a(3 + rng() % 8), c(a.size());
        for (auto& x : a) x = u(rng);
        for (auto& x : c) x = u(rng);
        REQUIRE(map_at_k(a, c) == doctest::Approx(map_oracle(a, c)).epsilon(1e-12));
    }
}
