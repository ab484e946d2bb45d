// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "regtrace/errors.hpp"

namespace regtrace {

std::vector<RepresentationPoint> to_points(std::span<const RegularityRecord> records) {
    std::vector<RepresentationPoint> points;
    points.reserve(records.size());
    for (const auto& r : records)
        points.push_back({static_cast<double>(r.cumulative_loss), static_cast<double>(r.event_count), r.sample_id});
    return points;
}

double default_radius(double x_range, double y_range) {
    if (!(x_range >= 0.0) || !(y_range >= 0.0)) throw ArgumentError("default_radius: ranges must be >= 0");
    if (x_range == 0.0 && y_range == 0.0) throw ArgumentError("default_radius: both ranges are zero");
    return std::hypot(x_range / 30.0, y_range / 30.0);
}

std::pair<double, double> axis_ranges(std::span<const RepresentationPoint> points) {
    double x = 0.0, y = 0.0;
    for (const auto& p : points) {
        x = std::max(x, p.x);
        y = std::max(y, p.y);
    }
    return {x, y};
}

namespace {

struct CellKey {
    long long cx;
    long long cy;
    bool operator==(const CellKey&) const = default;
};

struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept {
        return std::hash<long long>()(k.cx * 0x9E3779B97F4A7C15LL ^ k.cy);
    }
};

}  // namespace

DensityMap density_map(std::span<const RepresentationPoint> points, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ArgumentError("density_map: radius must be > 0");
    if (points.empty()) throw ArgumentError("density_map: no points");

    // Coincident points are counted once with their multiplicity, which keeps
    // the cost bounded when most samples share a coordinate.
    std::vector<RepresentationPoint> sites;
    std::vector<std::size_t> weight;
    std::vector<std::size_t> site_of(points.size());
    {
        std::vector<std::size_t> order(points.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return points[a].x != points[b].x ? points[a].x < points[b].x : points[a].y < points[b].y;
        });
        for (auto i : order) {
            if (sites.empty() || sites.back().x != points[i].x || sites.back().y != points[i].y) {
                sites.push_back(points[i]);
                weight.push_back(0);
            }
            weight.back() += 1;
            site_of[i] = sites.size() - 1;
        }
    }

    // Any pair within r differs by at most one cell index per axis, with
    // margin against rounding in the division.
    const double cell = radius * (1.0 + 1e-9);
    auto key_of = [cell](const RepresentationPoint& p) {
        return CellKey{static_cast<long long>(std::floor(p.x / cell)), static_cast<long long>(std::floor(p.y / cell))};
    };
    std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
    for (std::size_t s = 0; s < sites.size(); ++s) grid[key_of(sites[s])].push_back(s);

    std::vector<std::size_t> site_counts(sites.size(), 0);
    const double r2 = radius * radius;
    for (const auto& [key, members] : grid) {
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find(CellKey{key.cx + dx, key.cy + dy});
                if (it == grid.end()) continue;
                for (auto a : members) {
                    std::size_t c = 0;
                    for (auto b : it->second) {
                        const double ddx = sites[a].x - sites[b].x;
                        const double ddy = sites[a].y - sites[b].y;
                        if (ddx * ddx + ddy * ddy <= r2) c += weight[b];
                    }
                    site_counts[a] += c;
                }
            }
    }

    DensityMap map;
    map.radius = radius;
    map.counts.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) map.counts[i] = site_counts[site_of[i]];
    const double area = std::numbers::pi * radius * radius;
    map.values.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) map.values[i] = static_cast<double>(map.counts[i]) / area;
    return map;
}

std::vector<double> normalized_density_vector(const DensityMap& map) {
    if (map.values.empty()) throw ArgumentError("normalized_density_vector: empty map");
    double norm2 = 0.0;
    for (double v : map.values) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0)) throw ArgumentError("normalized_density_vector: zero vector");
    std::vector<double> out(map.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = map.values[i] / norm;
    return out;
}

}  // namespace regtrace
