// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Bi-dimensional representation (cumulative loss, event count) and the
// neighbourhood density of each point in it: the number of points inside
// the closed disk of radius r around the point (itself included) divided
// by the disk area.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "regtrace/trace.hpp"

namespace regtrace {

struct RepresentationPoint {
    double x = 0.0;  // cumulative loss
    double y = 0.0;  // event count
    std::size_t sample_id = 0;
};

std::vector<RepresentationPoint> to_points(std::span<const RegularityRecord> records);

struct DensityMap {
    double radius = 0.0;
    std::vector<std::size_t> counts;  // points in each disk, self included
    std::vector<double> values;       // counts / (pi r^2)
};

/// sqrt((x_range / 30)^2 + (y_range / 30)^2)
double default_radius(double x_range, double y_range);

/// Axis extents of the representation measured from the origin: (max x, max y).
std::pair<double, double> axis_ranges(std::span<const RepresentationPoint> points);

/// Grid-bucketed neighbour counting with cells slightly larger than r.
DensityMap density_map(std::span<const RepresentationPoint> points, double radius);

/// Density values scaled to unit Euclidean norm.
std::vector<double> normalized_density_vector(const DensityMap& map);

}  // namespace regtrace
