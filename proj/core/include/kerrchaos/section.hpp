// Copyright 2026 The kerrchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kerrchaos {

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

enum class SectionProvenance { classical, quantum };

/// Stroboscopic map: phase-space points at t_n = t0 + period * n, n >= skipped.
struct PoincareSection {
    std::vector<PhasePoint> points;
    double t0 = 0.0;
    double period = 0.0;
    std::size_t skipped = 0;
    SectionProvenance provenance = SectionProvenance::classical;
};

/// Axis-aligned box; used to share histogram ranges between sections.
struct BoundingBox {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    double width() const noexcept { return x_max - x_min; }
    double height() const noexcept { return y_max - y_min; }
};

BoundingBox bounding_box(std::span<const PhasePoint> points);
BoundingBox merge(const BoundingBox& a, const BoundingBox& b) noexcept;
/// Overlap area divided by the smaller box area (0 when disjoint).
double box_overlap_fraction(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Normalized bins x bins occupancy histogram over `box` (row-major, y outer).
/// Points outside the box are dropped.
std::vector<double> occupancy_histogram(std::span<const PhasePoint> points, const BoundingBox& box,
                                        std::size_t bins = 64);

/// sum_k sqrt(p_k q_k) for two normalized histograms of equal length.
double bhattacharyya(std::span<const double> p, std::span<const double> q);

/// Bhattacharyya coefficient of the 64x64 histograms of two point sets over
/// their common bounding box.
double attractor_similarity(std::span<const PhasePoint> a, std::span<const PhasePoint> b,
                            std::size_t bins = 64);

std::vector<PhasePoint> scaled(std::span<const PhasePoint> points, double factor);

/// Largest pairwise distance.
double diameter(std::span<const PhasePoint> points);

/// Greedy single-link clusters with linkage distance `link`; returns the
/// number of clusters and the largest cluster diameter.
struct ClusterSummary {
    std::size_t count = 0;
    double max_diameter = 0.0;
};
ClusterSummary cluster_points(std::span<const PhasePoint> points, double link);

}  // namespace kerrchaos
