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

#include "kerrchaos/section.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kerrchaos/error.hpp"

namespace kerrchaos {

BoundingBox bounding_box(std::span<const PhasePoint> points) {
    if (points.empty()) fail(ErrorKind::invalid_parameter, "bounding box of an empty point set");
    BoundingBox box{points[0].x, points[0].x, points[0].y, points[0].y};
    for (const auto& p : points) {
        box.x_min = std::min(box.x_min, p.x);
        box.x_max = std::max(box.x_max, p.x);
        box.y_min = std::min(box.y_min, p.y);
        box.y_max = std::max(box.y_max, p.y);
    }
    return box;
}

BoundingBox merge(const BoundingBox& a, const BoundingBox& b) noexcept {
    return {std::min(a.x_min, b.x_min), std::max(a.x_max, b.x_max), std::min(a.y_min, b.y_min),
            std::max(a.y_max, b.y_max)};
}

double box_overlap_fraction(const BoundingBox& a, const BoundingBox& b) noexcept {
    const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    const double smaller = std::min(a.width() * a.height(), b.width() * b.height());
    if (smaller <= 0.0) return 1.0;
    return std::min(1.0, w * h / smaller);
}

std::vector<double> occupancy_histogram(std::span<const PhasePoint> points, const BoundingBox& box,
                                        std::size_t bins) {
    if (bins == 0) fail(ErrorKind::invalid_parameter, "histogram needs at least one bin");
    std::vector<double> h(bins * bins, 0.0);
    // Degenerate extents (a collapsed attractor) still get a finite bin width.
    const double wx = std::max(box.width(), 1e-12);
    const double wy = std::max(box.height(), 1e-12);
    std::size_t kept = 0;
    for (const auto& p : points) {
        const double fx = (p.x - box.x_min) / wx;
        const double fy = (p.y - box.y_min) / wy;
        if (fx < 0.0 || fx > 1.0 || fy < 0.0 || fy > 1.0) continue;
        const auto ix = std::min(bins - 1, static_cast<std::size_t>(fx * double(bins)));
        const auto iy = std::min(bins - 1, static_cast<std::size_t>(fy * double(bins)));
        h[iy * bins + ix] += 1.0;
        ++kept;
    }
    if (kept > 0) {
        for (auto& v : h) v /= double(kept);
    }
    return h;
}

double bhattacharyya(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) fail(ErrorKind::dimension_mismatch, "histogram sizes differ");
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += std::sqrt(p[k] * q[k]);
    return s;
}

double attractor_similarity(std::span<const PhasePoint> a, std::span<const PhasePoint> b, std::size_t bins) {
    const BoundingBox box = merge(bounding_box(a), bounding_box(b));
    const auto ha = occupancy_histogram(a, box, bins);
    const auto hb = occupancy_histogram(b, box, bins);
    return bhattacharyya(ha, hb);
}

std::vector<PhasePoint> scaled(std::span<const PhasePoint> points, double factor) {
    std::vector<PhasePoint> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({p.x * factor, p.y * factor});
    return out;
}

double diameter(std::span<const PhasePoint> points) {
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::max(best, std::hypot(points[i].x - points[j].x, points[i].y - points[j].y));
        }
    }
    return best;
}

ClusterSummary cluster_points(std::span<const PhasePoint> points, double link) {
    const std::size_t n = points.size();
    std::vector<std::size_t> label(n, std::numeric_limits<std::size_t>::max());
    ClusterSummary summary;
    std::vector<std::size_t> stack;
    std::vector<PhasePoint> members;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (label[seed] != std::numeric_limits<std::size_t>::max()) continue;
        const std::size_t id = summary.count++;
        label[seed] = id;
        stack.assign(1, seed);
        members.clear();
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            members.push_back(points[i]);
            for (std::size_t j = 0; j < n; ++j) {
                if (label[j] != std::numeric_limits<std::size_t>::max()) continue;
                if (std::hypot(points[i].x - points[j].x, points[i].y - points[j].y) <= link) {
                    label[j] = id;
                    stack.push_back(j);
                }
            }
        }
        summary.max_diameter = std::max(summary.max_diameter, diameter(members));
    }
    return summary;
}

}  // namespace kerrchaos
