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

#include "kerrchaos/contour.hpp"

#include <array>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>

#include "kerrchaos/error.hpp"

namespace kerrchaos {

namespace {

// Cell edges: 0 bottom (a-b), 1 right (b-c), 2 top (d-c), 3 left (a-d),
// with corners a=(i,j), b=(i+1,j), c=(i+1,j+1), d=(i,j+1).
using EdgePair = std::array<int, 2>;

struct Segment {
    std::uint64_t e0;
    std::uint64_t e1;
};

class LevelTracer {
public:
    LevelTracer(const WignerGrid& g, double level) : g_(g), level_(level), n0_(g.axis0.size()) {}

    std::vector<ContourLine> trace() {
        const std::size_t n1 = g_.axis1.size();
        for (std::size_t j = 0; j + 1 < n1; ++j)
            for (std::size_t i = 0; i + 1 < n0_; ++i) add_cell(i, j);
        return stitch();
    }

private:
    bool above(std::size_t i, std::size_t j) const { return g_.at(i, j) >= level_; }

    std::uint64_t edge_id(std::size_t i, std::size_t j, int edge) const {
        switch (edge) {
            case 0: return 2 * (j * n0_ + i);
            case 1: return 2 * (j * n0_ + i + 1) + 1;
            case 2: return 2 * ((j + 1) * n0_ + i);
            default: return 2 * (j * n0_ + i) + 1;
        }
    }

    PhasePoint crossing(std::uint64_t id) const {
        const std::size_t node = id / 2;
        const std::size_t i = node % n0_;
        const std::size_t j = node / n0_;
        const bool vertical = id % 2 == 1;
        const std::size_t i2 = vertical ? i : i + 1;
        const std::size_t j2 = vertical ? j + 1 : j;
        const double va = g_.at(i, j);
        const double vb = g_.at(i2, j2);
        const double s = (vb != va) ? (level_ - va) / (vb - va) : 0.5;
        const double xa = g_.axis0[i], xb = g_.axis0[i2];
        const double ya = g_.axis1[j], yb = g_.axis1[j2];
        return {xa + s * (xb - xa), ya + s * (yb - ya)};
    }

    void emit(std::size_t i, std::size_t j, EdgePair e) {
        const std::size_t idx = segments_.size();
        segments_.push_back({edge_id(i, j, e[0]), edge_id(i, j, e[1])});
        incident_[segments_.back().e0].push_back(idx);
        incident_[segments_.back().e1].push_back(idx);
    }

    void add_cell(std::size_t i, std::size_t j) {
        const int code = (above(i, j) ? 1 : 0) | (above(i + 1, j) ? 2 : 0) | (above(i + 1, j + 1) ? 4 : 0) |
                         (above(i, j + 1) ? 8 : 0);
        const double centre = 0.25 * (g_.at(i, j) + g_.at(i + 1, j) + g_.at(i + 1, j + 1) + g_.at(i, j + 1));
        switch (code) {
            case 0: case 15: break;
            case 1: case 14: emit(i, j, {3, 0}); break;
            case 2: case 13: emit(i, j, {0, 1}); break;
            case 3: case 12: emit(i, j, {3, 1}); break;
            case 4: case 11: emit(i, j, {1, 2}); break;
            case 6: case 9: emit(i, j, {0, 2}); break;
            case 7: case 8: emit(i, j, {3, 2}); break;
            case 5:
                if (centre >= level_) { emit(i, j, {0, 1}); emit(i, j, {2, 3}); }
                else { emit(i, j, {3, 0}); emit(i, j, {1, 2}); }
                break;
            case 10:
                if (centre >= level_) { emit(i, j, {3, 0}); emit(i, j, {1, 2}); }
                else { emit(i, j, {0, 1}); emit(i, j, {2, 3}); }
                break;
            default: break;
        }
    }

    std::vector<ContourLine> stitch() {
        std::vector<bool> used(segments_.size(), false);
        std::vector<ContourLine> lines;

        auto walk = [&](std::size_t first, std::uint64_t start_edge) {
            ContourLine line;
            line.level = level_;
            line.points.push_back(crossing(start_edge));
            std::uint64_t edge = start_edge;
            std::size_t seg = first;
            while (true) {
                used[seg] = true;
                const std::uint64_t next = segments_[seg].e0 == edge ? segments_[seg].e1 : segments_[seg].e0;
                edge = next;
                if (edge == start_edge) {
                    line.closed = true;
                    break;
                }
                line.points.push_back(crossing(edge));
                std::size_t follow = segments_.size();
                for (std::size_t cand : incident_[edge]) {
                    if (!used[cand]) { follow = cand; break; }
                }
                if (follow == segments_.size()) break;
                seg = follow;
            }
            lines.push_back(std::move(line));
        };

        // Open lines start at grid-boundary crossings (edges touched once).
        for (const auto& [edge, segs] : incident_) {
            if (segs.size() == 1 && !used[segs[0]]) walk(segs[0], edge);
        }
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            if (!used[s]) walk(s, segments_[s].e0);
        }
        return lines;
    }

    const WignerGrid& g_;
    double level_;
    std::size_t n0_;
    std::vector<Segment> segments_;
    std::map<std::uint64_t, std::vector<std::size_t>> incident_;
};

}  // namespace

std::vector<ContourLine> contour_export(const WignerGrid& grid, std::span<const double> levels) {
    if (grid.kind != GridKind::cartesian) {
        fail(ErrorKind::invalid_parameter, "contours are extracted from Cartesian grids only");
    }
    std::vector<ContourLine> all;
    for (double level : levels) {
        auto lines = LevelTracer(grid, level).trace();
        for (auto& l : lines) all.push_back(std::move(l));
    }
    return all;
}

std::vector<PhasePoint> contour_vertices(std::span<const ContourLine> lines) {
    std::vector<PhasePoint> out;
    for (const auto& l : lines) out.insert(out.end(), l.points.begin(), l.points.end());
    return out;
}

void write_contours_csv(std::ostream& out, std::span<const ContourLine> lines) {
    out << "level,segment_id,x,y\n" << std::setprecision(17);
    for (std::size_t s = 0; s < lines.size(); ++s) {
        const auto& l = lines[s];
        for (const auto& p : l.points) out << l.level << ',' << s << ',' << p.x << ',' << p.y << '\n';
        if (l.closed && !l.points.empty()) {
            out << l.level << ',' << s << ',' << l.points.front().x << ',' << l.points.front().y << '\n';
        }
    }
}

}  // namespace kerrchaos
