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

#include <iosfwd>
#include <span>
#include <vector>

#include "kerrchaos/section.hpp"
#include "kerrchaos/wigner.hpp"

namespace kerrchaos {

struct ContourLine {
    double level = 0.0;
    std::vector<PhasePoint> points;
    bool closed = false;
};

/// Marching-squares iso-lines of a Cartesian grid, stitched into polylines.
/// Saddle cells are resolved by the cell-centre average. A level that the
/// grid never crosses yields no lines.
std::vector<ContourLine> contour_export(const WignerGrid& grid, std::span<const double> levels);

/// All contour vertices; convenient for bounding boxes and histograms.
std::vector<PhasePoint> contour_vertices(std::span<const ContourLine> lines);

/// CSV: level,segment_id,x,y (closed lines repeat their first vertex).
void write_contours_csv(std::ostream& out, std::span<const ContourLine> lines);

}  // namespace kerrchaos
