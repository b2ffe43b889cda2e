#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "foamfab/hexgrid.hpp"
#include "foamfab/mesh.hpp"

namespace foamfab {

// One solid body to be injected, with its per-body attributes.
struct BodySpec {
    TriangleMesh mesh;
    double infill_ratio = 1.0;
    double hydration_ratio = 0.5;
};

// Throws unless ratios are in (0, 1] and the mesh bounding box lies inside
// the foam block (with a 1e-6 mm tolerance for touching faces).
void validate_body(const BodySpec& body, const FoamBlock& foam);

// Maximal vertical interval where a column axis runs inside a body.
struct Segment {
    double z_low = 0.0;
    double z_high = 0.0;

    double length() const { return z_high - z_low; }
    bool operator==(const Segment&) const = default;
};

// One hexagonal injection cell: the grid cell, its planar center, and the
// sorted disjoint vertical segments of the axis that lie inside the body.
struct Column {
    Axial cell;
    Vec2 center;
    std::vector<Segment> segments;

    double total_length() const;
};

// Rasterizes a body onto the grid: every cell whose center axis intersects
// the body yields a Column; cells with no intersection are omitted. Segments
// come from exact vertical ray casting; z_step is only the sampling pitch of
// the fallback used when a cell axis stays degenerate under perturbation.
// Output is sorted by (q, r).
std::vector<Column> rasterize(const BodySpec& body, const HexGrid& grid, double z_step = 0.5);

double columns_volume(std::span<const Column> columns, double cell_area);

// Debug/golden serialization: `q,r,center_x,center_y,z_low,z_high`, one line
// per segment, exact shortest-round-trip numbers.
void write_columns_csv(std::ostream& out, std::span<const Column> columns);

} // namespace foamfab
