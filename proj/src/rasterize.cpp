#include "foamfab/rasterize.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "foamfab/error.hpp"
#include "foamfab/solid.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

constexpr double kBoundsTol = 1e-6;

// Fallback for axes that stay degenerate under every perturbation: classify
// midpoints of a z ladder and convert runs of inside samples to segments.
std::vector<Segment> segments_by_sampling(const TriangleMesh& mesh, double x, double y,
                                          double z_min, double z_max, double z_step) {
    std::vector<Segment> segments;
    bool inside_prev = false;
    double run_start = 0.0;
    for (double z = z_min + z_step / 2.0; z < z_max; z += z_step) {
        bool inside = point_in_solid(mesh, {x, y, z});
        if (inside && !inside_prev) {
            run_start = z - z_step / 2.0;
        } else if (!inside && inside_prev) {
            segments.push_back({run_start, z - z_step / 2.0});
        }
        inside_prev = inside;
    }
    if (inside_prev) {
        segments.push_back({run_start, z_max});
    }
    return segments;
}

} // namespace

void validate_body(const BodySpec& body, const FoamBlock& foam) {
    foam.validate();
    if (!(body.infill_ratio > 0.0 && body.infill_ratio <= 1.0)) {
        throw DomainError("infill ratio must lie in (0, 1]");
    }
    if (!(body.hydration_ratio > 0.0 && body.hydration_ratio <= 1.0)) {
        throw DomainError("hydration ratio must lie in (0, 1]");
    }
    if (body.mesh.empty()) {
        return;
    }
    Box3 box = body.mesh.bounds();
    if (box.min.x < -kBoundsTol || box.min.y < -kBoundsTol || box.min.z < -kBoundsTol ||
        box.max.x > foam.width + kBoundsTol || box.max.y > foam.depth + kBoundsTol ||
        box.max.z > foam.height + kBoundsTol) {
        throw ValidationError(
            "body bounding box (" + fmt_fixed(box.min.x, 3) + "," + fmt_fixed(box.min.y, 3) + "," +
            fmt_fixed(box.min.z, 3) + ")-(" + fmt_fixed(box.max.x, 3) + "," +
            fmt_fixed(box.max.y, 3) + "," + fmt_fixed(box.max.z, 3) +
            ") lies outside the foam block " + fmt_fixed(foam.width, 3) + "x" +
            fmt_fixed(foam.depth, 3) + "x" + fmt_fixed(foam.height, 3));
    }
}

double Column::total_length() const {
    double total = 0.0;
    for (const Segment& s : segments) {
        total += s.length();
    }
    return total;
}

std::vector<Column> rasterize(const BodySpec& body, const HexGrid& grid, double z_step) {
    validate_body(body, grid.foam());
    if (!(z_step > 0.0)) {
        throw DomainError("z_step must be positive");
    }
    std::vector<Column> columns;
    if (body.mesh.empty()) {
        return columns;
    }
    const Box3 box = body.mesh.bounds();
    for (Axial cell : grid.cells()) {
        const Vec2 center = grid.center_of(cell);
        if (center.x < box.min.x - kBoundsTol || center.x > box.max.x + kBoundsTol ||
            center.y < box.min.y - kBoundsTol || center.y > box.max.y + kBoundsTol) {
            continue;
        }
        std::vector<Segment> segments;
        try {
            std::vector<double> zs = vertical_crossings(body.mesh, center.x, center.y);
            for (std::size_t i = 0; i + 1 < zs.size(); i += 2) {
                segments.push_back({zs[i], zs[i + 1]});
            }
        } catch (const ValidationError&) {
            segments = segments_by_sampling(body.mesh, center.x, center.y, box.min.z, box.max.z,
                                            z_step);
        }
        // Drop slivers thinner than the merge tolerance and clamp into the foam.
        std::erase_if(segments, [&](const Segment& s) { return s.length() <= kBoundsTol; });
        for (Segment& s : segments) {
            s.z_low = std::max(s.z_low, 0.0);
            s.z_high = std::min(s.z_high, grid.foam().height);
        }
        if (!segments.empty()) {
            columns.push_back({cell, center, std::move(segments)});
        }
    }
    return columns;
}

double columns_volume(std::span<const Column> columns, double cell_area) {
    double total = 0.0;
    for (const Column& column : columns) {
        total += cell_area * column.total_length();
    }
    return total;
}

void write_columns_csv(std::ostream& out, std::span<const Column> columns) {
    out << "q,r,center_x,center_y,z_low,z_high\n";
    for (const Column& column : columns) {
        for (const Segment& s : column.segments) {
            out << column.cell.q << ',' << column.cell.r << ',' << fmt_num(column.center.x) << ','
                << fmt_num(column.center.y) << ',' << fmt_num(s.z_low) << ',' << fmt_num(s.z_high)
                << '\n';
        }
    }
}

} // namespace foamfab
