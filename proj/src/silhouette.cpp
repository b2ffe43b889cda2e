#include "foamfab/silhouette.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>

#include "foamfab/error.hpp"
#include "foamfab/solid.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

constexpr double kIso = 0.5;

struct NodeGrid {
    int nx = 0;
    int ny = 0;
    Vec2 origin;
    double h = 0.0;
    std::vector<double> coverage; // (nx × ny) node values in [0, 1]

    double at(int i, int j) const { return coverage[static_cast<std::size_t>(j) * nx + i]; }
    Vec2 world(double i, double j) const { return {origin.x + i * h, origin.y + j * h}; }
};

bool projection_occupied(const TriangleMesh& mesh, double x, double y) {
    return !vertical_crossings(mesh, x, y).empty();
}

// Coverage of the h x h square centered on each node, 3 x 3 supersample.
// Nine samples means coverage never equals the 0.5 isovalue exactly.
NodeGrid build_coverage(const TriangleMesh& mesh, double resolution) {
    Box3 box = mesh.bounds();
    NodeGrid grid;
    grid.h = resolution;
    grid.origin = {box.min.x - 2.0 * resolution, box.min.y - 2.0 * resolution};
    grid.nx = static_cast<int>(std::ceil((box.max.x - grid.origin.x) / resolution)) + 3;
    grid.ny = static_cast<int>(std::ceil((box.max.y - grid.origin.y) / resolution)) + 3;
    grid.coverage.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);
    const double d = resolution / 3.0;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const Vec2 p = grid.world(i, j);
            if (p.x < box.min.x - d * 1.5 || p.x > box.max.x + d * 1.5 ||
                p.y < box.min.y - d * 1.5 || p.y > box.max.y + d * 1.5) {
                continue; // node square entirely outside the bbox
            }
            int hits = 0;
            for (int sy = -1; sy <= 1; ++sy) {
                for (int sx = -1; sx <= 1; ++sx) {
                    if (projection_occupied(mesh, p.x + sx * d, p.y + sy * d)) {
                        ++hits;
                    }
                }
            }
            grid.coverage[static_cast<std::size_t>(j) * grid.nx + i] = hits / 9.0;
        }
    }
    return grid;
}

struct DirectedSegment {
    Vec2 from;
    Vec2 to;
};

struct PointKey {
    std::int64_t x, y;
    auto operator<=>(const PointKey&) const = default;
};

PointKey key_of(Vec2 p) {
    return {static_cast<std::int64_t>(std::llround(p.x * 1e9)),
            static_cast<std::int64_t>(std::llround(p.y * 1e9))};
}

// Marching squares over node squares. Directed so the inside stays on the
// left: outer loops come out counter-clockwise, holes clockwise.
std::vector<DirectedSegment> march(const NodeGrid& grid) {
    std::vector<DirectedSegment> segments;
    auto interp = [](double va, double vb) { return (kIso - va) / (vb - va); };
    for (int j = 0; j + 1 < grid.ny; ++j) {
        for (int i = 0; i + 1 < grid.nx; ++i) {
            const double v0 = grid.at(i, j);         // bottom-left
            const double v1 = grid.at(i + 1, j);     // bottom-right
            const double v2 = grid.at(i, j + 1);     // top-left
            const double v3 = grid.at(i + 1, j + 1); // top-right
            const int mask = (v0 >= kIso ? 1 : 0) | (v1 >= kIso ? 2 : 0) | (v2 >= kIso ? 4 : 0) |
                             (v3 >= kIso ? 8 : 0);
            if (mask == 0 || mask == 15) {
                continue;
            }
            const Vec2 bottom = grid.world(i + interp(v0, v1), j);
            const Vec2 right = grid.world(i + 1, j + interp(v1, v3));
            const Vec2 top = grid.world(i + interp(v2, v3), j + 1);
            const Vec2 left = grid.world(i, j + interp(v0, v2));
            switch (mask) {
            case 1: segments.push_back({bottom, left}); break;
            case 2: segments.push_back({right, bottom}); break;
            case 3: segments.push_back({right, left}); break;
            case 4: segments.push_back({left, top}); break;
            case 5: segments.push_back({bottom, top}); break;
            case 7: segments.push_back({right, top}); break;
            case 8: segments.push_back({top, right}); break;
            case 10: segments.push_back({top, bottom}); break;
            case 11: segments.push_back({top, left}); break;
            case 12: segments.push_back({left, right}); break;
            case 13: segments.push_back({bottom, right}); break;
            case 14: segments.push_back({left, bottom}); break;
            case 6: // ambiguous: decide by the cell-center average
                if ((v0 + v1 + v2 + v3) / 4.0 >= kIso) {
                    segments.push_back({right, top});
                    segments.push_back({left, bottom});
                } else {
                    segments.push_back({right, bottom});
                    segments.push_back({left, top});
                }
                break;
            case 9:
                if ((v0 + v1 + v2 + v3) / 4.0 >= kIso) {
                    segments.push_back({bottom, right});
                    segments.push_back({top, left});
                } else {
                    segments.push_back({bottom, left});
                    segments.push_back({top, right});
                }
                break;
            default: break;
            }
        }
    }
    return segments;
}

// Drops vertices that sit exactly on the line through their neighbors.
// Straight runs of grid-aligned cells interpolate to bitwise-identical
// offsets, so axis-aligned edges collapse to single segments while curved
// sections (cross products ~ resolution^2) stay untouched.
Contour simplify_collinear(Contour contour) {
    auto collinear = [](Vec2 a, Vec2 b, Vec2 c) {
        return std::abs(cross(b - a, c - b)) <= 1e-9;
    };
    std::vector<Vec2>& points = contour.points;
    if (points.size() < 5) {
        return contour;
    }
    points.pop_back(); // open the ring
    std::vector<Vec2> kept;
    kept.reserve(points.size());
    for (const Vec2& p : points) {
        while (kept.size() >= 2 && collinear(kept[kept.size() - 2], kept.back(), p)) {
            kept.pop_back();
        }
        kept.push_back(p);
    }
    // runs crossing the ring seam
    while (kept.size() > 3 && collinear(kept[kept.size() - 2], kept.back(), kept.front())) {
        kept.pop_back();
    }
    while (kept.size() > 3 && collinear(kept.back(), kept.front(), kept[1])) {
        kept.erase(kept.begin());
    }
    kept.push_back(kept.front());
    contour.points = std::move(kept);
    return contour;
}

std::vector<Contour> stitch(std::vector<DirectedSegment> segments) {
    // Endpoints of shared cell edges are computed from identical inputs in
    // both adjacent cells, so exact key matching is safe.
    std::map<PointKey, std::size_t> by_start;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        by_start.emplace(key_of(segments[i].from), i);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<Contour> contours;
    // Iterating the map keyed by start point makes loop order deterministic.
    for (const auto& [start_key, start_index] : by_start) {
        if (used[start_index]) {
            continue;
        }
        Contour contour;
        std::size_t current = start_index;
        contour.points.push_back(segments[current].from);
        while (true) {
            used[current] = true;
            contour.points.push_back(segments[current].to);
            PointKey next_key = key_of(segments[current].to);
            if (next_key == start_key) {
                break;
            }
            auto it = by_start.find(next_key);
            if (it == by_start.end() || used[it->second]) {
                throw ValidationError("silhouette tracing produced an open contour");
            }
            current = it->second;
        }
        if (contour.points.size() >= 4) { // triangle + closing point
            contours.push_back(simplify_collinear(std::move(contour)));
        }
    }
    return contours;
}

} // namespace

bool Contour::closed() const {
    return points.size() >= 4 && points.front().x == points.back().x &&
           points.front().y == points.back().y;
}

double Contour::perimeter() const {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        total += norm(points[i + 1] - points[i]);
    }
    return total;
}

double Contour::signed_area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        twice += cross(points[i], points[i + 1]);
    }
    return twice / 2.0;
}

bool Contour::contains(Vec2 p) const {
    bool inside = false;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const Vec2 a = points[i];
        const Vec2 b = points[i + 1];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_cross) {
                inside = !inside;
            }
        }
    }
    return inside;
}

std::vector<Contour> project_silhouette(const BodySpec& body, double resolution) {
    if (!(resolution > 0.0)) {
        throw DomainError("silhouette resolution must be positive");
    }
    if (body.mesh.empty()) {
        return {};
    }
    NodeGrid grid = build_coverage(body.mesh, resolution);
    return stitch(march(grid));
}

void write_contours_csv(std::ostream& out, std::span<const Contour> contours) {
    out << "contour,x,y\n";
    for (std::size_t i = 0; i < contours.size(); ++i) {
        for (const Vec2& p : contours[i].points) {
            out << i << ',' << fmt_num(p.x) << ',' << fmt_num(p.y) << '\n';
        }
    }
}

} // namespace foamfab
