#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "foamfab/rasterize.hpp"
#include "foamfab/vec.hpp"

namespace foamfab {

// Closed 2D polyline on the foam top surface. First point equals the last.
// Outer boundaries run counter-clockwise, holes clockwise.
struct Contour {
    std::vector<Vec2> points;

    bool closed() const;
    double perimeter() const;
    // Signed area (positive = counter-clockwise).
    double signed_area() const;
    bool contains(Vec2 p) const;
};

// Contours of the body's vertical projection onto the foam top face.
// The projection is rasterized onto an occupancy grid at the given
// resolution (coverage estimated by supersampling each node square) and
// traced with marching squares, so accuracy is bounded by the resolution.
// Outer boundaries and holes are both returned.
std::vector<Contour> project_silhouette(const BodySpec& body, double resolution = 0.25);

// Debug/golden serialization: `contour,x,y` with one line per vertex.
void write_contours_csv(std::ostream& out, std::span<const Contour> contours);

} // namespace foamfab
