#include "foamfab/solid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "foamfab/error.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

// Below this absolute 2D cross-product magnitude a hit counts as degenerate
// and the line is perturbed. Well below the 1e-7 mm perturbation step.
constexpr double kDegenerateTol = 1e-9;

// Axis selects which coordinate the line runs along; (u, v) are the two
// remaining coordinates in cyclic order (X -> y,z; Y -> z,x; Z -> x,y).
enum class Axis { X, Y, Z };

void project(Axis axis, const Vec3& p, double& u, double& v, double& w) {
    switch (axis) {
    case Axis::X: u = p.y; v = p.z; w = p.x; return;
    case Axis::Y: u = p.z; v = p.x; w = p.y; return;
    case Axis::Z: u = p.x; v = p.y; w = p.z; return;
    }
    u = v = w = 0.0;
}

// One transversal pass. Returns nullopt when the line position is degenerate
// with respect to some triangle (on an edge or vertex in projection, or on a
// facet parallel to the line).
std::optional<std::vector<double>> try_crossings(const TriangleMesh& mesh, Axis axis, double u,
                                                 double v) {
    std::vector<double> crossings;
    for (const auto& tri : mesh.triangles) {
        double au, av, aw, bu, bv, bw, cu, cv, cw;
        project(axis, mesh.vertices[tri[0]], au, av, aw);
        project(axis, mesh.vertices[tri[1]], bu, bv, bw);
        project(axis, mesh.vertices[tri[2]], cu, cv, cw);

        // Cheap reject on the projected bounding box.
        if (u < std::min({au, bu, cu}) - kDegenerateTol ||
            u > std::max({au, bu, cu}) + kDegenerateTol ||
            v < std::min({av, bv, cv}) - kDegenerateTol ||
            v > std::max({av, bv, cv}) + kDegenerateTol) {
            continue;
        }

        const double area2 = (bu - au) * (cv - av) - (bv - av) * (cu - au);
        if (std::abs(area2) <= kDegenerateTol) {
            // Facet parallel to the line: it projects to a sliver. The line
            // misses it unless it grazes the sliver itself, in which case we
            // must perturb; adjacent facets own the actual crossings.
            const double edges[3][4] = {{au, av, bu, bv}, {bu, bv, cu, cv}, {cu, cv, au, av}};
            for (const auto& e : edges) {
                const double dx = e[2] - e[0];
                const double dy = e[3] - e[1];
                const double len2 = dx * dx + dy * dy;
                double t = len2 > 0.0 ? ((u - e[0]) * dx + (v - e[1]) * dy) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                const double px = e[0] + t * dx - u;
                const double py = e[1] + t * dy - v;
                if (px * px + py * py <= kDegenerateTol * kDegenerateTol) {
                    return std::nullopt;
                }
            }
            continue;
        }
        const double d0 = (bu - au) * (v - av) - (bv - av) * (u - au);
        const double d1 = (cu - bu) * (v - bv) - (cv - bv) * (u - bu);
        const double d2 = (au - cu) * (v - cv) - (av - cv) * (u - cu);
        const double sign = area2 > 0.0 ? 1.0 : -1.0;
        const double s0 = d0 * sign;
        const double s1 = d1 * sign;
        const double s2 = d2 * sign;
        if (s0 <= -kDegenerateTol || s1 <= -kDegenerateTol || s2 <= -kDegenerateTol) {
            continue; // clearly outside
        }
        if (s0 <= kDegenerateTol || s1 <= kDegenerateTol || s2 <= kDegenerateTol) {
            return std::nullopt; // on an edge or vertex in projection
        }
        // Interior hit: interpolate the along-axis coordinate barycentrically.
        const double abs_area2 = std::abs(area2);
        const double w = (s1 * aw + s2 * bw + s0 * cw) / abs_area2;
        crossings.push_back(w);
    }
    if (crossings.size() % 2 != 0) {
        return std::nullopt; // parity violated: some hit was missed, perturb
    }
    std::sort(crossings.begin(), crossings.end());
    return crossings;
}

// Deterministic perturbation ladder: fixed directions, geometrically growing
// magnitude starting at 1e-7 mm. Attempt 0 is the unperturbed line.
constexpr int kMaxAttempts = 7;
constexpr double kEpsBase = 1e-7;

std::array<double, 2> perturbation(int attempt) {
    if (attempt == 0) {
        return {0.0, 0.0};
    }
    static const std::array<std::array<double, 2>, 6> dirs = {{
        {1.0, 0.6180339887498949},
        {-0.7548776662466927, 1.0},
        {1.0, -0.3819660112501051},
        {-1.0, -0.8541019662496845},
        {0.5352331346652951, 1.0},
        {-1.0, 0.2360679774997897},
    }};
    const double eps = kEpsBase * std::pow(8.0, attempt - 1);
    const auto& d = dirs[(attempt - 1) % dirs.size()];
    return {eps * d[0], eps * d[1]};
}

std::vector<double> crossings_along(const TriangleMesh& mesh, Axis axis, double u, double v) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        auto offset = perturbation(attempt);
        auto result = try_crossings(mesh, axis, u + offset[0], v + offset[1]);
        if (result) {
            return std::move(*result);
        }
    }
    throw ValidationError("ray casting failed: line at (" + fmt_num(u) + ", " + fmt_num(v) +
                          ") is degenerate under every perturbation attempt");
}

bool parity_inside(const TriangleMesh& mesh, Axis axis, double u, double v, double w) {
    std::vector<double> crossings = crossings_along(mesh, axis, u, v);
    int above = 0;
    for (double c : crossings) {
        if (c > w) {
            ++above;
        }
    }
    return (above % 2) == 1;
}

} // namespace

std::vector<double> vertical_crossings(const TriangleMesh& mesh, double x, double y) {
    return crossings_along(mesh, Axis::Z, x, y);
}

bool point_in_solid(const TriangleMesh& mesh, const Vec3& p) {
    if (mesh.empty()) {
        return false;
    }
    Box3 box = mesh.bounds();
    if (p.x < box.min.x || p.x > box.max.x || p.y < box.min.y || p.y > box.max.y ||
        p.z < box.min.z || p.z > box.max.z) {
        return false;
    }
    // Try the three axis directions in turn; a mesh degenerate along all
    // three through one point does not occur in practice.
    try {
        return parity_inside(mesh, Axis::Z, p.x, p.y, p.z);
    } catch (const ValidationError&) {
    }
    try {
        return parity_inside(mesh, Axis::X, p.y, p.z, p.x);
    } catch (const ValidationError&) {
    }
    return parity_inside(mesh, Axis::Y, p.z, p.x, p.y);
}

} // namespace foamfab
