#pragma once

// Shared helpers for the test suites: canonical meshes, STL writers, and a
// scratch-directory guard. Everything here is independent of the library's
// own serialization paths so it can serve as an oracle.

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "foamfab/hexgrid.hpp"
#include "foamfab/mesh.hpp"
#include "foamfab/rasterize.hpp"
#include "foamfab/vec.hpp"

namespace testsupport {

using foamfab::TriangleMesh;
using foamfab::Vec3;

inline TriangleMesh make_box(Vec3 lo, Vec3 hi) {
    TriangleMesh mesh;
    mesh.vertices = {
        {lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
        {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z},
    };
    mesh.triangles = {
        {0, 2, 1}, {0, 3, 2}, // bottom (outward -z)
        {4, 5, 6}, {4, 6, 7}, // top (+z)
        {0, 1, 5}, {0, 5, 4}, // front (-y)
        {2, 3, 7}, {2, 7, 6}, // back (+y)
        {0, 4, 7}, {0, 7, 3}, // left (-x)
        {1, 2, 6}, {1, 6, 5}, // right (+x)
    };
    return mesh;
}

// Geodesic sphere: icosahedron subdivided `subdivisions` times, vertices
// projected onto the sphere. 20 * 4^n faces, 10 * 4^n + 2 vertices.
inline TriangleMesh make_icosphere(double radius, Vec3 center, int subdivisions) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
    };
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    auto normalize = [&](Vec3 v) {
        const double n = foamfab::norm(v);
        return Vec3{v.x / n, v.y / n, v.z / n};
    };
    for (Vec3& v : verts) {
        v = normalize(v);
    }
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) {
                return it->second;
            }
            Vec3 m = normalize({(verts[a].x + verts[b].x) / 2.0, (verts[a].y + verts[b].y) / 2.0,
                                (verts[a].z + verts[b].z) / 2.0});
            verts.push_back(m);
            int index = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, index);
            return index;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            int ab = mid(f[0], f[1]);
            int bc = mid(f[1], f[2]);
            int ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    TriangleMesh mesh;
    mesh.vertices.reserve(verts.size());
    for (const Vec3& v : verts) {
        mesh.vertices.push_back({center.x + radius * v.x, center.y + radius * v.y,
                                 center.z + radius * v.z});
    }
    mesh.triangles = std::move(faces);
    return mesh;
}

// Closed vertical cylinder: n-gon prism with cap fans.
inline TriangleMesh make_cylinder(double radius, double z_low, double z_high, Vec3 center,
                                  int segments) {
    TriangleMesh mesh;
    for (int ring = 0; ring < 2; ++ring) {
        const double z = ring == 0 ? z_low : z_high;
        for (int i = 0; i < segments; ++i) {
            const double a = 2.0 * M_PI * i / segments;
            mesh.vertices.push_back(
                {center.x + radius * std::cos(a), center.y + radius * std::sin(a), z});
        }
    }
    const int bottom_center = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back({center.x, center.y, z_low});
    const int top_center = bottom_center + 1;
    mesh.vertices.push_back({center.x, center.y, z_high});
    for (int i = 0; i < segments; ++i) {
        const int j = (i + 1) % segments;
        mesh.triangles.push_back({i, j, segments + j});
        mesh.triangles.push_back({i, segments + j, segments + i});
        mesh.triangles.push_back({bottom_center, j, i});
        mesh.triangles.push_back({top_center, segments + i, segments + j});
    }
    return mesh;
}

inline std::string to_ascii_stl(const TriangleMesh& mesh, const std::string& name = "part") {
    std::ostringstream out;
    out << "solid " << name << "\n";
    out.precision(9);
    for (const auto& tri : mesh.triangles) {
        out << "  facet normal 0 0 0\n    outer loop\n";
        for (int v : tri) {
            const Vec3& p = mesh.vertices[v];
            out << "      vertex " << p.x << " " << p.y << " " << p.z << "\n";
        }
        out << "    endloop\n  endfacet\n";
    }
    out << "endsolid " << name << "\n";
    return out.str();
}

inline std::string to_binary_stl(const TriangleMesh& mesh) {
    std::string bytes(80, '\0');
    auto push_u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
        }
    };
    auto push_f32 = [&](double d) {
        float f = static_cast<float>(d);
        std::uint32_t raw;
        std::memcpy(&raw, &f, 4);
        push_u32(raw);
    };
    push_u32(static_cast<std::uint32_t>(mesh.triangles.size()));
    for (const auto& tri : mesh.triangles) {
        push_f32(0);
        push_f32(0);
        push_f32(0);
        for (int v : tri) {
            const Vec3& p = mesh.vertices[v];
            push_f32(p.x);
            push_f32(p.y);
            push_f32(p.z);
        }
        bytes.push_back('\0');
        bytes.push_back('\0');
    }
    return bytes;
}

// Random connected blob of grid cells grown from a seed, as injection
// columns with one random-length segment each. Grown cells stay inside the
// grid footprint.
inline std::vector<foamfab::Column> random_connected_columns(std::mt19937_64& rng,
                                                             const foamfab::HexGrid& grid,
                                                             int target,
                                                             foamfab::Axial seed = {0, 0}) {
    std::vector<foamfab::Axial> cells;
    std::vector<foamfab::Axial> frontier;
    std::set<std::pair<int, int>> seen;
    auto push = [&](foamfab::Axial cell) {
        if (grid.contains(cell) && seen.insert({cell.q, cell.r}).second) {
            cells.push_back(cell);
            frontier.push_back(cell);
        }
    };
    push(seed);
    while (!frontier.empty() && static_cast<int>(cells.size()) < target) {
        std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
        const foamfab::Axial from = frontier[pick(rng)];
        std::uniform_int_distribution<int> dir(0, 5);
        const foamfab::Axial step = foamfab::HexGrid::kNeighborSteps[dir(rng)];
        push({from.q + step.q, from.r + step.r});
    }
    std::uniform_real_distribution<double> length(1.0, grid.foam().height);
    std::vector<foamfab::Column> columns;
    columns.reserve(cells.size());
    for (foamfab::Axial cell : cells) {
        const double z_high = length(rng);
        columns.push_back({cell, grid.center_of(cell), {{0.0, z_high}}});
    }
    return columns;
}

// Connected components of a column set under the 6-neighbor adjacency,
// computed independently of the planner (simple label propagation).
inline std::vector<int> component_labels(const std::vector<foamfab::Column>& columns) {
    std::map<std::pair<int, int>, std::size_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        index[{columns[i].cell.q, columns[i].cell.r}] = i;
    }
    std::vector<int> label(columns.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (label[i] != -1) {
            continue;
        }
        std::vector<std::size_t> stack{i};
        label[i] = next;
        while (!stack.empty()) {
            const std::size_t at = stack.back();
            stack.pop_back();
            for (foamfab::Axial step : foamfab::HexGrid::kNeighborSteps) {
                auto it = index.find(
                    {columns[at].cell.q + step.q, columns[at].cell.r + step.r});
                if (it != index.end() && label[it->second] == -1) {
                    label[it->second] = next;
                    stack.push_back(it->second);
                }
            }
        }
        ++next;
    }
    return label;
}

// Unique scratch directory, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("foamfab_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

} // namespace testsupport
