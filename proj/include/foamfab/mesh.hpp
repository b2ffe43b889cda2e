#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "foamfab/vec.hpp"

namespace foamfab {

// Indexed triangle mesh in millimeters. Meshes used as solids must be
// watertight: every undirected edge shared by exactly two triangles.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;

    bool empty() const { return triangles.empty(); }
    Box3 bounds() const;
    // Signed volume via the divergence theorem; positive for outward-oriented
    // watertight meshes.
    double signed_volume() const;
};

enum class StlFormat { Binary, Ascii };

StlFormat detect_stl_format(std::string_view bytes);

// Parses an STL byte stream, merges coincident vertices (1e-6 mm), and
// validates the solid invariants. Units are taken as millimeters.
// Throws ParseError (byte offset) on malformed input and ValidationError
// (listing boundary edges) on non-watertight meshes.
TriangleMesh load_mesh(std::string_view bytes, StlFormat format);

// Convenience wrapper: reads the file and auto-detects the format.
TriangleMesh load_mesh_file(const std::string& path);

// Watertightness and degeneracy checks, also usable on meshes built in code.
void validate_solid(const TriangleMesh& mesh);

} // namespace foamfab
