#include "foamfab/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <sstream>
#include <unordered_map>

#include "foamfab/error.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

constexpr double kMergeTolerance = 1e-6;   // mm
constexpr double kMinTriangleArea = 1e-9;  // mm^2

struct QuantizedKey {
    std::int64_t x, y, z;
    bool operator==(const QuantizedKey&) const = default;
};

struct QuantizedKeyHash {
    std::size_t operator()(const QuantizedKey& k) const {
        std::size_t h = std::hash<std::int64_t>()(k.x);
        h = h * 0x9e3779b97f4a7c15ULL + std::hash<std::int64_t>()(k.y);
        h = h * 0x9e3779b97f4a7c15ULL + std::hash<std::int64_t>()(k.z);
        return h;
    }
};

QuantizedKey quantize(const Vec3& v) {
    return {static_cast<std::int64_t>(std::llround(v.x / kMergeTolerance)),
            static_cast<std::int64_t>(std::llround(v.y / kMergeTolerance)),
            static_cast<std::int64_t>(std::llround(v.z / kMergeTolerance))};
}

// Accumulates raw facet vertices, merging coincident ones.
class MeshBuilder {
public:
    int add_vertex(const Vec3& v) {
        auto [it, inserted] = index_.try_emplace(quantize(v), static_cast<int>(mesh_.vertices.size()));
        if (inserted) {
            mesh_.vertices.push_back(v);
        }
        return it->second;
    }

    void add_triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
        mesh_.triangles.push_back({add_vertex(a), add_vertex(b), add_vertex(c)});
    }

    TriangleMesh take() { return std::move(mesh_); }

private:
    TriangleMesh mesh_;
    std::unordered_map<QuantizedKey, int, QuantizedKeyHash> index_;
};

float read_f32_le(const unsigned char* p) {
    std::uint32_t raw = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                        (static_cast<std::uint32_t>(p[2]) << 16) |
                        (static_cast<std::uint32_t>(p[3]) << 24);
    float value;
    std::memcpy(&value, &raw, sizeof(value));
    return value;
}

TriangleMesh parse_binary(std::string_view bytes) {
    if (bytes.size() < 84) {
        throw ParseError("byte 0: binary STL shorter than the 84-byte preamble", 0);
    }
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    std::uint32_t count = static_cast<std::uint32_t>(data[80]) |
                          (static_cast<std::uint32_t>(data[81]) << 8) |
                          (static_cast<std::uint32_t>(data[82]) << 16) |
                          (static_cast<std::uint32_t>(data[83]) << 24);
    const std::size_t expected = 84 + static_cast<std::size_t>(count) * 50;
    if (bytes.size() < expected) {
        throw ParseError("byte " + std::to_string(bytes.size()) + ": binary STL truncated, " +
                             std::to_string(count) + " facets declared need " +
                             std::to_string(expected) + " bytes",
                         bytes.size());
    }
    MeshBuilder builder;
    for (std::uint32_t i = 0; i < count; ++i) {
        const unsigned char* rec = data + 84 + static_cast<std::size_t>(i) * 50;
        Vec3 v[3];
        for (int k = 0; k < 3; ++k) {
            const unsigned char* p = rec + 12 + k * 12; // skip the normal
            v[k] = {read_f32_le(p), read_f32_le(p + 4), read_f32_le(p + 8)};
            if (!std::isfinite(v[k].x) || !std::isfinite(v[k].y) || !std::isfinite(v[k].z)) {
                std::size_t off = static_cast<std::size_t>(rec + 12 + k * 12 - data);
                throw ParseError("byte " + std::to_string(off) + ": non-finite vertex in facet " +
                                     std::to_string(i),
                                 off);
            }
        }
        builder.add_triangle(v[0], v[1], v[2]);
    }
    return builder.take();
}

// Whitespace-delimited token scanner that remembers byte offsets.
class TokenScanner {
public:
    explicit TokenScanner(std::string_view text) : text_(text) {}

    std::string_view next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ >= text_.size()) {
            return {};
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        last_token_offset_ = start;
        return text_.substr(start, pos_ - start);
    }

    std::size_t offset() const { return last_token_offset_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t last_token_offset_ = 0;
};

[[noreturn]] void ascii_fail(const TokenScanner& scan, const std::string& what) {
    throw ParseError("byte " + std::to_string(scan.offset()) + ": " + what, scan.offset());
}

void expect_token(TokenScanner& scan, std::string_view expected) {
    std::string_view tok = scan.next();
    if (tok != expected) {
        ascii_fail(scan, "expected '" + std::string(expected) + "', got '" + std::string(tok) + "'");
    }
}

double ascii_number(TokenScanner& scan) {
    std::string_view tok = scan.next();
    double value = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() ||
        !std::isfinite(value)) {
        ascii_fail(scan, "malformed number '" + std::string(tok) + "'");
    }
    return value;
}

TriangleMesh parse_ascii(std::string_view text) {
    TokenScanner scan(text);
    expect_token(scan, "solid");
    // Optional solid name: everything up to the first "facet"/"endsolid".
    std::string_view tok = scan.next();
    while (tok != "facet" && tok != "endsolid") {
        if (tok.empty()) {
            ascii_fail(scan, "unexpected end of ASCII STL");
        }
        tok = scan.next();
    }
    MeshBuilder builder;
    while (tok == "facet") {
        expect_token(scan, "normal");
        ascii_number(scan);
        ascii_number(scan);
        ascii_number(scan);
        expect_token(scan, "outer");
        expect_token(scan, "loop");
        Vec3 v[3];
        for (auto& vertex : v) {
            expect_token(scan, "vertex");
            vertex.x = ascii_number(scan);
            vertex.y = ascii_number(scan);
            vertex.z = ascii_number(scan);
        }
        expect_token(scan, "endloop");
        expect_token(scan, "endfacet");
        builder.add_triangle(v[0], v[1], v[2]);
        tok = scan.next();
        if (tok != "facet" && tok != "endsolid") {
            ascii_fail(scan, "expected 'facet' or 'endsolid', got '" + std::string(tok) + "'");
        }
    }
    return builder.take();
}

double triangle_area(const TriangleMesh& mesh, const std::array<int, 3>& tri) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    return 0.5 * norm(cross(b - a, c - a));
}

} // namespace

Box3 TriangleMesh::bounds() const {
    Box3 box;
    if (vertices.empty()) {
        return box;
    }
    box.min = box.max = vertices.front();
    for (const Vec3& v : vertices) {
        box.min.x = std::min(box.min.x, v.x);
        box.min.y = std::min(box.min.y, v.y);
        box.min.z = std::min(box.min.z, v.z);
        box.max.x = std::max(box.max.x, v.x);
        box.max.y = std::max(box.max.y, v.y);
        box.max.z = std::max(box.max.z, v.z);
    }
    return box;
}

double TriangleMesh::signed_volume() const {
    double total = 0.0;
    for (const auto& tri : triangles) {
        const Vec3& a = vertices[tri[0]];
        const Vec3& b = vertices[tri[1]];
        const Vec3& c = vertices[tri[2]];
        total += dot(a, cross(b, c)) / 6.0;
    }
    return total;
}

StlFormat detect_stl_format(std::string_view bytes) {
    if (bytes.size() >= 84) {
        const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
        std::uint32_t count = static_cast<std::uint32_t>(data[80]) |
                              (static_cast<std::uint32_t>(data[81]) << 8) |
                              (static_cast<std::uint32_t>(data[82]) << 16) |
                              (static_cast<std::uint32_t>(data[83]) << 24);
        if (bytes.size() == 84 + static_cast<std::size_t>(count) * 50) {
            return StlFormat::Binary;
        }
    }
    std::string_view head = trim(bytes.substr(0, std::min<std::size_t>(bytes.size(), 16)));
    if (head.substr(0, 5) == "solid") {
        return StlFormat::Ascii;
    }
    return StlFormat::Binary;
}

TriangleMesh load_mesh(std::string_view bytes, StlFormat format) {
    TriangleMesh mesh =
        format == StlFormat::Binary ? parse_binary(bytes) : parse_ascii(bytes);
    validate_solid(mesh);
    return mesh;
}

TriangleMesh load_mesh_file(const std::string& path) {
    std::string bytes = read_file(path);
    return load_mesh(bytes, detect_stl_format(bytes));
}

void validate_solid(const TriangleMesh& mesh) {
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        for (int v : mesh.triangles[i]) {
            if (v < 0 || v >= static_cast<int>(mesh.vertices.size())) {
                throw ValidationError("triangle " + std::to_string(i) +
                                      " references invalid vertex index " + std::to_string(v));
            }
        }
        if (triangle_area(mesh, mesh.triangles[i]) <= kMinTriangleArea) {
            throw ValidationError("triangle " + std::to_string(i) + " is degenerate (area <= " +
                                  fmt_num(kMinTriangleArea) + " mm^2)");
        }
    }

    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& tri : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = tri[k];
            int b = tri[(k + 1) % 3];
            edge_count[{std::min(a, b), std::max(a, b)}] += 1;
        }
    }
    std::vector<std::pair<int, int>> open_edges;
    for (const auto& [edge, count] : edge_count) {
        if (count != 2) {
            open_edges.push_back(edge);
        }
    }
    if (!open_edges.empty()) {
        std::ostringstream msg;
        msg << "mesh is not watertight: " << open_edges.size()
            << " edge(s) not shared by exactly two triangles:";
        std::size_t shown = std::min<std::size_t>(open_edges.size(), 8);
        for (std::size_t i = 0; i < shown; ++i) {
            const auto& [a, b] = open_edges[i];
            const Vec3& va = mesh.vertices[a];
            const Vec3& vb = mesh.vertices[b];
            msg << " edge " << a << "-" << b << " (" << fmt_fixed(va.x, 3) << ","
                << fmt_fixed(va.y, 3) << "," << fmt_fixed(va.z, 3) << ")-(" << fmt_fixed(vb.x, 3)
                << "," << fmt_fixed(vb.y, 3) << "," << fmt_fixed(vb.z, 3) << ")";
            if (i + 1 < shown) {
                msg << ";";
            }
        }
        if (open_edges.size() > shown) {
            msg << " ...";
        }
        throw ValidationError(msg.str());
    }
}

} // namespace foamfab
