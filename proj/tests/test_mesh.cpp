#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "foamfab/error.hpp"
#include "foamfab/mesh.hpp"
#include "foamfab/solid.hpp"
#include "support.hpp"

using namespace foamfab;
using testsupport::make_box;
using testsupport::make_icosphere;
using testsupport::to_ascii_stl;
using testsupport::to_binary_stl;

TEST_CASE("unit cube loads from ascii and binary STL") {
    const TriangleMesh cube = make_box({0, 0, 0}, {1, 1, 1});
    for (const auto& [bytes, format] :
         {std::make_pair(to_ascii_stl(cube), StlFormat::Ascii),
          std::make_pair(to_binary_stl(cube), StlFormat::Binary)}) {
        CHECK(detect_stl_format(bytes) == format);
        const TriangleMesh mesh = load_mesh(bytes, format);
        CHECK(mesh.vertices.size() == 8);
        CHECK(mesh.triangles.size() == 12);
    }
}

TEST_CASE("coincident vertices are merged at 1e-6 mm") {
    TriangleMesh cube = make_box({0, 0, 0}, {10, 10, 10});
    // Perturb below the merge tolerance; STL stores per-facet vertices anyway.
    cube.vertices[3].x += 2e-8;
    const TriangleMesh mesh = load_mesh(to_binary_stl(cube), StlFormat::Binary);
    CHECK(mesh.vertices.size() == 8);
}

TEST_CASE("STL with a hole reports the open edges") {
    TriangleMesh cube = make_box({0, 0, 0}, {10, 10, 10});
    cube.triangles.pop_back(); // 11 triangles left
    const std::string bytes = to_ascii_stl(cube);
    CHECK_THROWS_WITH_AS(load_mesh(bytes, StlFormat::Ascii),
                         doctest::Contains("not watertight"), ValidationError);
    try {
        load_mesh(bytes, StlFormat::Ascii);
    } catch (const ValidationError& e) {
        // the dropped facet leaves a 3-edge hole; the message names edges
        CHECK(std::string(e.what()).find("edge") != std::string::npos);
    }
}

TEST_CASE("icosphere with two subdivisions has 320 triangles and 162 vertices") {
    const TriangleMesh source = make_icosphere(10.0, {0, 0, 0}, 2);
    CHECK(source.triangles.size() == 320);
    const TriangleMesh mesh = load_mesh(to_binary_stl(source), StlFormat::Binary);
    CHECK(mesh.vertices.size() == 162);
    CHECK(mesh.triangles.size() == 320);
}

TEST_CASE("malformed input reports a byte offset") {
    SUBCASE("truncated binary") {
        std::string bytes = to_binary_stl(make_box({0, 0, 0}, {1, 1, 1}));
        bytes.resize(bytes.size() - 10);
        CHECK_THROWS_AS(load_mesh(bytes, StlFormat::Binary), ParseError);
    }
    SUBCASE("ascii with a bad number") {
        std::string text = to_ascii_stl(make_box({0, 0, 0}, {1, 1, 1}));
        const auto pos = text.find("vertex");
        text.replace(pos, 8, "vertex x");
        try {
            load_mesh(text, StlFormat::Ascii);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position() > 0);
            CHECK(std::string(e.what()).find("byte") != std::string::npos);
        }
    }
    SUBCASE("empty stream") {
        CHECK_THROWS_AS(load_mesh("", StlFormat::Binary), ParseError);
        CHECK_THROWS_AS(load_mesh("", StlFormat::Ascii), ParseError);
    }
}

TEST_CASE("degenerate triangles are rejected") {
    TriangleMesh bad = make_box({0, 0, 0}, {10, 10, 10});
    bad.triangles.push_back({0, 1, 1});
    CHECK_THROWS_AS(validate_solid(bad), ValidationError);
}

TEST_CASE("point_in_solid on the cube") {
    const TriangleMesh cube = make_box({0, 0, 0}, {10, 10, 10});
    CHECK(point_in_solid(cube, {5, 5, 5}));
    CHECK_FALSE(point_in_solid(cube, {15, 5, 5}));
    CHECK_FALSE(point_in_solid(cube, {5, 5, -1}));
    CHECK(point_in_solid(cube, {1e-3, 1e-3, 1e-3}));
}

TEST_CASE("point_in_solid matches the analytic sphere predicate") {
    // Subdivision 5 keeps the chord sag under 2e-3 mm, so points outside a
    // 2e-3 band around the surface classify identically for mesh and sphere.
    const double radius = 10.0;
    const TriangleMesh sphere = make_icosphere(radius, {0, 0, 0}, 5);
    const double band = std::max(1e-3, 2e-3);
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> coord(-12.0, 12.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p{coord(rng), coord(rng), coord(rng)};
        const double dist = norm(p);
        if (std::abs(dist - radius) <= band) {
            continue;
        }
        ++checked;
        CHECK(point_in_solid(sphere, p) == (dist < radius));
    }
    CHECK(checked > 950);
}

TEST_CASE("vertical line crossings come in pairs on watertight meshes") {
    const TriangleMesh sphere = make_icosphere(8.0, {1, 2, 10}, 2);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-9.0, 11.0);
    for (int i = 0; i < 200; ++i) {
        const auto zs = vertical_crossings(sphere, coord(rng), coord(rng));
        CHECK(zs.size() % 2 == 0);
        for (std::size_t k = 1; k < zs.size(); ++k) {
            CHECK(zs[k - 1] <= zs[k]);
        }
    }
}

TEST_CASE("crossings through a degenerate position escape by perturbation") {
    const TriangleMesh cube = make_box({0, 0, 0}, {10, 10, 10});
    // Line exactly through a vertical face plane and an edge.
    const auto zs = vertical_crossings(cube, 10.0, 5.0);
    CHECK(zs.size() % 2 == 0);
    const auto corner = vertical_crossings(cube, 0.0, 0.0);
    CHECK(corner.size() % 2 == 0);
}

TEST_CASE("signed volume of canonical meshes") {
    const TriangleMesh cube = make_box({0, 0, 0}, {2, 3, 4});
    CHECK(cube.signed_volume() == doctest::Approx(24.0).epsilon(1e-12));
    const TriangleMesh sphere = make_icosphere(10.0, {0, 0, 0}, 3);
    // strictly below the analytic ball volume, close for 1280 faces
    CHECK(std::abs(sphere.signed_volume()) < 4188.7902);
    CHECK(std::abs(sphere.signed_volume()) > 4188.7902 * 0.98);
}
