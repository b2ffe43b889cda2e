#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "foamfab/calibration.hpp"
#include "foamfab/error.hpp"
#include "foamfab/hexgrid.hpp"

using namespace foamfab;

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kUnitHexArea = 1.5 * kSqrt3; // side-1 regular hexagon
} // namespace

TEST_CASE("full infill uses the exact tiling pitch") {
    const FoamBlock foam{60, 60, 50};
    const HexGrid grid = build_grid(foam, kUnitHexArea, 1.0);
    CHECK(grid.hex_side() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(grid.pitch() == doctest::Approx(kSqrt3).epsilon(1e-12));
}

TEST_CASE("quarter infill doubles the pitch") {
    const FoamBlock foam{60, 60, 50};
    const HexGrid full = build_grid(foam, kUnitHexArea, 1.0);
    const HexGrid quarter = build_grid(foam, kUnitHexArea, 0.25);
    CHECK(quarter.pitch() == doctest::Approx(2.0 * full.pitch()).epsilon(1e-12));
    CHECK(quarter.cell_area() == full.cell_area());
}

TEST_CASE("injected-area density equals the infill ratio") {
    const FoamBlock foam{200, 200, 50};
    for (double infill : {1.0, 0.5, 0.25}) {
        const HexGrid grid = build_grid(foam, kUnitHexArea, infill);
        const double covered = grid.cells().size() * grid.cell_area();
        const double density = covered / (foam.width * foam.depth);
        CHECK(density == doctest::Approx(infill).epsilon(0.03));
    }
}

TEST_CASE("one cell center coincides with the footprint center") {
    const FoamBlock foam{47, 31, 50};
    const HexGrid grid = build_grid(foam, 4.0, 0.8);
    const Vec2 c = grid.center_of({0, 0});
    CHECK(c.x == doctest::Approx(23.5).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(15.5).epsilon(1e-12));
}

TEST_CASE("every neighbor sits exactly one pitch away") {
    const FoamBlock foam{60, 60, 50};
    const HexGrid grid = build_grid(foam, 3.0, 0.7);
    const Axial cell{2, -1};
    std::set<std::pair<int, int>> seen;
    for (Axial step : HexGrid::kNeighborSteps) {
        const Axial n{cell.q + step.q, cell.r + step.r};
        seen.insert({n.q, n.r});
        const double d = norm(grid.center_of(n) - grid.center_of(cell));
        CHECK(d == doctest::Approx(grid.pitch()).epsilon(1e-12));
    }
    CHECK(seen.size() == 6);
}

TEST_CASE("cell_at inverts center_of") {
    const FoamBlock foam{80, 80, 50};
    const HexGrid grid = build_grid(foam, 2.3, 0.6);
    for (int q = -4; q <= 4; ++q) {
        for (int r = -4; r <= 4; ++r) {
            CHECK(grid.cell_at(grid.center_of({q, r})) == Axial{q, r});
        }
    }
    // off-center points snap to the nearest cell
    const Vec2 c = grid.center_of({1, 2});
    CHECK(grid.cell_at({c.x + 0.2, c.y - 0.2}) == Axial{1, 2});
}

TEST_CASE("cells are sorted by (q, r) and lie inside the footprint") {
    const FoamBlock foam{40, 30, 20};
    const HexGrid grid = build_grid(foam, 2.0, 1.0);
    const auto cells = grid.cells();
    REQUIRE(!cells.empty());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            CHECK(cells[i - 1] < cells[i]);
        }
        const Vec2 c = grid.center_of(cells[i]);
        CHECK(c.x >= 0.0);
        CHECK(c.x <= foam.width);
        CHECK(c.y >= 0.0);
        CHECK(c.y <= foam.depth);
    }
}

TEST_CASE("grid construction rejects bad arguments") {
    const FoamBlock foam{10, 10, 10};
    CHECK_THROWS_AS(build_grid(foam, 200.0, 1.0), DomainError); // cell > footprint
    CHECK_THROWS_AS(build_grid(foam, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(build_grid(foam, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(build_grid(foam, 1.0, 1.5), DomainError);
    CHECK_THROWS_AS(build_grid(FoamBlock{0, 10, 10}, 1.0, 1.0), DomainError);
}
