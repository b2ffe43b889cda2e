#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "foamfab/error.hpp"
#include "foamfab/plan.hpp"
#include "support.hpp"

using namespace foamfab;
using testsupport::component_labels;
using testsupport::random_connected_columns;

namespace {

const FoamBlock kFoam{200, 200, 50};

HexGrid wide_grid() { return build_grid(kFoam, 2.0, 1.0); }

Column column_at(const HexGrid& grid, Axial cell, std::vector<Segment> segments = {{0.0, 10.0}}) {
    return {cell, grid.center_of(cell), std::move(segments)};
}

// Brute-force scaffolding audit: within each contiguous component run, every
// column after the first must have an already-output hex neighbor.
void check_scaffolding(const std::vector<Column>& input, const std::vector<Column>& ordered) {
    REQUIRE(ordered.size() == input.size());
    std::set<std::pair<int, int>> input_cells;
    for (const Column& c : input) {
        input_cells.insert({c.cell.q, c.cell.r});
    }
    std::set<std::pair<int, int>> output_cells;
    std::set<std::pair<int, int>> emitted;
    const std::vector<int> labels = component_labels(ordered);
    std::set<int> finished_components;
    int current_component = -1;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const Column& c = ordered[i];
        output_cells.insert({c.cell.q, c.cell.r});
        if (labels[i] != current_component) {
            // a new component begins; the previous one must never reappear
            CHECK(finished_components.insert(current_component).second);
            CHECK(finished_components.find(labels[i]) == finished_components.end());
            current_component = labels[i];
        } else {
            bool has_earlier_neighbor = false;
            for (Axial step : HexGrid::kNeighborSteps) {
                if (emitted.count({c.cell.q + step.q, c.cell.r + step.r})) {
                    has_earlier_neighbor = true;
                    break;
                }
            }
            CHECK(has_earlier_neighbor);
        }
        emitted.insert({c.cell.q, c.cell.r});
    }
    CHECK(output_cells == input_cells); // permutation
}

} // namespace

TEST_CASE("a single column orders to itself") {
    const HexGrid grid = wide_grid();
    const std::vector<Column> columns{column_at(grid, {3, -2})};
    const auto ordered = order_columns(columns, grid);
    REQUIRE(ordered.size() == 1);
    CHECK(ordered[0].cell == Axial{3, -2});
}

TEST_CASE("empty input orders to empty output") {
    CHECK(order_columns({}, wide_grid()).empty());
}

TEST_CASE("rosette orders center first, ring afterwards") {
    const HexGrid grid = wide_grid();
    std::vector<Column> columns{column_at(grid, {0, 0})};
    for (Axial step : HexGrid::kNeighborSteps) {
        columns.push_back(column_at(grid, step));
    }
    // shuffle so ordering cannot ride on input order
    std::mt19937_64 rng(3);
    std::shuffle(columns.begin(), columns.end(), rng);
    const auto ordered = order_columns(columns, grid);
    REQUIRE(ordered.size() == 7);
    CHECK(ordered[0].cell == Axial{0, 0});
    check_scaffolding(columns, ordered);
    // BFS ring order follows the fixed neighbor enumeration
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(ordered[i + 1].cell == HexGrid::kNeighborSteps[i]);
    }
}

TEST_CASE("disjoint clusters become contiguous runs nearest-first") {
    const HexGrid grid = wide_grid();
    std::vector<Column> columns;
    for (int q = 0; q < 3; ++q) {
        columns.push_back(column_at(grid, {q, 1}));       // near the center
        columns.push_back(column_at(grid, {q + 20, 10})); // far cluster
    }
    const auto ordered = order_columns(columns, grid);
    REQUIRE(ordered.size() == 6);
    for (int i = 0; i < 3; ++i) {
        CHECK(ordered[i].cell.r == 1);
        CHECK(ordered[i + 3].cell.r == 10);
    }
    check_scaffolding(columns, ordered);
}

TEST_CASE("ordering is independent of input permutation") {
    const HexGrid grid = wide_grid();
    std::mt19937_64 rng(17);
    auto columns = random_connected_columns(rng, grid, 60);
    auto shuffled = columns;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = order_columns(columns, grid);
    const auto b = order_columns(shuffled, grid);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].cell == b[i].cell);
    }
}

TEST_CASE("scaffolding holds over randomized footprints") {
    const HexGrid grid = wide_grid();
    std::mt19937_64 rng(23);
    for (int round = 0; round < 25; ++round) {
        std::uniform_int_distribution<int> size(1, 120);
        auto columns = random_connected_columns(rng, grid, size(rng));
        check_scaffolding(columns, order_columns(columns, grid));
    }
    // multi-component footprints
    for (int round = 0; round < 25; ++round) {
        std::uniform_int_distribution<int> size(1, 60);
        auto columns = random_connected_columns(rng, grid, size(rng), {0, 0});
        auto far = random_connected_columns(rng, grid, size(rng), {30, 5});
        auto third = random_connected_columns(rng, grid, size(rng), {-25, 20});
        columns.insert(columns.end(), far.begin(), far.end());
        columns.insert(columns.end(), third.begin(), third.end());
        // blobs may collide; deduplicate cells to keep the input valid
        std::set<std::pair<int, int>> seen;
        std::vector<Column> unique;
        for (const Column& c : columns) {
            if (seen.insert({c.cell.q, c.cell.r}).second) {
                unique.push_back(c);
            }
        }
        check_scaffolding(unique, order_columns(unique, grid));
    }
}

TEST_CASE("columns not on the grid are rejected") {
    const HexGrid grid = wide_grid();
    Column off = column_at(grid, {1, 1});
    off.center.x += 0.5;
    CHECK_THROWS_AS(order_columns({off}, grid), ValidationError);
    // duplicate cells are rejected too
    CHECK_THROWS_AS(order_columns({column_at(grid, {1, 1}), column_at(grid, {1, 1})}, grid),
                    ValidationError);
}

TEST_CASE("motion set follows the approach-insert-dispense-retract grammar") {
    MachineParams mp;
    mp.foam = {60, 60, 50};
    mp.inject_speed = 1000.0;
    const HexGrid grid = build_grid(mp.foam, 2.0, 1.0);

    SUBCASE("single segment spans the full height") {
        const auto motions = build_motion_sets(
            std::vector<Column>{column_at(grid, {0, 0}, {{0.0, 50.0}})}, mp);
        REQUIRE(motions.size() == 1);
        CHECK(mp.safe_height() == 55.0);
        CHECK(motions[0].insertion_z == 0.0);
        REQUIRE(motions[0].segments.size() == 1);
        CHECK(motions[0].segments[0] == Segment{0.0, 50.0});
    }
    SUBCASE("gap between segments keeps one insertion") {
        const auto motions = build_motion_sets(
            std::vector<Column>{column_at(grid, {0, 0}, {{0.0, 20.0}, {30.0, 50.0}})}, mp);
        REQUIRE(motions.size() == 1);
        CHECK(motions[0].insertion_z == 0.0);
        REQUIRE(motions[0].segments.size() == 2);
        CHECK(motions[0].segments[1] == Segment{30.0, 50.0});
    }
    SUBCASE("empty plan yields no motions") {
        CHECK(build_motion_sets(std::vector<Column>{}, mp).empty());
    }
    SUBCASE("unset inject speed is a configuration error") {
        MachineParams unset = mp;
        unset.inject_speed = 0.0;
        CHECK_THROWS_AS(build_motion_sets(
                            std::vector<Column>{column_at(grid, {0, 0}, {{0.0, 50.0}})}, unset),
                        ConfigError);
    }
    SUBCASE("segments outside the foam are rejected") {
        CHECK_THROWS_AS(build_motion_sets(
                            std::vector<Column>{column_at(grid, {0, 0}, {{0.0, 51.0}})}, mp),
                        ValidationError);
    }
}

TEST_CASE("greedy division fills files up to capacity") {
    const HexGrid grid = wide_grid();
    std::vector<Column> columns;
    for (int q = 0; q < 10; ++q) {
        columns.push_back(column_at(grid, {q, 0}, {{0.0, 5.0}})); // 2 mm^2 x 5 mm = 10 mm^3
    }
    const auto files = divide_jobs(columns, grid.cell_area(), 40.0);
    REQUIRE(files.size() == 3);
    CHECK(files[0].volume_mm3 == doctest::Approx(40.0));
    CHECK(files[1].volume_mm3 == doctest::Approx(40.0));
    CHECK(files[2].volume_mm3 == doctest::Approx(20.0));
    CHECK(files[0].columns.size() == 4);
    // concatenation reproduces the order
    std::vector<Axial> cells;
    for (const auto& file : files) {
        for (const auto& c : file.columns) {
            cells.push_back(c.cell);
        }
    }
    REQUIRE(cells.size() == columns.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells[i] == columns[i].cell);
    }
}

TEST_CASE("capacity at least the total volume gives one file") {
    const HexGrid grid = wide_grid();
    std::vector<Column> columns{column_at(grid, {0, 0}), column_at(grid, {1, 0})};
    const auto files = divide_jobs(columns, grid.cell_area(), 1e6);
    CHECK(files.size() == 1);
}

TEST_CASE("a column bigger than the syringe is infeasible and named") {
    const HexGrid grid = wide_grid();
    const std::vector<Column> columns{column_at(grid, {4, -7}, {{0.0, 25.0}})}; // 50 mm^3
    CHECK_THROWS_WITH_AS(divide_jobs(columns, grid.cell_area(), 40.0),
                         doctest::Contains("(4, -7)"), ValidationError);
}

TEST_CASE("division over random plans respects capacity and order") {
    const HexGrid grid = wide_grid();
    std::mt19937_64 rng(31);
    for (int round = 0; round < 30; ++round) {
        std::uniform_int_distribution<int> size(1, 150);
        const auto columns = random_connected_columns(rng, grid, size(rng));
        double max_volume = 0.0;
        for (const Column& c : columns) {
            max_volume = std::max(max_volume, grid.cell_area() * c.total_length());
        }
        std::uniform_real_distribution<double> headroom(1.0, 4.0);
        const double capacity = max_volume * headroom(rng);
        const auto files = divide_jobs(columns, grid.cell_area(), capacity);
        std::size_t at = 0;
        for (const auto& file : files) {
            CHECK(file.volume_mm3 <= capacity + 1e-9);
            CHECK(!file.columns.empty());
            double volume = 0.0;
            for (const Column& c : file.columns) {
                REQUIRE(at < columns.size());
                CHECK(c.cell == columns[at].cell);
                volume += grid.cell_area() * c.total_length();
                ++at;
            }
            CHECK(file.volume_mm3 == doctest::Approx(volume).epsilon(1e-12));
        }
        CHECK(at == columns.size());
    }
}

TEST_CASE("job estimate sums travel, insertion, injection, and retract") {
    MachineParams mp;
    mp.foam = {60, 60, 50};
    mp.inject_speed = 1000.0;
    const HexGrid grid = build_grid(mp.foam, 2.0, 1.0);

    SUBCASE("empty plan estimates zero") {
        const JobReport report = estimate_job(std::vector<PrintFile>{}, mp);
        CHECK(report.total_duration_min == 0.0);
        CHECK(report.total_volume_mm3 == 0.0);
        CHECK(report.files.empty());
    }
    SUBCASE("single full-height column") {
        const Column column = column_at(grid, {0, 0}, {{0.0, 50.0}});
        const std::vector<PrintFile> files{{{column}, grid.cell_area() * 50.0}};
        const JobReport report = estimate_job(files, mp);
        REQUIRE(report.files.size() == 1);
        const double horizontal = norm(column.center - Vec2{0.0, 0.0});
        const double expected = horizontal / 5000.0 // travel in
                                + 55.0 / 500.0      // insert to the bottom
                                + 50.0 / 1000.0     // dispense ascent: 0.05 min
                                + 5.0 / 5000.0;     // retract
        CHECK(report.files[0].duration_min == doctest::Approx(expected).epsilon(1e-12));
        CHECK(report.files[0].hydrogel_mass_g ==
              doctest::Approx(grid.cell_area() * 50.0 / 1000.0).epsilon(1e-12));
    }
    SUBCASE("ten-column plan matches an independent summation") {
        std::mt19937_64 rng(41);
        auto columns = random_connected_columns(rng, grid, 10);
        const auto ordered = order_columns(columns, grid);
        const auto files = divide_jobs(ordered, grid.cell_area(), 1e9);
        const JobReport report = estimate_job(files, mp);
        double expected = 0.0;
        Vec2 at{0.0, 0.0};
        for (const Column& c : ordered) {
            expected += norm(c.center - at) / mp.travel_feed;
            expected += (mp.safe_height() - c.segments.front().z_low) / mp.insert_feed;
            expected += (c.segments.back().z_high - c.segments.front().z_low) / mp.inject_speed;
            expected += (mp.safe_height() - c.segments.back().z_high) / mp.travel_feed;
            at = c.center;
        }
        CHECK(report.total_duration_min == doctest::Approx(expected).epsilon(1e-12));
        CHECK(report.total_columns == 10);
        CHECK(report.total_volume_mm3 ==
              doctest::Approx(columns_volume(ordered, grid.cell_area())).epsilon(1e-12));
    }
}
