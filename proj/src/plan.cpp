#include "foamfab/plan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "foamfab/error.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

constexpr double kDensityGPerMm3 = 1e-3; // hydrogel dispersion ~ water

std::string column_name(Axial cell) {
    return "(" + std::to_string(cell.q) + ", " + std::to_string(cell.r) + ")";
}

} // namespace

void MachineParams::validate(bool require_inject_speed) const {
    foam.validate();
    if (!(safe_margin > 0.0 && travel_feed > 0.0 && insert_feed > 0.0 && mark_feed > 0.0)) {
        throw DomainError("machine parameters must be strictly positive");
    }
    if (require_inject_speed && !(inject_speed > 0.0)) {
        throw ConfigError("inject_speed is not set");
    }
}

std::vector<Column> order_columns(std::vector<Column> columns, const HexGrid& grid) {
    if (columns.empty()) {
        return columns;
    }
    std::unordered_map<Axial, std::size_t, AxialHash> index;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const Column& column = columns[i];
        if (!index.emplace(column.cell, i).second) {
            throw ValidationError("duplicate column " + column_name(column.cell));
        }
        Vec2 expected = grid.center_of(column.cell);
        if (norm(expected - column.center) > 1e-6) {
            throw ValidationError("column " + column_name(column.cell) +
                                  " does not belong to the grid");
        }
    }

    // Candidate roots: nearest to the grid center, ties lexicographic (q, r).
    std::vector<std::size_t> by_center(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) {
        by_center[i] = i;
    }
    const Vec2 center = grid.footprint_center();
    std::sort(by_center.begin(), by_center.end(), [&](std::size_t a, std::size_t b) {
        const double da = norm(columns[a].center - center);
        const double db = norm(columns[b].center - center);
        if (da != db) {
            return da < db;
        }
        return columns[a].cell < columns[b].cell;
    });

    std::vector<Column> ordered;
    ordered.reserve(columns.size());
    std::vector<bool> visited(columns.size(), false);
    for (std::size_t root : by_center) {
        if (visited[root]) {
            continue;
        }
        // BFS over injected cells; neighbors enumerated in the fixed
        // axial-direction order so the result is reproducible.
        std::deque<std::size_t> frontier{root};
        visited[root] = true;
        while (!frontier.empty()) {
            std::size_t current = frontier.front();
            frontier.pop_front();
            ordered.push_back(columns[current]);
            for (Axial step : HexGrid::kNeighborSteps) {
                Axial neighbor{columns[current].cell.q + step.q, columns[current].cell.r + step.r};
                auto it = index.find(neighbor);
                if (it != index.end() && !visited[it->second]) {
                    visited[it->second] = true;
                    frontier.push_back(it->second);
                }
            }
        }
    }
    return ordered;
}

std::vector<MotionSet> build_motion_sets(std::span<const Column> ordered,
                                         const MachineParams& mp) {
    mp.validate(/*require_inject_speed=*/true);
    std::vector<MotionSet> motions;
    motions.reserve(ordered.size());
    for (const Column& column : ordered) {
        if (column.segments.empty()) {
            throw ValidationError("column " + column_name(column.cell) + " has no segments");
        }
        for (std::size_t i = 0; i < column.segments.size(); ++i) {
            const Segment& s = column.segments[i];
            if (!(s.z_low < s.z_high) || s.z_low < -1e-9 || s.z_high > mp.foam.height + 1e-9) {
                throw ValidationError("column " + column_name(column.cell) +
                                      " segment outside [0, foam.height]");
            }
            if (i > 0 && !(column.segments[i - 1].z_high < s.z_low)) {
                throw ValidationError("column " + column_name(column.cell) +
                                      " segments not ascending/disjoint");
            }
        }
        MotionSet motion;
        motion.cell = column.cell;
        motion.position = column.center;
        motion.insertion_z = column.segments.front().z_low;
        motion.segments = column.segments;
        motions.push_back(std::move(motion));
    }
    return motions;
}

std::vector<PrintFile> divide_jobs(std::span<const Column> ordered, double cell_area,
                                   double capacity_mm3) {
    if (!(cell_area > 0.0)) {
        throw DomainError("cell area must be positive");
    }
    if (!(capacity_mm3 > 0.0)) {
        throw DomainError("syringe capacity must be positive");
    }
    std::vector<PrintFile> files;
    PrintFile current;
    for (const Column& column : ordered) {
        const double volume = cell_area * column.total_length();
        if (volume > capacity_mm3) {
            throw ValidationError("column " + column_name(column.cell) + " alone needs " +
                                  fmt_fixed(volume, 3) + " mm^3, more than the syringe capacity " +
                                  fmt_fixed(capacity_mm3, 3) +
                                  " mm^3; columns cannot be split across files");
        }
        if (current.volume_mm3 + volume > capacity_mm3 && !current.columns.empty()) {
            files.push_back(std::move(current));
            current = {};
        }
        current.columns.push_back(column);
        current.volume_mm3 += volume;
    }
    if (!current.columns.empty()) {
        files.push_back(std::move(current));
    }
    return files;
}

JobReport estimate_job(std::span<const PrintFile> files, const MachineParams& mp) {
    mp.validate(/*require_inject_speed=*/!files.empty());
    JobReport report;
    for (const PrintFile& file : files) {
        JobReport::FileStats stats;
        stats.volume_mm3 = file.volume_mm3;
        stats.hydrogel_mass_g = file.volume_mm3 * kDensityGPerMm3;
        stats.column_count = static_cast<int>(file.columns.size());
        Vec2 position{0.0, 0.0}; // needle parked at the foam origin
        for (const Column& column : file.columns) {
            const double horizontal = norm(column.center - position);
            const double descent = mp.safe_height() - column.segments.front().z_low;
            const double inject_ascent =
                column.segments.back().z_high - column.segments.front().z_low;
            const double retract = mp.safe_height() - column.segments.back().z_high;
            stats.duration_min += horizontal / mp.travel_feed + descent / mp.insert_feed +
                                  inject_ascent / mp.inject_speed + retract / mp.travel_feed;
            position = column.center;
        }
        report.total_volume_mm3 += stats.volume_mm3;
        report.total_mass_g += stats.hydrogel_mass_g;
        report.total_duration_min += stats.duration_min;
        report.total_columns += stats.column_count;
        report.files.push_back(stats);
    }
    return report;
}

} // namespace foamfab
