#pragma once

#include <span>
#include <vector>

#include "foamfab/foam.hpp"
#include "foamfab/hexgrid.hpp"
#include "foamfab/rasterize.hpp"

namespace foamfab {

// Machine operating parameters. Feeds in mm/min; the defaults are the
// platform's standard travel and insertion speeds. inject_speed must be set
// from the job configuration before motion planning.
struct MachineParams {
    FoamBlock foam;
    double safe_margin = 5.0;
    double travel_feed = 5000.0;
    double insert_feed = 500.0;
    double inject_speed = 0.0;
    double mark_feed = 1000.0;

    double safe_height() const { return foam.height + safe_margin; }
    // Throws DomainError / ConfigError on non-positive values.
    void validate(bool require_inject_speed) const;
};

// The canonical per-column needle sequence: approach the cell at safe
// height, insert to the deepest segment bottom, ascend dispensing inside
// each segment (pausing across gaps), retract to safe height.
struct MotionSet {
    Axial cell;
    Vec2 position;
    double insertion_z = 0.0;
    std::vector<Segment> segments; // ascending dispense intervals
};

// Breadth-first flood-fill order over the 6-neighbor hex adjacency,
// restricted to the injected columns and rooted at the column nearest the
// grid center. Earlier columns scaffold the foam against compression, so
// every later column in a connected component touches an already-injected
// neighbor. Disconnected components follow in order of their
// nearest-to-center column; all ties break lexicographically on (q, r).
std::vector<Column> order_columns(std::vector<Column> columns, const HexGrid& grid);

std::vector<MotionSet> build_motion_sets(std::span<const Column> ordered,
                                         const MachineParams& mp);

// A contiguous slice of the global order whose injected volume fits one
// syringe load.
struct PrintFile {
    std::vector<Column> columns;
    double volume_mm3 = 0.0;
};

// Greedy contiguous partition; columns are never split. Throws
// ValidationError naming the column if any single column exceeds capacity.
std::vector<PrintFile> divide_jobs(std::span<const Column> ordered, double cell_area,
                                   double capacity_mm3);

struct JobReport {
    struct FileStats {
        double volume_mm3 = 0.0;
        double hydrogel_mass_g = 0.0;
        double duration_min = 0.0;
        int column_count = 0;
    };
    std::vector<FileStats> files;
    double total_volume_mm3 = 0.0;
    double total_mass_g = 0.0;
    double total_duration_min = 0.0;
    int total_columns = 0;
};

// Duration sums travel, insertion, injection, and retract time from the
// motion geometry; each file starts with the needle at the foam origin at
// safe height. Mass assumes the dispersion is essentially water (1 g/cm^3).
JobReport estimate_job(std::span<const PrintFile> files, const MachineParams& mp);

} // namespace foamfab
