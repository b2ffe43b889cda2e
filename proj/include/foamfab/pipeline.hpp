#pragma once

#include <string>
#include <vector>

#include "foamfab/config.hpp"
#include "foamfab/gcode.hpp"
#include "foamfab/plan.hpp"
#include "foamfab/silhouette.hpp"
#include "foamfab/svg.hpp"

namespace foamfab {

// One emitted injection file: a contiguous slice of the planned order.
struct PlannedFile {
    std::vector<Column> columns;
    std::vector<MotionSet> motions;
    double volume_mm3 = 0.0;
    double cell_area = 0.0;
    double hydration_ratio = 0.0;
    int group = 0;
};

// Full planning result for one job configuration.
struct SlicedJob {
    JobConfig config;
    MachineParams mp;
    std::vector<PlannedFile> files;
    std::vector<Contour> silhouettes;
    JobReport report;
    std::vector<PreviewCell> preview_cells;
};

// Runs the whole design pipeline: loads calibration and meshes, sizes the
// hexagon cells from the injection rate, rasterizes, orders, and divides.
// Bodies sharing (hydration, infill) are planned on one shared grid;
// differing attributes force separate grids and separate print files, since
// a syringe holds a single hydration batch.
SlicedJob slice_job(const JobConfig& config);

std::string render_report(const SlicedJob& job);

// Writes inject_001.gcode .. inject_NNN.gcode, mark.gcode, and report.txt.
// All writes are atomic (write-temp-then-rename).
void write_slice_outputs(const SlicedJob& job, const std::string& out_dir);

void write_mark_output(const SlicedJob& job, const std::string& out_dir);

void write_preview_output(const SlicedJob& job, const std::string& out_dir);

} // namespace foamfab
