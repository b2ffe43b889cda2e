#include "foamfab/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include "foamfab/calibration.hpp"
#include "foamfab/error.hpp"
#include "foamfab/mesh.hpp"
#include "foamfab/solid.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

struct LoadedBody {
    BodySpec spec;
    std::size_t config_index = 0;
};

struct BodyGroup {
    std::vector<std::size_t> body_indices;
    double cell_area = 0.0;
    double hydration_ratio = 0.0;
    double infill_ratio = 0.0;
};

MachineParams machine_params(const JobConfig& config) {
    MachineParams mp;
    mp.foam = config.foam;
    mp.safe_margin = config.safe_margin;
    mp.travel_feed = config.travel_feed;
    mp.insert_feed = config.insert_feed;
    mp.inject_speed = config.inject_speed;
    mp.mark_feed = config.mark_feed;
    mp.validate(/*require_inject_speed=*/true);
    return mp;
}

// Bodies on different grids cannot collide on a shared cell id, so overlap
// is checked geometrically: a column axis of one body entering another
// body's solid claims the column for both.
void check_cross_group_overlap(const std::vector<LoadedBody>& bodies,
                               const std::vector<std::vector<Column>>& columns_per_body,
                               const std::vector<int>& group_of_body) {
    for (std::size_t a = 0; a < bodies.size(); ++a) {
        for (std::size_t b = 0; b < bodies.size(); ++b) {
            if (a == b || group_of_body[a] == group_of_body[b]) {
                continue;
            }
            for (const Column& column : columns_per_body[a]) {
                for (const Segment& segment : column.segments) {
                    const Vec3 probe{column.center.x, column.center.y,
                                     (segment.z_low + segment.z_high) / 2.0};
                    if (point_in_solid(bodies[b].spec.mesh, probe)) {
                        throw ValidationError(
                            "bodies " + std::to_string(bodies[a].config_index + 1) + " and " +
                            std::to_string(bodies[b].config_index + 1) +
                            " overlap: column (" + std::to_string(column.cell.q) + ", " +
                            std::to_string(column.cell.r) + ") is claimed by both");
                    }
                }
            }
        }
    }
}

} // namespace

SlicedJob slice_job(const JobConfig& config) {
    SlicedJob job;
    job.config = config;
    job.mp = machine_params(config);

    const CalibrationTable calibration = CalibrationTable::load(config.calibration_path);

    std::vector<LoadedBody> bodies;
    for (std::size_t i = 0; i < config.bodies.size(); ++i) {
        const BodyConfig& bc = config.bodies[i];
        BodySpec spec;
        spec.mesh = load_mesh_file(bc.mesh_path);
        spec.infill_ratio = bc.infill_ratio;
        spec.hydration_ratio = bc.hydration_ratio;
        validate_body(spec, config.foam);
        bodies.push_back({std::move(spec), i});
    }

    // Group bodies that share a grid. The cell area follows from the
    // calibrated injection rate at this job's movement speed.
    std::map<std::pair<double, double>, int> group_ids; // (hydration, infill) -> group
    std::vector<BodyGroup> groups;
    std::vector<int> group_of_body(bodies.size(), 0);
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        const BodySpec& spec = bodies[i].spec;
        int id;
        if (config.group_by_body) {
            id = static_cast<int>(groups.size());
            groups.push_back({});
        } else {
            auto key = std::make_pair(spec.hydration_ratio, spec.infill_ratio);
            auto [it, inserted] = group_ids.try_emplace(key, static_cast<int>(groups.size()));
            if (inserted) {
                groups.push_back({});
            }
            id = it->second;
        }
        BodyGroup& group = groups[id];
        if (group.body_indices.empty()) {
            group.hydration_ratio = spec.hydration_ratio;
            group.infill_ratio = spec.infill_ratio;
            const double rate = calibration.rate_at(config.inject_speed, spec.hydration_ratio);
            group.cell_area = hexagon_area(rate, config.inject_speed);
        }
        group.body_indices.push_back(i);
        group_of_body[i] = id;
    }

    std::vector<std::vector<Column>> columns_per_body(bodies.size());
    int global_order = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const BodyGroup& group = groups[g];
        const HexGrid grid = build_grid(config.foam, group.cell_area, group.infill_ratio);

        std::vector<Column> merged;
        std::map<Axial, std::size_t> claimed; // cell -> config body index
        for (std::size_t body_index : group.body_indices) {
            auto columns = rasterize(bodies[body_index].spec, grid, config.z_step);
            for (const Column& column : columns) {
                auto [it, inserted] =
                    claimed.emplace(column.cell, bodies[body_index].config_index);
                if (!inserted) {
                    throw ValidationError(
                        "bodies " + std::to_string(it->second + 1) + " and " +
                        std::to_string(bodies[body_index].config_index + 1) +
                        " overlap: column (" + std::to_string(column.cell.q) + ", " +
                        std::to_string(column.cell.r) + ") is claimed by both");
                }
                merged.push_back(column);
            }
            columns_per_body[body_index] = std::move(columns);
        }

        const std::vector<Column> ordered = order_columns(std::move(merged), grid);
        const std::vector<PrintFile> prints =
            divide_jobs(ordered, group.cell_area, config.syringe_capacity);
        const double hex_side_mm = hex_side(group.cell_area);
        for (const PrintFile& print : prints) {
            PlannedFile file;
            file.columns = print.columns;
            file.motions = build_motion_sets(print.columns, job.mp);
            file.volume_mm3 = print.volume_mm3;
            file.cell_area = group.cell_area;
            file.hydration_ratio = group.hydration_ratio;
            file.group = static_cast<int>(g);
            const int file_index = static_cast<int>(job.files.size());
            for (const Column& column : print.columns) {
                job.preview_cells.push_back(
                    {column.center, hex_side_mm, ++global_order, file_index});
            }
            job.files.push_back(std::move(file));
        }

        JobReport group_report = estimate_job(prints, job.mp);
        for (const auto& stats : group_report.files) {
            job.report.files.push_back(stats);
        }
        job.report.total_volume_mm3 += group_report.total_volume_mm3;
        job.report.total_mass_g += group_report.total_mass_g;
        job.report.total_duration_min += group_report.total_duration_min;
        job.report.total_columns += group_report.total_columns;
    }

    check_cross_group_overlap(bodies, columns_per_body, group_of_body);

    for (const LoadedBody& body : bodies) {
        auto contours = project_silhouette(body.spec, config.silhouette_resolution);
        job.silhouettes.insert(job.silhouettes.end(), contours.begin(), contours.end());
    }
    return job;
}

std::string render_report(const SlicedJob& job) {
    std::ostringstream out;
    out << "foamfab job report\n";
    out << "==================\n\n";
    out << "job: " << job.config.job_name << "\n";
    out << "foam: " << fmt_num(job.config.foam.width) << " x " << fmt_num(job.config.foam.depth)
        << " x " << fmt_num(job.config.foam.height) << " mm\n";
    out << "inject speed: " << fmt_num(job.config.inject_speed) << " mm/min\n";
    out << "syringe capacity: " << fmt_num(job.config.syringe_capacity) << " mm3\n";
    out << "bodies: " << job.config.bodies.size() << ", print files: " << job.files.size()
        << "\n\n";

    out << "file,columns,hydration_ratio,volume_mm3,hydrogel_mass_g,duration_min\n";
    char name[32];
    for (std::size_t i = 0; i < job.files.size(); ++i) {
        const auto& stats = job.report.files[i];
        std::snprintf(name, sizeof(name), "inject_%03zu.gcode", i + 1);
        out << name << ',' << stats.column_count << ',' << fmt_num(job.files[i].hydration_ratio)
            << ',' << fmt_fixed(stats.volume_mm3, 3) << ',' << fmt_fixed(stats.hydrogel_mass_g, 3)
            << ',' << fmt_fixed(stats.duration_min, 3) << '\n';
    }
    out << "total," << job.report.total_columns << ",," << fmt_fixed(job.report.total_volume_mm3, 3)
        << ',' << fmt_fixed(job.report.total_mass_g, 3) << ','
        << fmt_fixed(job.report.total_duration_min, 3) << '\n';

    out << "\noperator checklist (suggested steps, adapt to your setup):\n";
    out << "  1. Tape the foam block to the platform with its corner at the machine origin.\n";
    out << "  2. Run mark.gcode to trace the body outlines on the top face.\n";
    out << "  3. Mix the hydrogel batch for the next file's hydration ratio, shred, degas,\n";
    out << "     and load the syringe.\n";
    out << "  4. Run the inject files in order, refilling the syringe between files.\n";
    out << "  5. After the final file, cut along the marked outlines with a hot wire.\n";
    return out.str();
}

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

} // namespace

void write_slice_outputs(const SlicedJob& job, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const int count = static_cast<int>(job.files.size());
    for (int i = 0; i < count; ++i) {
        gcode::JobMeta meta{job.config.job_name, i + 1, count};
        const std::string text =
            gcode::emit_injection(job.files[i].motions, job.mp, job.files[i].cell_area, meta);
        char name[32];
        std::snprintf(name, sizeof(name), "inject_%03d.gcode", i + 1);
        write_file_atomic(join_path(out_dir, name), text);
    }
    write_mark_output(job, out_dir);
    write_file_atomic(join_path(out_dir, "report.txt"), render_report(job));
}

void write_mark_output(const SlicedJob& job, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    gcode::JobMeta meta{job.config.job_name, 1, 1};
    write_file_atomic(join_path(out_dir, "mark.gcode"),
                      gcode::emit_marking(job.silhouettes, job.mp, meta));
}

void write_preview_output(const SlicedJob& job, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    PreviewDoc doc{job.config.foam, job.preview_cells, job.silhouettes};
    write_file_atomic(join_path(out_dir, "preview.svg"), render_preview_svg(doc));
}

} // namespace foamfab
