#include "foamfab/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <ostream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "foamfab/calibration.hpp"
#include "foamfab/config.hpp"
#include "foamfab/error.hpp"
#include "foamfab/material.hpp"
#include "foamfab/pipeline.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

bool color_enabled(const std::ostream& stream) {
    if (std::getenv("FOAMFAB_NO_COLOR") != nullptr) {
        return false;
    }
    return &stream == &std::cerr && isatty(2);
}

void print_error(std::ostream& err, const std::string& message) {
    if (color_enabled(err)) {
        err << "\033[31merror:\033[0m " << message << "\n";
    } else {
        err << "error: " << message << "\n";
    }
}

struct AnalyzeArgs {
    double spa_grams = 1.0;
    double ratio = 0.5;
    double dry_volume = 1.0;
    double volume = 0.0;
    std::string method = "room_air";
    double joint_l = 0.0;
    double joint_t = 1.0;
    std::string csv_path;
    double load = 200.0;
    double threshold = 0.05;
    int window = 2;
    double relax = 0.02;
};

material::DryingMethod parse_method(const std::string& name) {
    if (name == "room_air") {
        return material::DryingMethod::RoomAir;
    }
    if (name == "hot_air") {
        return material::DryingMethod::HotAir;
    }
    if (name == "salt") {
        return material::DryingMethod::Salt;
    }
    throw ConfigError("unknown drying method '" + name + "' (room_air, hot_air, salt)");
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"design-to-G-code toolkit for hydrogel injection into foam"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool verbose = false;
    bool group_by_body = false;

    auto add_job_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "job configuration file")->required();
        cmd->add_option("--out", out_dir, "output directory (default: current)");
        cmd->add_flag("--group-by-body", group_by_body,
                      "never mix bodies in one print file (one hydration batch per file)");
        cmd->add_flag("--verbose", verbose, "progress details");
    };

    CLI::App* slice = app.add_subcommand("slice", "plan the job and write injection G-code, "
                                                  "outline marking G-code, and a report");
    add_job_options(slice);
    CLI::App* mark = app.add_subcommand("mark", "write only the outline marking G-code");
    add_job_options(mark);
    CLI::App* preview = app.add_subcommand("preview", "write an SVG preview of the plan");
    add_job_options(preview);

    CLI::App* analyze = app.add_subcommand("analyze", "material analysis queries");
    analyze->require_subcommand(1);
    AnalyzeArgs args;

    CLI::App* mix = analyze->add_subcommand("mix", "water mass for a hydration ratio");
    mix->add_option("--spa-grams", args.spa_grams, "dry SPA mass in grams")->required();
    mix->add_option("--ratio", args.ratio, "pre-injection hydration ratio in [0, 1]")->required();

    CLI::App* swell = analyze->add_subcommand("swell", "fully hydrated volume of dry hydrogel");
    swell->add_option("--dry-volume", args.dry_volume, "dry volume in mm3")->required();

    CLI::App* drying = analyze->add_subcommand("drying", "drying time estimate");
    drying->add_option("--volume", args.volume, "piece volume in mm3")->required();
    drying->add_option("--method", args.method, "room_air | hot_air | salt");

    CLI::App* joint = analyze->add_subcommand("joint", "maximum bend angle of a joint");
    joint->add_option("--l", args.joint_l, "dehydrated gap length in mm")->required();
    joint->add_option("--t", args.joint_t, "hydrated wall thickness in mm")->required();

    CLI::App* stiffness = analyze->add_subcommand("stiffness", "deformation at a hydration ratio");
    stiffness->add_option("--csv", args.csv_path, "stiffness table CSV")->required();
    stiffness->add_option("--ratio", args.ratio, "hydration ratio")->required();
    stiffness->add_option("--load", args.load, "reference load in grams (default 200)");

    CLI::App* bends = analyze->add_subcommand("bends", "detect bend events in a resistance log");
    bends->add_option("--csv", args.csv_path, "resistance series CSV")->required();
    bends->add_option("--threshold", args.threshold, "fractional drop threshold (default 0.05)");
    bends->add_option("--window", args.window, "detection window in samples (default 2)");
    bends->add_option("--relax", args.relax, "baseline relaxation per sample (default 0.02)");

    CLI::App* calcheck = app.add_subcommand("calibrate-check", "validate a calibration table");
    std::string cal_path;
    double cal_speed = 0.0;
    double cal_ratio = 0.0;
    calcheck->add_option("--file", cal_path, "calibration CSV")->required();
    calcheck->add_option("--speed", cal_speed, "query injection movement speed, mm/min");
    calcheck->add_option("--ratio", cal_ratio, "query hydration ratio");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (slice->parsed() || mark->parsed() || preview->parsed()) {
            JobConfig config = load_job_config(config_path);
            if (group_by_body) {
                config.group_by_body = true;
            }
            if (verbose) {
                out << "loaded config: " << config.bodies.size() << " body(ies), foam "
                    << fmt_num(config.foam.width) << " x " << fmt_num(config.foam.depth) << " x "
                    << fmt_num(config.foam.height) << " mm\n";
            }
            const SlicedJob job = slice_job(config);
            if (verbose) {
                out << "planned " << job.report.total_columns << " column(s) in "
                    << job.files.size() << " file(s), total volume "
                    << fmt_fixed(job.report.total_volume_mm3, 3) << " mm3\n";
            }
            if (slice->parsed()) {
                write_slice_outputs(job, out_dir);
                out << "wrote " << job.files.size() << " injection file(s), mark.gcode, and "
                    << "report.txt to " << out_dir << "\n";
            } else if (mark->parsed()) {
                write_mark_output(job, out_dir);
                out << "wrote mark.gcode to " << out_dir << "\n";
            } else {
                write_preview_output(job, out_dir);
                out << "wrote preview.svg to " << out_dir << "\n";
            }
            return 0;
        }

        if (analyze->parsed()) {
            if (mix->parsed()) {
                out << "water: " << fmt_num(material::mixing_water_mass(args.spa_grams, args.ratio))
                    << " g\n";
            } else if (swell->parsed()) {
                out << "swelled volume: " << fmt_num(material::swelled_volume(args.dry_volume))
                    << " mm3\n";
            } else if (drying->parsed()) {
                const auto estimate =
                    material::drying_time(args.volume, parse_method(args.method));
                out << "drying time: " << (estimate.lower_bound ? ">= " : "")
                    << fmt_num(estimate.hours) << " h ("
                    << (estimate.lower_bound ? "lower bound" : "estimate") << ")\n";
            } else if (joint->parsed()) {
                out << "theta: " << fmt_num(material::max_bend_angle(args.joint_l, args.joint_t))
                    << " rad\n";
            } else if (stiffness->parsed()) {
                const auto table = material::StiffnessTable::load(args.csv_path);
                out << "deformation: " << fmt_num(table.deformation_at(args.ratio, args.load))
                    << " mm (ratio " << fmt_num(args.ratio) << ", load " << fmt_num(args.load)
                    << " g)\n";
            } else if (bends->parsed()) {
                const auto series = material::ResistanceSeries::load(args.csv_path);
                material::BendDetectorParams params{args.threshold, args.window, args.relax};
                const auto events = material::detect_bend_events(series, params);
                out << "events: " << events.size() << "\n";
                for (std::size_t i = 0; i < events.size(); ++i) {
                    out << "event " << (i + 1) << ": sample " << events[i].start_index << " (t="
                        << fmt_num(series.samples[events[i].start_index].time_s) << " s), drop "
                        << fmt_fixed(events[i].magnitude * 100.0, 1) << "%\n";
                }
            }
            return 0;
        }

        if (calcheck->parsed()) {
            const auto table = CalibrationTable::load(cal_path);
            out << "calibration ok: " << table.rows().size() << " measurement(s)\n";
            for (double ratio : table.hydration_ratios()) {
                const auto [lo, hi] = table.speed_range(ratio);
                out << "hydration " << fmt_num(ratio) << ": speeds " << fmt_num(lo) << ".."
                    << fmt_num(hi) << " mm/min\n";
            }
            if (cal_speed > 0.0 && cal_ratio > 0.0) {
                const double rate = table.rate_at(cal_speed, cal_ratio);
                const double area = hexagon_area(rate, cal_speed);
                out << "at S=" << fmt_num(cal_speed) << " mm/min, ratio " << fmt_num(cal_ratio)
                    << ": Q=" << fmt_num(rate) << " mm3/min, A=" << fmt_num(area)
                    << " mm2, hexagon side " << fmt_fixed(hex_side(area), 4) << " mm\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        print_error(err, e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error(err, std::string("internal: ") + e.what());
        return 1;
    }
    return 0;
}

} // namespace foamfab
