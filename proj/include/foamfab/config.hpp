#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "foamfab/foam.hpp"

namespace foamfab {

struct BodyConfig {
    std::string mesh_path;
    double infill_ratio = 1.0;
    double hydration_ratio = 0.5;
};

// Declarative job description: the batch equivalent of the design tool's
// control panel. See the README for the schema; `version 1` is required.
struct JobConfig {
    int version = 1;
    FoamBlock foam;
    std::string calibration_path;
    double inject_speed = 0.0;    // mm/min
    double syringe_capacity = 0.0; // mm^3
    std::vector<BodyConfig> bodies;

    // machine overrides
    double safe_margin = 5.0;
    double travel_feed = 5000.0;
    double insert_feed = 500.0;
    double mark_feed = 1000.0;

    // pipeline tuning
    double z_step = 0.5;
    double silhouette_resolution = 0.25;
    // When set, print files never mix columns of different bodies, so each
    // file maps to one hydration batch even for same-attribute bodies.
    bool group_by_body = false;

    std::string job_name = "foamfab job";
};

// Parses the key/value + body-block format. Relative paths are resolved
// against base_dir. Throws ConfigError / ParseError with line numbers.
JobConfig parse_job_config(std::string_view text, const std::string& base_dir);

JobConfig load_job_config(const std::string& path);

} // namespace foamfab
