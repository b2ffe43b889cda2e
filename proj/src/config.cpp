#include "foamfab/config.hpp"

#include <filesystem>
#include <set>

#include "foamfab/error.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

struct ConfigLine {
    std::size_t number;
    std::string_view key;
    std::vector<std::string_view> args;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> tokenize(std::string_view text, std::size_t line_no) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) {
            ++i;
        }
        if (i >= text.size()) {
            break;
        }
        if (text[i] == '"') {
            std::size_t end = text.find('"', i + 1);
            if (end == std::string_view::npos) {
                fail(line_no, "unterminated quoted string");
            }
            tokens.push_back(text.substr(i + 1, end - i - 1));
            i = end + 1;
        } else {
            std::size_t start = i;
            while (i < text.size() && text[i] != ' ' && text[i] != '\t') {
                ++i;
            }
            tokens.push_back(text.substr(start, i - start));
        }
    }
    return tokens;
}

std::vector<ConfigLine> read_lines(std::string_view text) {
    std::vector<ConfigLine> lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        std::string_view line = raw;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto tokens = tokenize(line, line_no);
        ConfigLine entry{line_no, tokens[0], {tokens.begin() + 1, tokens.end()}};
        lines.push_back(std::move(entry));
    }
    return lines;
}

double arg_number(const ConfigLine& line, std::size_t index) {
    if (index >= line.args.size()) {
        fail(line.number, "'" + std::string(line.key) + "' is missing a value");
    }
    return parse_double(line.args[index], line.number);
}

std::string resolve_path(std::string_view path, const std::string& base_dir) {
    std::filesystem::path p{std::string(path)};
    if (p.is_absolute() || base_dir.empty()) {
        return p.string();
    }
    return (std::filesystem::path(base_dir) / p).string();
}

bool arg_flag(const ConfigLine& line) {
    if (line.args.size() != 1 || (line.args[0] != "on" && line.args[0] != "off")) {
        fail(line.number, "'" + std::string(line.key) + "' expects 'on' or 'off'");
    }
    return line.args[0] == "on";
}

} // namespace

JobConfig parse_job_config(std::string_view text, const std::string& base_dir) {
    JobConfig config;
    std::set<std::string> seen;
    bool in_body = false;
    BodyConfig body;
    std::size_t body_line = 0;

    auto mark = [&](const ConfigLine& line) {
        if (!seen.insert(std::string(line.key)).second) {
            fail(line.number, "duplicate key '" + std::string(line.key) + "'");
        }
    };

    for (const ConfigLine& line : read_lines(text)) {
        if (in_body) {
            if (line.key == "}") {
                if (body.mesh_path.empty()) {
                    fail(line.number, "body block is missing 'mesh'");
                }
                config.bodies.push_back(body);
                in_body = false;
            } else if (line.key == "mesh") {
                if (line.args.size() != 1) {
                    fail(line.number, "'mesh' expects one path");
                }
                body.mesh_path = resolve_path(line.args[0], base_dir);
            } else if (line.key == "infill") {
                body.infill_ratio = arg_number(line, 0);
            } else if (line.key == "hydration") {
                body.hydration_ratio = arg_number(line, 0);
            } else {
                fail(line.number, "unknown body key '" + std::string(line.key) + "'");
            }
            continue;
        }
        if (line.key == "body") {
            if (line.args.size() != 1 || line.args[0] != "{") {
                fail(line.number, "expected 'body {'");
            }
            in_body = true;
            body = BodyConfig{};
            body_line = line.number;
        } else if (line.key == "version") {
            mark(line);
            const double v = arg_number(line, 0);
            if (v != 1.0) {
                fail(line.number, "unsupported config version " + std::string(line.args[0]) +
                                      " (this build reads version 1)");
            }
            config.version = 1;
        } else if (line.key == "name") {
            mark(line);
            if (line.args.size() != 1) {
                fail(line.number, "'name' expects one (possibly quoted) value");
            }
            config.job_name = std::string(line.args[0]);
        } else if (line.key == "foam") {
            mark(line);
            config.foam = {arg_number(line, 0), arg_number(line, 1), arg_number(line, 2)};
        } else if (line.key == "calibration") {
            mark(line);
            if (line.args.size() != 1) {
                fail(line.number, "'calibration' expects one path");
            }
            config.calibration_path = resolve_path(line.args[0], base_dir);
        } else if (line.key == "inject_speed") {
            mark(line);
            config.inject_speed = arg_number(line, 0);
        } else if (line.key == "syringe_capacity") {
            mark(line);
            config.syringe_capacity = arg_number(line, 0);
        } else if (line.key == "safe_margin") {
            mark(line);
            config.safe_margin = arg_number(line, 0);
        } else if (line.key == "travel_feed") {
            mark(line);
            config.travel_feed = arg_number(line, 0);
        } else if (line.key == "insert_feed") {
            mark(line);
            config.insert_feed = arg_number(line, 0);
        } else if (line.key == "mark_feed") {
            mark(line);
            config.mark_feed = arg_number(line, 0);
        } else if (line.key == "z_step") {
            mark(line);
            config.z_step = arg_number(line, 0);
        } else if (line.key == "resolution") {
            mark(line);
            config.silhouette_resolution = arg_number(line, 0);
        } else if (line.key == "group_by_body") {
            mark(line);
            config.group_by_body = arg_flag(line);
        } else {
            fail(line.number, "unknown key '" + std::string(line.key) + "'");
        }
    }
    if (in_body) {
        fail(body_line, "unterminated body block");
    }

    if (!seen.contains("version")) {
        throw ConfigError("config is missing the required 'version' key");
    }
    if (!seen.contains("foam")) {
        throw ConfigError("config is missing the required 'foam' key");
    }
    if (config.calibration_path.empty()) {
        throw ConfigError("config is missing the required 'calibration' key");
    }
    if (!(config.inject_speed > 0.0)) {
        throw ConfigError("config must set a positive 'inject_speed'");
    }
    if (!(config.syringe_capacity > 0.0)) {
        throw ConfigError("config must set a positive 'syringe_capacity'");
    }
    if (config.bodies.empty()) {
        throw ConfigError("config defines no bodies");
    }
    config.foam.validate();
    return config;
}

JobConfig load_job_config(const std::string& path) {
    const std::string text = read_file(path);
    const std::string base_dir = std::filesystem::path(path).parent_path().string();
    return parse_job_config(text, base_dir);
}

} // namespace foamfab
