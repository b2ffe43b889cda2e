#include "foamfab/gcode.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "foamfab/error.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {
namespace gcode {

namespace {

constexpr double kGeomTol = 1e-6;

std::string coord(double v) { return fmt_fixed(v, 3); }

void check_inside_bounds(const MachineParams& mp, double x, double y, double z_low,
                         double z_high) {
    if (x < -kGeomTol || x > mp.foam.width + kGeomTol || y < -kGeomTol ||
        y > mp.foam.depth + kGeomTol || z_low < -kGeomTol ||
        z_high > mp.safe_height() + kGeomTol) {
        throw ValidationError("emission refused: motion at (" + coord(x) + ", " + coord(y) +
                              ", z " + coord(z_low) + ".." + coord(z_high) +
                              ") leaves the foam plus safe margin");
    }
}

void emit_header(std::ostream& out, const JobMeta& meta, const char* kind) {
    out << "; " << meta.title << " - " << kind << " file " << meta.file_index << "/"
        << meta.file_count << "\n";
}

void emit_setup(std::ostream& out, const MachineParams& mp) {
    out << "G21\n";
    out << "G90\n";
    out << "G0 Z" << coord(mp.safe_height()) << " F" << fmt_num(mp.travel_feed) << "\n";
}

} // namespace

std::string emit_injection(std::span<const MotionSet> motions, const MachineParams& mp,
                           double cell_area, const JobMeta& meta) {
    mp.validate(/*require_inject_speed=*/true);
    if (!(cell_area > 0.0)) {
        throw DomainError("cell area must be positive");
    }
    double volume = 0.0;
    for (const MotionSet& motion : motions) {
        check_inside_bounds(mp, motion.position.x, motion.position.y, motion.insertion_z,
                            motion.segments.back().z_high);
        for (const Segment& s : motion.segments) {
            volume += cell_area * s.length();
        }
    }

    std::ostringstream out;
    emit_header(out, meta, "injection");
    out << "; columns " << motions.size() << ", volume " << coord(volume) << " mm3, cell area "
        << coord(cell_area) << " mm2\n";
    out << "; feeds mm/min: travel " << fmt_num(mp.travel_feed) << ", insert "
        << fmt_num(mp.insert_feed) << ", inject " << fmt_num(mp.inject_speed) << "\n";
    emit_setup(out, mp);
    const std::string safe_z = coord(mp.safe_height());
    for (const MotionSet& motion : motions) {
        out << "; column (" << motion.cell.q << " " << motion.cell.r << ")\n";
        out << "G0 X" << coord(motion.position.x) << " Y" << coord(motion.position.y) << " F"
            << fmt_num(mp.travel_feed) << "\n";
        out << "G1 Z" << coord(motion.insertion_z) << " F" << fmt_num(mp.insert_feed) << "\n";
        for (std::size_t i = 0; i < motion.segments.size(); ++i) {
            const Segment& s = motion.segments[i];
            if (i > 0) {
                // dispense pause while crossing the internal gap
                out << "G1 Z" << coord(s.z_low) << " F" << fmt_num(mp.inject_speed) << "\n";
            }
            out << "M3\n";
            out << "G1 Z" << coord(s.z_high) << " F" << fmt_num(mp.inject_speed) << "\n";
            out << "M5\n";
        }
        out << "G0 Z" << safe_z << " F" << fmt_num(mp.travel_feed) << "\n";
    }
    out << "M2\n";
    return out.str();
}

std::string emit_marking(std::span<const Contour> contours, const MachineParams& mp,
                         const JobMeta& meta) {
    mp.validate(/*require_inject_speed=*/false);
    for (const Contour& contour : contours) {
        if (!contour.closed()) {
            throw ValidationError("marking refused: contour is not closed");
        }
        for (const Vec2& p : contour.points) {
            check_inside_bounds(mp, p.x, p.y, mp.foam.height, mp.foam.height);
        }
    }

    std::ostringstream out;
    emit_header(out, meta, "marking");
    out << "; contours " << contours.size() << "\n";
    emit_setup(out, mp);
    const std::string safe_z = coord(mp.safe_height());
    const std::string top_z = coord(mp.foam.height);
    for (std::size_t i = 0; i < contours.size(); ++i) {
        const Contour& contour = contours[i];
        out << "; contour " << (i + 1) << "\n";
        out << "G0 X" << coord(contour.points.front().x) << " Y"
            << coord(contour.points.front().y) << " F" << fmt_num(mp.travel_feed) << "\n";
        out << "G1 Z" << top_z << " F" << fmt_num(mp.mark_feed) << "\n";
        for (std::size_t k = 1; k < contour.points.size(); ++k) {
            out << "G1 X" << coord(contour.points[k].x) << " Y" << coord(contour.points[k].y)
                << " F" << fmt_num(mp.mark_feed) << "\n";
        }
        out << "G0 Z" << safe_z << " F" << fmt_num(mp.travel_feed) << "\n";
    }
    out << "M2\n";
    return out.str();
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what, static_cast<std::size_t>(line));
}

double parse_word_number(std::string_view token, int line) {
    double value = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size() ||
        !std::isfinite(value)) {
        parse_fail(line, "malformed number '" + std::string(token) + "'");
    }
    return value;
}

} // namespace

std::vector<Command> parse(std::string_view text) {
    std::vector<Command> commands;
    Vec3 position{0.0, 0.0, 0.0};
    std::optional<double> modal_feed;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }

        Command cmd;
        cmd.line = line_no;

        if (std::size_t semi = line.find(';'); semi != std::string_view::npos) {
            cmd.comment = std::string(trim(line.substr(semi + 1)));
            line = trim(line.substr(0, semi));
        }
        if (line.empty()) {
            cmd.kind = Word::Comment;
            cmd.target = position;
            cmd.feed = modal_feed.value_or(0.0);
            commands.push_back(std::move(cmd));
            continue;
        }

        // Tokenize on whitespace.
        std::vector<std::string_view> tokens;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
            }
            std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
            }
            if (i > start) {
                tokens.push_back(line.substr(start, i - start));
            }
        }

        const std::string_view head = tokens[0];
        if (head == "G0") {
            cmd.kind = Word::Rapid;
        } else if (head == "G1") {
            cmd.kind = Word::Linear;
        } else if (head == "G21") {
            cmd.kind = Word::UnitsMm;
        } else if (head == "G90") {
            cmd.kind = Word::Absolute;
        } else if (head == "M2") {
            cmd.kind = Word::ProgramEnd;
        } else if (head == "M3") {
            cmd.kind = Word::DispenseOn;
        } else if (head == "M5") {
            cmd.kind = Word::DispenseOff;
        } else {
            parse_fail(line_no, "unknown command '" + std::string(head) + "'");
        }

        if (!cmd.is_motion() && tokens.size() > 1) {
            parse_fail(line_no, "'" + std::string(head) + "' takes no arguments");
        }

        for (std::size_t t = 1; t < tokens.size(); ++t) {
            const std::string_view word = tokens[t];
            const char letter = word[0];
            const double value = parse_word_number(word.substr(1), line_no);
            switch (letter) {
            case 'X': cmd.x = value; break;
            case 'Y': cmd.y = value; break;
            case 'Z': cmd.z = value; break;
            case 'F':
                if (!(value > 0.0)) {
                    parse_fail(line_no, "feed must be positive");
                }
                cmd.f = value;
                break;
            default:
                parse_fail(line_no, std::string("unknown word '") + letter + "'");
            }
        }

        if (cmd.is_motion()) {
            if (cmd.f) {
                modal_feed = *cmd.f;
            }
            if (!modal_feed) {
                parse_fail(line_no, "motion requires a feed and none is in effect");
            }
            position = {cmd.x.value_or(position.x), cmd.y.value_or(position.y),
                        cmd.z.value_or(position.z)};
        }
        cmd.target = position;
        cmd.feed = modal_feed.value_or(0.0);
        commands.push_back(std::move(cmd));
    }
    return commands;
}

std::string SimulationResult::diagnostics_text() const {
    std::ostringstream out;
    for (const Diagnostic& d : diagnostics) {
        out << "line " << d.line << ": " << d.message << "\n";
    }
    return out.str();
}

SimulationResult simulate(std::span<const Command> commands, const SimulationOptions& options) {
    options.mp.validate(/*require_inject_speed=*/false);
    SimulationResult result;
    Vec3 position{0.0, 0.0, 0.0};
    bool dispensing = false;
    bool ended = false;
    bool capacity_reported = false;

    auto diagnose = [&](int line, std::string message) {
        result.diagnostics.push_back({line, std::move(message)});
    };

    const double top_z = options.mp.foam.height;
    const std::array<double, 4> allowed_feeds = {options.mp.travel_feed, options.mp.insert_feed,
                                                 options.mp.inject_speed, options.mp.mark_feed};

    for (const Command& cmd : commands) {
        if (cmd.kind == Word::Comment) {
            continue;
        }
        if (ended) {
            diagnose(cmd.line, "command after M2");
        }
        switch (cmd.kind) {
        case Word::DispenseOn:
            dispensing = true;
            break;
        case Word::DispenseOff:
            dispensing = false;
            break;
        case Word::ProgramEnd:
            if (dispensing) {
                diagnose(cmd.line, "program ends while dispensing (M3 without M5)");
            }
            ended = true;
            break;
        case Word::UnitsMm:
        case Word::Absolute:
            break;
        case Word::Rapid:
        case Word::Linear: {
            const Vec3 target = cmd.target;
            const bool horizontal = std::abs(target.x - position.x) > kGeomTol ||
                                    std::abs(target.y - position.y) > kGeomTol;
            const bool descending = target.z < position.z - kGeomTol;
            const bool ascending = target.z > position.z + kGeomTol;
            if (horizontal && std::min(position.z, target.z) < top_z - kGeomTol) {
                diagnose(cmd.line, "horizontal motion below safe height (z " +
                                       fmt_fixed(std::min(position.z, target.z), 3) +
                                       " < foam top " + fmt_fixed(top_z, 3) + ")");
            }
            if (dispensing && cmd.kind == Word::Rapid) {
                diagnose(cmd.line, "dispense active during rapid motion");
            }
            if (dispensing && descending) {
                diagnose(cmd.line, "dispense active during descent");
            }
            const bool feed_known =
                std::any_of(allowed_feeds.begin(), allowed_feeds.end(),
                            [&](double f) { return f > 0.0 && f == cmd.feed; });
            if (!feed_known) {
                diagnose(cmd.line, "feed " + fmt_num(cmd.feed) +
                                       " is not one of the configured machine feeds");
            }
            if (dispensing && cmd.kind == Word::Linear && ascending && options.cell_area > 0.0) {
                result.dispensed_mm3 += options.cell_area * (target.z - position.z);
            }
            if (options.capacity_mm3 && !capacity_reported &&
                result.dispensed_mm3 > *options.capacity_mm3 + 1e-9) {
                diagnose(cmd.line, "dispensed volume " + fmt_fixed(result.dispensed_mm3, 3) +
                                       " mm3 exceeds the declared syringe capacity " +
                                       fmt_fixed(*options.capacity_mm3, 3) + " mm3");
                capacity_reported = true;
            }
            position = target;
            break;
        }
        case Word::Comment:
            break;
        }
        result.trace.push_back(
            {cmd.line, position, cmd.feed, dispensing, result.dispensed_mm3});
    }
    if (!ended) {
        int last_line = commands.empty() ? 1 : commands.back().line;
        diagnose(last_line, "program does not end with M2");
    }
    return result;
}

} // namespace gcode
} // namespace foamfab
