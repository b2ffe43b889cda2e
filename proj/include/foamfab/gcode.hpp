#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foamfab/plan.hpp"
#include "foamfab/silhouette.hpp"
#include "foamfab/vec.hpp"

namespace foamfab {
namespace gcode {

// The machine dialect is deliberately small: absolute millimeter moves,
// binary dispense on the spindle signal, nothing else. Anything outside it
// is a parse error rather than silently ignored.
enum class Word {
    Rapid,       // G0
    Linear,      // G1
    UnitsMm,     // G21
    Absolute,    // G90
    ProgramEnd,  // M2
    DispenseOn,  // M3  (spindle signal opens the dispense valve)
    DispenseOff, // M5
    Comment,     // ; ...
};

struct Command {
    Word kind = Word::Comment;
    std::optional<double> x, y, z, f;
    std::string comment;
    int line = 0;

    // Modal state resolved by the parser.
    Vec3 target;
    double feed = 0.0;

    bool is_motion() const { return kind == Word::Rapid || kind == Word::Linear; }
};

struct JobMeta {
    std::string title = "foamfab job";
    int file_index = 1;
    int file_count = 1;
};

// Injection program: header (G21, G90, metadata comments), one motion set
// per column (approach, insert, dispense-ascend with pauses across gaps,
// retract), M2 footer. Coordinates are fixed at 3 decimals; feeds use exact
// shortest round-trip formatting. Refuses motion outside the foam footprint
// or above the safe height.
std::string emit_injection(std::span<const MotionSet> motions, const MachineParams& mp,
                           double cell_area, const JobMeta& meta = {});

// Outline marking program: traces each closed contour on the foam top
// surface at mark_feed with safe-height repositioning between contours.
// Contains no dispense commands.
std::string emit_marking(std::span<const Contour> contours, const MachineParams& mp,
                         const JobMeta& meta = {});

// Parses the emitted dialect back into commands with modal feed and position
// resolved. Throws ParseError with a line number on malformed or unknown
// input; linear moves must carry or inherit a feed.
std::vector<Command> parse(std::string_view text);

struct Diagnostic {
    int line = 0;
    std::string message;
};

struct TracePoint {
    int line = 0;
    Vec3 position;
    double feed = 0.0;
    bool dispensing = false;
    double dispensed_mm3 = 0.0;
};

struct SimulationOptions {
    MachineParams mp;
    double cell_area = 0.0;
    // When set, dispensing more than this per file raises a diagnostic.
    std::optional<double> capacity_mm3;
};

struct SimulationResult {
    std::vector<TracePoint> trace;
    std::vector<Diagnostic> diagnostics;
    double dispensed_mm3 = 0.0;

    std::string diagnostics_text() const;
};

// Replays a parsed program against the machine's operating rules: horizontal
// motion only at or above the foam top surface, no dispense during rapids or
// descents, only the configured feeds, dispensed volume within the declared
// capacity, dispense off at program end. Violations become line-numbered
// diagnostics, never exceptions.
SimulationResult simulate(std::span<const Command> commands, const SimulationOptions& options);

} // namespace gcode
} // namespace foamfab
