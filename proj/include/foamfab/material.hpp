#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace foamfab {
namespace material {

// Measured constants of the SPA hydrogel / PU foam composite.
namespace constants {
// Water uptake of the dry polymer at full hydration, g water per g SPA.
inline constexpr double kMaxAbsorptionGPerG = 212.0;
// Volume multiple of the swollen versus dry hydrogel.
inline constexpr double kSwellFactor = 262.0;
// Maximum volumetric compression under vacuum, by hydration state.
inline constexpr double kCompressibilityDehydrated = 0.793;
inline constexpr double kCompressibilityHydrated = 0.044;
// Weight fraction retained after one hot-air drying cycle.
inline constexpr double kAirDryRetention = 0.87;
// Drying reference: a 50 mm cube in room air takes 120 h; hot air still
// needs at least 72 h; salt speeds drying up to 50 times.
inline constexpr double kDryingRefVolumeMm3 = 125000.0;
inline constexpr double kDryingRoomAirHours = 120.0;
inline constexpr double kDryingHotAirMinHours = 72.0;
inline constexpr double kSaltSpeedupMax = 50.0;
} // namespace constants

// Water mass to mix with the given SPA mass to reach a pre-injection
// hydration ratio: water = ratio * 212 * spa. Ratio must lie in [0, 1].
double mixing_water_mass(double spa_mass_g, double hydration_ratio);

// Fully hydrated volume of a dry hydrogel volume (the measured 262x swell).
double swelled_volume(double dry_volume_mm3);

enum class HydrationState { Dehydrated, Hydrated };

double compressibility_of(HydrationState state);

enum class DryingMethod { RoomAir, HotAir, Salt };

// Linear volume scaling from the single measured reference point; estimates,
// not guarantees. Hot air yields a lower bound.
struct DryingEstimate {
    double hours = 0.0;
    bool lower_bound = false;
};

DryingEstimate drying_time(double volume_mm3, DryingMethod method);

// Measured deformation-under-load curves per pre-injection hydration ratio.
// Less hydrated hydrogel sets stiffer, so deformation at a fixed load must
// not decrease as the hydration ratio grows.
class StiffnessTable {
public:
    struct Row {
        double hydration_ratio;
        double load_g;
        double deformation_mm;
    };

    // Format: `hydration_ratio,load_g,deformation_mm` header, one row per
    // measurement, `#` comments and blank lines ignored.
    static StiffnessTable parse_csv(std::string_view text);
    static StiffnessTable load(const std::string& path);

    // Deformation at a hydration ratio and load, both piecewise-linearly
    // interpolated, never extrapolated. The 200 g default matches the
    // reference load of the stiffness comparison.
    double deformation_at(double hydration_ratio, double load_g = 200.0) const;

    const std::vector<Row>& rows() const { return rows_; }

private:
    void validate() const;
    std::vector<Row> rows_;
    // grouped by ratio ascending, loads ascending within a group
    std::vector<std::vector<Row>> curves_;
};

// Weight retained across dehydration/rehydration cycles, relative to the
// fully hydrated weight. Purely table-driven.
class RetentionTable {
public:
    struct Row {
        int cycle;
        double retained_fraction;
    };

    // Format: `cycle,retained_fraction` header.
    static RetentionTable parse_csv(std::string_view text);
    static RetentionTable load(const std::string& path);

    double retention_at(int cycle) const;
    const std::vector<Row>& rows() const { return rows_; }

private:
    std::vector<Row> rows_;
};

// Maximum bend angle of a differential-injection joint: a dehydrated gap of
// length l between hydrated walls of thickness t closes when the arms pivot
// about the gap's bottom center and the wall faces meet on the symmetry
// plane, giving theta = 2 * atan(l / (2 t)). A geometric model, not a
// measurement.
double max_bend_angle(double gap_length_mm, double wall_thickness_mm);

// Timestamped resistance samples from an embedded hydrogel sensor.
struct ResistanceSample {
    double time_s;
    double kohm;
};

struct ResistanceSeries {
    std::vector<ResistanceSample> samples;

    // Format: `time_s,resistance_kohm` header.
    static ResistanceSeries parse_csv(std::string_view text);
    static ResistanceSeries load(const std::string& path);
    void validate() const;
};

struct BendEvent {
    std::size_t start_index = 0;
    // Fractional drop below the baseline at the event's deepest point.
    double magnitude = 0.0;
};

struct BendDetectorParams {
    // Fractional drop below the running baseline that counts as an event.
    double drop_threshold = 0.05;
    // Number of recent samples the drop must occur within.
    int window = 2;
    // Per-sample rate at which the baseline relaxes toward the signal.
    // The undisturbed sensor drifts upward, so the baseline tracks maxima
    // but slowly forgets stale ones. Tunable; the drift is not quantified.
    double baseline_relax = 0.02;
};

// Flags sharp resistance drops (squeezes and bends) against a running
// baseline; events end once the signal recovers to within the threshold.
std::vector<BendEvent> detect_bend_events(const ResistanceSeries& series,
                                          const BendDetectorParams& params);

} // namespace material
} // namespace foamfab
