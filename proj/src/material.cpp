#include "foamfab/material.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "foamfab/error.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {
namespace material {

double mixing_water_mass(double spa_mass_g, double hydration_ratio) {
    if (spa_mass_g < 0.0) {
        throw DomainError("SPA mass must be non-negative");
    }
    if (hydration_ratio < 0.0 || hydration_ratio > 1.0) {
        throw DomainError("hydration ratio must lie in [0, 1]");
    }
    return hydration_ratio * constants::kMaxAbsorptionGPerG * spa_mass_g;
}

double swelled_volume(double dry_volume_mm3) {
    if (dry_volume_mm3 < 0.0) {
        throw DomainError("dry volume must be non-negative");
    }
    return dry_volume_mm3 * constants::kSwellFactor;
}

double compressibility_of(HydrationState state) {
    return state == HydrationState::Dehydrated ? constants::kCompressibilityDehydrated
                                               : constants::kCompressibilityHydrated;
}

DryingEstimate drying_time(double volume_mm3, DryingMethod method) {
    if (!(volume_mm3 > 0.0)) {
        throw DomainError("volume must be positive");
    }
    const double scale = volume_mm3 / constants::kDryingRefVolumeMm3;
    switch (method) {
    case DryingMethod::RoomAir:
        return {constants::kDryingRoomAirHours * scale, false};
    case DryingMethod::HotAir:
        return {constants::kDryingHotAirMinHours * scale, true};
    case DryingMethod::Salt:
        return {constants::kDryingRoomAirHours * scale / constants::kSaltSpeedupMax, false};
    }
    throw DomainError("unknown drying method");
}

namespace {

// Piecewise-linear interpolation over (x, y) nodes sorted by x; refuses to
// extrapolate.
double interp(const std::vector<std::pair<double, double>>& nodes, double x,
              const char* quantity) {
    if (x < nodes.front().first || x > nodes.back().first) {
        throw DomainError(std::string(quantity) + " " + fmt_num(x) +
                          " outside the tabulated range [" + fmt_num(nodes.front().first) + ", " +
                          fmt_num(nodes.back().first) + "]; extrapolation is not permitted");
    }
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x,
                               [](const auto& node, double v) { return node.first < v; });
    if (it->first == x) {
        return it->second;
    }
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double t = (x - a.first) / (b.first - a.first);
    return a.second + t * (b.second - a.second);
}

} // namespace

StiffnessTable StiffnessTable::parse_csv(std::string_view text) {
    StiffnessTable table;
    for (const CsvRow& row : parse_csv_table(text, "hydration_ratio,load_g,deformation_mm")) {
        table.rows_.push_back({parse_double(row.fields[0], row.line),
                               parse_double(row.fields[1], row.line),
                               parse_double(row.fields[2], row.line)});
    }
    if (table.rows_.empty()) {
        throw ValidationError("stiffness table has no measurements");
    }
    std::map<double, std::vector<Row>> grouped;
    for (const Row& row : table.rows_) {
        grouped[row.hydration_ratio].push_back(row);
    }
    for (auto& [ratio, curve] : grouped) {
        std::sort(curve.begin(), curve.end(),
                  [](const Row& a, const Row& b) { return a.load_g < b.load_g; });
        table.curves_.push_back(std::move(curve));
    }
    table.validate();
    return table;
}

StiffnessTable StiffnessTable::load(const std::string& path) {
    return parse_csv(read_file(path));
}

void StiffnessTable::validate() const {
    for (const auto& curve : curves_) {
        for (std::size_t i = 0; i < curve.size(); ++i) {
            const Row& row = curve[i];
            if (!(row.hydration_ratio > 0.0 && row.hydration_ratio <= 1.0)) {
                throw ValidationError("hydration ratio " + fmt_num(row.hydration_ratio) +
                                      " outside (0, 1]");
            }
            if (!(row.load_g > 0.0) || row.deformation_mm < 0.0) {
                throw ValidationError("loads must be positive and deformations non-negative");
            }
            if (i > 0 && !(curve[i - 1].load_g < row.load_g)) {
                throw ValidationError("duplicate load " + fmt_num(row.load_g) +
                                      " g for hydration ratio " + fmt_num(row.hydration_ratio));
            }
        }
    }
    // More hydrated hydrogel sets softer: deformation may not drop as the
    // ratio grows, checked at every load where adjacent curves overlap.
    for (std::size_t c = 0; c + 1 < curves_.size(); ++c) {
        const auto& lo = curves_[c];
        const auto& hi = curves_[c + 1];
        std::vector<std::pair<double, double>> lo_nodes, hi_nodes;
        for (const Row& row : lo) {
            lo_nodes.emplace_back(row.load_g, row.deformation_mm);
        }
        for (const Row& row : hi) {
            hi_nodes.emplace_back(row.load_g, row.deformation_mm);
        }
        const double from = std::max(lo_nodes.front().first, hi_nodes.front().first);
        const double to = std::min(lo_nodes.back().first, hi_nodes.back().first);
        for (const auto& nodes : {lo_nodes, hi_nodes}) {
            for (const auto& [load, unused] : nodes) {
                if (load < from || load > to) {
                    continue;
                }
                if (interp(lo_nodes, load, "load") > interp(hi_nodes, load, "load") + 1e-12) {
                    throw ValidationError(
                        "stiffness ordering violated at load " + fmt_num(load) + " g: ratio " +
                        fmt_num(lo.front().hydration_ratio) + " deforms more than ratio " +
                        fmt_num(hi.front().hydration_ratio));
                }
            }
        }
    }
}

double StiffnessTable::deformation_at(double hydration_ratio, double load_g) const {
    std::vector<std::pair<double, double>> by_ratio;
    for (const auto& curve : curves_) {
        std::vector<std::pair<double, double>> nodes;
        for (const Row& row : curve) {
            nodes.emplace_back(row.load_g, row.deformation_mm);
        }
        // Only bracketing curves matter, but evaluating each keeps the
        // no-extrapolation rule uniform across the ratio range.
        by_ratio.emplace_back(curve.front().hydration_ratio, interp(nodes, load_g, "load"));
    }
    if (by_ratio.size() == 1) {
        if (hydration_ratio != by_ratio.front().first) {
            throw DomainError("hydration ratio " + fmt_num(hydration_ratio) +
                              " outside the tabulated range");
        }
        return by_ratio.front().second;
    }
    return interp(by_ratio, hydration_ratio, "hydration ratio");
}

RetentionTable RetentionTable::parse_csv(std::string_view text) {
    RetentionTable table;
    for (const CsvRow& row : parse_csv_table(text, "cycle,retained_fraction")) {
        const double cycle = parse_double(row.fields[0], row.line);
        if (cycle < 0.0 || cycle != std::floor(cycle)) {
            throw ParseError("line " + std::to_string(row.line) +
                                 ": cycle must be a non-negative integer",
                             row.line);
        }
        table.rows_.push_back({static_cast<int>(cycle), parse_double(row.fields[1], row.line)});
    }
    if (table.rows_.empty()) {
        throw ValidationError("retention table has no measurements");
    }
    for (std::size_t i = 0; i < table.rows_.size(); ++i) {
        const Row& row = table.rows_[i];
        if (!(row.retained_fraction > 0.0 && row.retained_fraction <= 1.0)) {
            throw ValidationError("retained fraction must lie in (0, 1]");
        }
        if (i > 0 && !(table.rows_[i - 1].cycle < row.cycle)) {
            throw ValidationError("cycles must be strictly increasing");
        }
    }
    return table;
}

RetentionTable RetentionTable::load(const std::string& path) {
    return parse_csv(read_file(path));
}

double RetentionTable::retention_at(int cycle) const {
    for (const Row& row : rows_) {
        if (row.cycle == cycle) {
            return row.retained_fraction;
        }
    }
    throw DomainError("cycle " + std::to_string(cycle) + " is not in the retention table");
}

double max_bend_angle(double gap_length_mm, double wall_thickness_mm) {
    if (gap_length_mm < 0.0) {
        throw DomainError("gap length must be non-negative");
    }
    if (!(wall_thickness_mm > 0.0)) {
        throw DomainError("wall thickness must be positive");
    }
    return 2.0 * std::atan(gap_length_mm / (2.0 * wall_thickness_mm));
}

ResistanceSeries ResistanceSeries::parse_csv(std::string_view text) {
    ResistanceSeries series;
    for (const CsvRow& row : parse_csv_table(text, "time_s,resistance_kohm")) {
        series.samples.push_back(
            {parse_double(row.fields[0], row.line), parse_double(row.fields[1], row.line)});
    }
    series.validate();
    return series;
}

ResistanceSeries ResistanceSeries::load(const std::string& path) {
    return parse_csv(read_file(path));
}

void ResistanceSeries::validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].kohm > 0.0)) {
            throw ValidationError("resistance must be positive");
        }
        if (i > 0 && !(samples[i - 1].time_s < samples[i].time_s)) {
            throw ValidationError("timestamps must be strictly increasing");
        }
    }
}

std::vector<BendEvent> detect_bend_events(const ResistanceSeries& series,
                                          const BendDetectorParams& params) {
    if (!(params.drop_threshold > 0.0 && params.drop_threshold < 1.0)) {
        throw DomainError("drop threshold must lie in (0, 1)");
    }
    if (params.window < 2) {
        throw DomainError("window must be at least 2 samples");
    }
    if (!(params.baseline_relax >= 0.0 && params.baseline_relax < 1.0)) {
        throw DomainError("baseline relaxation must lie in [0, 1)");
    }
    series.validate();
    const std::size_t n = series.samples.size();
    if (n < static_cast<std::size_t>(params.window)) {
        throw DomainError("series shorter than the detection window");
    }

    std::vector<BendEvent> events;
    std::vector<double> baseline(n, 0.0);
    baseline[0] = series.samples[0].kohm;
    bool in_event = false;
    double event_reference = 0.0;
    double event_min = 0.0;
    std::size_t event_start = 0;

    for (std::size_t i = 1; i < n; ++i) {
        const double r = series.samples[i].kohm;
        if (in_event) {
            event_min = std::min(event_min, r);
            baseline[i] = baseline[i - 1]; // frozen while the signal is down
            if (r >= (1.0 - params.drop_threshold) * event_reference) {
                events.push_back(
                    {event_start, (event_reference - event_min) / event_reference});
                in_event = false;
                // resume tracking from the recovered signal
                baseline[i] = std::max(
                    r, baseline[i - 1] + params.baseline_relax * (r - baseline[i - 1]));
            }
            continue;
        }
        // Reference: highest baseline the signal could have dropped from
        // within the window.
        const std::size_t window_from =
            i >= static_cast<std::size_t>(params.window) - 1
                ? i - (static_cast<std::size_t>(params.window) - 1)
                : 0;
        double reference = 0.0;
        for (std::size_t j = window_from; j < i; ++j) {
            reference = std::max(reference, baseline[j]);
        }
        if ((reference - r) / reference >= params.drop_threshold) {
            in_event = true;
            event_reference = reference;
            event_min = r;
            event_start = i;
            baseline[i] = baseline[i - 1];
        } else {
            baseline[i] =
                std::max(r, baseline[i - 1] + params.baseline_relax * (r - baseline[i - 1]));
        }
    }
    if (in_event) {
        events.push_back({event_start, (event_reference - event_min) / event_reference});
    }
    return events;
}

} // namespace material
} // namespace foamfab
