#include "foamfab/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "foamfab/error.hpp"
#include "foamfab/textio.hpp"

namespace foamfab {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
}

double hexagon_area(double rate_mm3_min, double speed_mm_min) {
    if (!(rate_mm3_min > 0.0)) {
        throw DomainError("injection rate Q must be positive");
    }
    if (!(speed_mm_min > 0.0)) {
        throw DomainError("injection movement speed S must be positive");
    }
    return rate_mm3_min / speed_mm_min;
}

double hex_side(double area_mm2) {
    if (!(area_mm2 > 0.0)) {
        throw DomainError("hexagon area must be positive");
    }
    return std::sqrt(2.0 * area_mm2 / (3.0 * kSqrt3));
}

double hex_area_from_side(double side_mm) {
    if (!(side_mm > 0.0)) {
        throw DomainError("hexagon side must be positive");
    }
    return 1.5 * kSqrt3 * side_mm * side_mm;
}

CalibrationTable CalibrationTable::parse_csv(std::string_view text) {
    CalibrationTable table;
    for (const CsvRow& row : parse_csv_table(text, "hydration_ratio,speed_mm_min,rate_mm3_min")) {
        table.rows_.push_back({parse_double(row.fields[0], row.line),
                               parse_double(row.fields[1], row.line),
                               parse_double(row.fields[2], row.line)});
    }
    if (table.rows_.empty()) {
        throw ValidationError("calibration table has no measurements");
    }

    std::map<double, std::vector<Row>> grouped;
    for (const Row& row : table.rows_) {
        grouped[row.hydration_ratio].push_back(row);
    }
    for (auto& [ratio, series] : grouped) {
        std::sort(series.begin(), series.end(),
                  [](const Row& a, const Row& b) { return a.speed_mm_min < b.speed_mm_min; });
        table.series_.push_back(std::move(series));
    }
    table.validate();
    return table;
}

CalibrationTable CalibrationTable::load(const std::string& path) {
    return parse_csv(read_file(path));
}

void CalibrationTable::validate() const {
    for (const auto& series : series_) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            const Row& row = series[i];
            if (!(row.hydration_ratio > 0.0 && row.hydration_ratio <= 1.0)) {
                throw ValidationError("hydration ratio " + fmt_num(row.hydration_ratio) +
                                      " outside (0, 1]");
            }
            if (!(row.speed_mm_min > 0.0) || !(row.rate_mm3_min > 0.0)) {
                throw ValidationError("calibration speeds and rates must be strictly positive");
            }
            if (i > 0 && !(series[i - 1].speed_mm_min < row.speed_mm_min)) {
                throw ValidationError("duplicate speed " + fmt_num(row.speed_mm_min) +
                                      " mm/min for hydration ratio " +
                                      fmt_num(row.hydration_ratio));
            }
        }
    }
    // Less hydrated hydrogel is more viscous: where two ratios share a
    // measured speed, the lower ratio must not dispense faster.
    for (std::size_t i = 0; i + 1 < series_.size(); ++i) {
        for (const Row& lo : series_[i]) {
            for (const Row& hi : series_[i + 1]) {
                if (lo.speed_mm_min == hi.speed_mm_min && lo.rate_mm3_min > hi.rate_mm3_min) {
                    throw ValidationError(
                        "viscosity ordering violated at speed " + fmt_num(lo.speed_mm_min) +
                        " mm/min: ratio " + fmt_num(lo.hydration_ratio) + " dispenses " +
                        fmt_num(lo.rate_mm3_min) + " mm^3/min but ratio " +
                        fmt_num(hi.hydration_ratio) + " dispenses " + fmt_num(hi.rate_mm3_min));
                }
            }
        }
    }
}

const std::vector<CalibrationTable::Row>* CalibrationTable::series_for(
    double hydration_ratio) const {
    for (const auto& series : series_) {
        if (series.front().hydration_ratio == hydration_ratio) {
            return &series;
        }
    }
    return nullptr;
}

double CalibrationTable::rate_at(double speed_mm_min, double hydration_ratio) const {
    const auto* series = series_for(hydration_ratio);
    if (series == nullptr) {
        throw DomainError("hydration ratio " + fmt_num(hydration_ratio) +
                          " is not present in the calibration table");
    }
    const double lo = series->front().speed_mm_min;
    const double hi = series->back().speed_mm_min;
    if (speed_mm_min < lo || speed_mm_min > hi) {
        throw DomainError("speed " + fmt_num(speed_mm_min) +
                          " mm/min outside the calibrated range [" + fmt_num(lo) + ", " +
                          fmt_num(hi) + "] for hydration ratio " + fmt_num(hydration_ratio) +
                          "; extrapolation is not permitted");
    }
    auto it = std::lower_bound(series->begin(), series->end(), speed_mm_min,
                               [](const Row& row, double s) { return row.speed_mm_min < s; });
    if (it->speed_mm_min == speed_mm_min) {
        return it->rate_mm3_min;
    }
    const Row& b = *it;
    const Row& a = *(it - 1);
    const double t = (speed_mm_min - a.speed_mm_min) / (b.speed_mm_min - a.speed_mm_min);
    return a.rate_mm3_min + t * (b.rate_mm3_min - a.rate_mm3_min);
}

std::vector<double> CalibrationTable::hydration_ratios() const {
    std::vector<double> ratios;
    ratios.reserve(series_.size());
    for (const auto& series : series_) {
        ratios.push_back(series.front().hydration_ratio);
    }
    return ratios;
}

std::pair<double, double> CalibrationTable::speed_range(double hydration_ratio) const {
    const auto* series = series_for(hydration_ratio);
    if (series == nullptr) {
        throw DomainError("hydration ratio " + fmt_num(hydration_ratio) +
                          " is not present in the calibration table");
    }
    return {series->front().speed_mm_min, series->back().speed_mm_min};
}

} // namespace foamfab
