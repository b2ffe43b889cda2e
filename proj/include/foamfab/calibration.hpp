#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace foamfab {

// Grid cell area served by one injection column. Dispensing at rate Q while
// the needle ascends at speed S spreads Q/S of cross-section per unit height,
// so A = Q / S.
double hexagon_area(double rate_mm3_min, double speed_mm_min);

// Side length of the regular hexagon with the given area: a = sqrt(2A / (3*sqrt(3))).
double hex_side(double area_mm2);

// Inverse of hex_side: area of a regular hexagon with side a.
double hex_area_from_side(double side_mm);

// Measured injection rate Q versus injection movement speed S, one series per
// pre-injection hydration ratio. Rates between measured speeds are linearly
// interpolated; queries outside the measured speed range are refused because
// pressure buildup at the needle tip makes extrapolation unsound.
class CalibrationTable {
public:
    struct Row {
        double hydration_ratio;
        double speed_mm_min;
        double rate_mm3_min;
    };

    // Input format: `hydration_ratio,speed_mm_min,rate_mm3_min` header, one
    // measurement per line, `#` comments and blank lines ignored.
    static CalibrationTable parse_csv(std::string_view text);
    static CalibrationTable load(const std::string& path);

    double rate_at(double speed_mm_min, double hydration_ratio) const;

    std::vector<double> hydration_ratios() const;
    // [min, max] measured speed for one hydration ratio.
    std::pair<double, double> speed_range(double hydration_ratio) const;
    const std::vector<Row>& rows() const { return rows_; }

private:
    void validate() const;
    const std::vector<Row>* series_for(double hydration_ratio) const;

    // Grouped by hydration ratio (ascending), speeds ascending within a group.
    std::vector<std::vector<Row>> series_;
    std::vector<Row> rows_;
};

} // namespace foamfab
