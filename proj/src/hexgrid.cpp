#include "foamfab/hexgrid.hpp"

#include <algorithm>
#include <cmath>

#include "foamfab/calibration.hpp"
#include "foamfab/error.hpp"

namespace foamfab {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// Cube rounding keeps q + r + s = 0 while snapping to the nearest cell.
Axial axial_round(double q, double r) {
    double s = -q - r;
    double rq = std::round(q);
    double rr = std::round(r);
    double rs = std::round(s);
    double dq = std::abs(rq - q);
    double dr = std::abs(rr - r);
    double ds = std::abs(rs - s);
    if (dq > dr && dq > ds) {
        rq = -rr - rs;
    } else if (dr > ds) {
        rr = -rq - rs;
    }
    return {static_cast<int>(rq), static_cast<int>(rr)};
}

} // namespace

HexGrid::HexGrid(const FoamBlock& foam, double cell_area_mm2, double infill_ratio)
    : foam_(foam), cell_area_(cell_area_mm2), infill_(infill_ratio) {
    foam_.validate();
    if (!(cell_area_ > 0.0)) {
        throw DomainError("cell area must be positive");
    }
    if (!(infill_ > 0.0 && infill_ <= 1.0)) {
        throw DomainError("infill ratio must lie in (0, 1]");
    }
    if (cell_area_ > foam_.width * foam_.depth) {
        throw DomainError("cell area " + std::to_string(cell_area_) +
                          " mm^2 exceeds the foam footprint");
    }
    side_ = ::foamfab::hex_side(cell_area_);
    pitch_ = kSqrt3 * side_ / std::sqrt(infill_);
    center_ = {foam_.width / 2.0, foam_.depth / 2.0};
}

Vec2 HexGrid::center_of(Axial cell) const {
    return {center_.x + pitch_ * (cell.q + cell.r / 2.0),
            center_.y + pitch_ * (kSqrt3 / 2.0) * cell.r};
}

Axial HexGrid::cell_at(Vec2 p) const {
    const double ry = (p.y - center_.y) / (pitch_ * kSqrt3 / 2.0);
    const double rq = (p.x - center_.x) / pitch_ - ry / 2.0;
    return axial_round(rq, ry);
}

bool HexGrid::contains(Axial cell) const {
    Vec2 c = center_of(cell);
    return c.x >= 0.0 && c.x <= foam_.width && c.y >= 0.0 && c.y <= foam_.depth;
}

std::vector<Axial> HexGrid::cells() const {
    const double row_height = pitch_ * kSqrt3 / 2.0;
    const int r_min = static_cast<int>(std::floor((0.0 - center_.y) / row_height)) - 1;
    const int r_max = static_cast<int>(std::ceil((foam_.depth - center_.y) / row_height)) + 1;
    std::vector<Axial> result;
    for (int r = r_min; r <= r_max; ++r) {
        const double x_offset = center_.x + pitch_ * (r / 2.0);
        const int q_min = static_cast<int>(std::floor((0.0 - x_offset) / pitch_)) - 1;
        const int q_max = static_cast<int>(std::ceil((foam_.width - x_offset) / pitch_)) + 1;
        for (int q = q_min; q <= q_max; ++q) {
            if (contains({q, r})) {
                result.push_back({q, r});
            }
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

HexGrid build_grid(const FoamBlock& foam, double cell_area_mm2, double infill_ratio) {
    return HexGrid(foam, cell_area_mm2, infill_ratio);
}

} // namespace foamfab
