#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "foamfab/foam.hpp"
#include "foamfab/vec.hpp"

namespace foamfab {

// Axial coordinates of a hex cell; see the pointy-top layout in HexGrid.
struct Axial {
    int q = 0;
    int r = 0;

    bool operator==(const Axial&) const = default;
    // Lexicographic (q, r): the tie-break order used everywhere.
    auto operator<=>(const Axial&) const = default;
};

struct AxialHash {
    std::size_t operator()(const Axial& a) const {
        return std::hash<std::int64_t>()((static_cast<std::int64_t>(a.q) << 32) ^
                                         static_cast<std::uint32_t>(a.r));
    }
};

// Pointy-top hexagonal lattice over the foam footprint. One cell center
// coincides with the footprint center. Each injection serves a regular
// hexagon of cell_area regardless of infill; the infill ratio widens the
// pitch by 1/sqrt(infill) so the injected-area density equals the ratio.
class HexGrid {
public:
    // The six neighbor steps, in the fixed enumeration order used by
    // planning. Every neighbor center is exactly one pitch away.
    static constexpr std::array<Axial, 6> kNeighborSteps = {
        {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

    HexGrid(const FoamBlock& foam, double cell_area_mm2, double infill_ratio);

    const FoamBlock& foam() const { return foam_; }
    double cell_area() const { return cell_area_; }
    double infill_ratio() const { return infill_; }
    double hex_side() const { return side_; }
    double pitch() const { return pitch_; }
    Vec2 footprint_center() const { return center_; }

    Vec2 center_of(Axial cell) const;
    // Nearest lattice cell to a point (axial rounding).
    Axial cell_at(Vec2 p) const;
    // True when the cell center lies inside the closed footprint rectangle.
    bool contains(Axial cell) const;
    // All footprint cells, sorted by (q, r).
    std::vector<Axial> cells() const;

private:
    FoamBlock foam_;
    double cell_area_ = 0.0;
    double infill_ = 1.0;
    double side_ = 0.0;
    double pitch_ = 0.0;
    Vec2 center_;
};

// Pitch scales the full-density tiling pitch of a regular hexagon of
// cell_area by 1/sqrt(infill_ratio). Throws DomainError when the cell does
// not fit the footprint or the arguments are out of range.
HexGrid build_grid(const FoamBlock& foam, double cell_area_mm2, double infill_ratio);

} // namespace foamfab
