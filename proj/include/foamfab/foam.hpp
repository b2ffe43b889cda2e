#pragma once

#include "foamfab/error.hpp"

namespace foamfab {

// Rectangular foam block, the matrix the hydrogel is injected into.
// Coordinates throughout the toolkit put the origin at the block's
// minimum-x/y corner with z = 0 at the bottom. All lengths in mm.
struct FoamBlock {
    double width = 0.0;
    double depth = 0.0;
    double height = 0.0;

    void validate() const {
        if (!(width > 0.0 && depth > 0.0 && height > 0.0)) {
            throw DomainError("foam block dimensions must be strictly positive");
        }
    }
};

} // namespace foamfab
