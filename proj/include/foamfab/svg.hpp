#pragma once

#include <span>
#include <string>
#include <vector>

#include "foamfab/foam.hpp"
#include "foamfab/silhouette.hpp"
#include "foamfab/vec.hpp"

namespace foamfab {

// One hexagon cell of the preview: planar center, drawn hexagon side,
// 1-based global injection order, and the print file it belongs to.
struct PreviewCell {
    Vec2 center;
    double hex_side = 0.0;
    int order = 0;
    int file_index = 0; // 0-based
};

struct PreviewDoc {
    FoamBlock foam;
    std::vector<PreviewCell> cells;
    std::vector<Contour> silhouettes;
};

// Layered technical drawing of the plan: foam outline, hexagon cells colored
// by print file, injection-order labels, body silhouettes. Deterministic
// output; y points up (depth axis) like the machine coordinates.
std::string render_preview_svg(const PreviewDoc& doc);

} // namespace foamfab
