#include "foamfab/svg.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "foamfab/textio.hpp"

namespace foamfab {

namespace {

// Fill palette cycled by print-file index.
constexpr std::array<const char*, 8> kFileColors = {
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759",
    "#b07aa1", "#76b7b2", "#edc948", "#9c755f",
};

constexpr double kMarginMm = 5.0;
constexpr double kPxPerMm = 10.0;

std::string num(double v) { return fmt_fixed(v, 2); }

} // namespace

std::string render_preview_svg(const PreviewDoc& doc) {
    doc.foam.validate();
    const double w = doc.foam.width + 2.0 * kMarginMm;
    const double h = doc.foam.depth + 2.0 * kMarginMm;
    // SVG y grows downward; emit flipped coordinates so depth points up.
    auto px = [](double x_mm) { return (x_mm + kMarginMm) * kPxPerMm; };
    auto py = [&](double y_mm) { return (doc.foam.depth - y_mm + kMarginMm) * kPxPerMm; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w * kPxPerMm)
        << "\" height=\"" << num(h * kPxPerMm) << "\" viewBox=\"0 0 " << num(w * kPxPerMm) << " "
        << num(h * kPxPerMm) << "\">\n";
    out << "<g id=\"foam\">\n";
    out << "<rect x=\"" << num(px(0)) << "\" y=\"" << num(py(doc.foam.depth)) << "\" width=\""
        << num(doc.foam.width * kPxPerMm) << "\" height=\"" << num(doc.foam.depth * kPxPerMm)
        << "\" fill=\"#f4efe8\" stroke=\"#444444\" stroke-width=\"2\"/>\n";
    out << "</g>\n";

    out << "<g id=\"cells\" stroke=\"#333333\" stroke-width=\"0.8\">\n";
    for (const PreviewCell& cell : doc.cells) {
        const char* fill = kFileColors[static_cast<std::size_t>(cell.file_index) %
                                       kFileColors.size()];
        out << "<polygon class=\"cell\" fill=\"" << fill << "\" points=\"";
        // pointy-top: first vertex straight up from the center
        for (int k = 0; k < 6; ++k) {
            const double angle = (90.0 + 60.0 * k) * M_PI / 180.0;
            const double x = cell.center.x + cell.hex_side * std::cos(angle);
            const double y = cell.center.y + cell.hex_side * std::sin(angle);
            out << (k ? " " : "") << num(px(x)) << "," << num(py(y));
        }
        out << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g id=\"silhouettes\" fill=\"none\" stroke=\"#c4201d\" stroke-width=\"1.6\">\n";
    for (const Contour& contour : doc.silhouettes) {
        out << "<polyline class=\"silhouette\" points=\"";
        for (std::size_t i = 0; i < contour.points.size(); ++i) {
            out << (i ? " " : "") << num(px(contour.points[i].x)) << ","
                << num(py(contour.points[i].y));
        }
        out << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g id=\"order\" font-family=\"sans-serif\" text-anchor=\"middle\">\n";
    for (const PreviewCell& cell : doc.cells) {
        const double font_px = std::max(4.0, cell.hex_side * kPxPerMm * 0.7);
        out << "<text class=\"order\" x=\"" << num(px(cell.center.x)) << "\" y=\""
            << num(py(cell.center.y) + font_px * 0.35) << "\" font-size=\"" << num(font_px)
            << "\">" << cell.order << "</text>\n";
    }
    out << "</g>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace foamfab
