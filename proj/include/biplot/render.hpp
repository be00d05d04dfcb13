#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biplot/animation.hpp"
#include "biplot/evaluation.hpp"
#include "biplot/types.hpp"

namespace biplot {

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

Rgb parse_hex_color(const std::string& hex);  // "#rrggbb"
std::string to_hex(Rgb c);

struct RenderStyle {
    int width = 800;
    int height = 600;
    std::vector<std::string> group_palette;  // hex colors, cycled when short
    std::string vector_color = "#3b3b3b";
    double label_font_size = 12.0;
    double hull_opacity = 0.35;
    double margin = 46.0;
};

/// Ten maximally-spaced hues, the default palette.
std::vector<std::string> default_palette();

RenderStyle default_style();

/// Read a style JSON file; absent fields keep their defaults.
RenderStyle load_style(const std::string& path);

/// Fixed data-space bounds shared by every frame of one run.
struct Viewport {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

/// Union bounding box over the frames' samples, hull vertices, shadows,
/// vector tips and the origin, expanded 5% per side.
Viewport compute_viewport(const std::vector<Frame>& frames);
Viewport compute_viewport(const FrameSequence& seq);

/// Group color in legend order, cycling the palette.
Rgb group_color(const RenderStyle& style, const std::vector<std::string>& legend,
                const std::string& group);

/// Deterministic standalone SVG of one frame: layers for shadows, hulls,
/// sample points, variable vectors, legend and the level annotation.
std::string render_frame_svg(const Frame& frame, const RenderStyle& style,
                             const Viewport& viewport);

/// Faceted sheet: one style-sized panel per frame (shared viewport), captioned
/// with its level, plus a single legend band. Row count = ceil(T / cols).
std::string render_facets(const std::vector<Frame>& frames, const RenderStyle& style,
                          int cols);

/// Line charts over levels: fit (PS, CC) and bias (AMB, MB, RMSB). The fit
/// chart marks the PS maximum. Needs >= 2 records.
struct MeasureCharts {
    std::string fit_svg;
    std::string bias_svg;
};
MeasureCharts render_measure_charts(const EvaluationReport& report, const RenderStyle& style);

}  // namespace biplot
