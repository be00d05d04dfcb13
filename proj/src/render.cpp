#include "biplot/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "biplot/errors.hpp"

namespace biplot {

namespace {

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string fmt_tick(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

Rgb hsv_to_rgb(double h, double s, double v) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else { r = c; b = x; }
    const double m = v - c;
    auto to8 = [](double f) { return static_cast<uint8_t>(std::lround(f * 255.0)); };
    return {to8(r + m), to8(g + m), to8(b + m)};
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

Rgb parse_hex_color(const std::string& hex) {
    auto bad = [&] { return ConfigError("invalid hex color \"" + hex + "\""); };
    if (hex.size() != 7 || hex[0] != '#') throw bad();
    auto nib = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw bad();
    };
    auto byte = [&](int i) {
        return static_cast<uint8_t>(nib(hex[static_cast<size_t>(i)]) * 16 +
                                    nib(hex[static_cast<size_t>(i + 1)]));
    };
    return {byte(1), byte(3), byte(5)};
}

std::string to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::vector<std::string> default_palette() {
    std::vector<std::string> out;
    for (int k = 0; k < 10; ++k) out.push_back(to_hex(hsv_to_rgb(36.0 * k, 0.62, 0.82)));
    return out;
}

RenderStyle default_style() {
    RenderStyle s;
    s.group_palette = default_palette();
    return s;
}

RenderStyle load_style(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open style file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("style file " + path + ": " + e.what());
    }
    RenderStyle s = default_style();
    try {
        if (j.contains("width")) s.width = j.at("width").get<int>();
        if (j.contains("height")) s.height = j.at("height").get<int>();
        if (j.contains("group_palette"))
            s.group_palette = j.at("group_palette").get<std::vector<std::string>>();
        if (j.contains("vector_color")) s.vector_color = j.at("vector_color").get<std::string>();
        if (j.contains("label_font_size"))
            s.label_font_size = j.at("label_font_size").get<double>();
        if (j.contains("hull_opacity")) s.hull_opacity = j.at("hull_opacity").get<double>();
        if (j.contains("margin")) s.margin = j.at("margin").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("style file " + path + ": " + e.what());
    }
    if (s.width <= 0 || s.height <= 0)
        throw ConfigError("style: width and height must be positive");
    if (s.group_palette.empty()) throw ConfigError("style: group_palette must not be empty");
    if (s.hull_opacity < 0.0 || s.hull_opacity > 1.0)
        throw ConfigError("style: hull_opacity must lie in [0, 1]");
    for (const auto& c : s.group_palette) parse_hex_color(c);
    parse_hex_color(s.vector_color);
    return s;
}

namespace {

void grow(Viewport& v, double x, double y, bool& first) {
    if (first) {
        v = {x, x, y, y};
        first = false;
        return;
    }
    v.xmin = std::min(v.xmin, x);
    v.xmax = std::max(v.xmax, x);
    v.ymin = std::min(v.ymin, y);
    v.ymax = std::max(v.ymax, y);
}

}  // namespace

Viewport compute_viewport(const std::vector<Frame>& frames) {
    if (frames.empty()) throw DataError("viewport: no frames");
    Viewport v;
    bool first = true;
    grow(v, 0.0, 0.0, first);  // vectors emanate from the origin
    for (const auto& f : frames) {
        for (Index i = 0; i < f.sample_points.rows(); ++i)
            grow(v, f.sample_points(i, 0), f.sample_points(i, 1), first);
        for (Index i = 0; i < f.variable_vectors.rows(); ++i)
            grow(v, f.variable_vectors(i, 0), f.variable_vectors(i, 1), first);
        for (const auto& h : f.hulls)
            for (Index i = 0; i < h.vertices.rows(); ++i)
                grow(v, h.vertices(i, 0), h.vertices(i, 1), first);
        for (const auto& s : f.shadows)
            for (Index i = 0; i < s.points.rows(); ++i)
                grow(v, s.points(i, 0), s.points(i, 1), first);
    }
    const double dx = v.width() * 0.05;
    const double dy = v.height() * 0.05;
    v.xmin -= dx;
    v.xmax += dx;
    v.ymin -= dy;
    v.ymax += dy;
    return v;
}

Viewport compute_viewport(const FrameSequence& seq) { return compute_viewport(seq.frames); }

Rgb group_color(const RenderStyle& style, const std::vector<std::string>& legend,
                const std::string& group) {
    size_t idx = 0;
    for (size_t i = 0; i < legend.size(); ++i) {
        if (legend[i] == group) {
            idx = i;
            break;
        }
    }
    return parse_hex_color(style.group_palette[idx % style.group_palette.size()]);
}

namespace {

// data -> panel-local pixel coordinates
struct Mapper {
    const RenderStyle& style;
    const Viewport& vp;
    double px(double x) const {
        return style.margin + (x - vp.xmin) / vp.width() * (style.width - 2.0 * style.margin);
    }
    double py(double y) const {
        return style.height - style.margin -
               (y - vp.ymin) / vp.height() * (style.height - 2.0 * style.margin);
    }
};

void check_viewport(const Viewport& vp) {
    if (!(vp.width() > 0.0) || !(vp.height() > 0.0))
        throw NumericError("render: degenerate viewport (zero area)");
}

std::string annotation_of(const Frame& f) {
    if (f.phase.kind == PhaseKind::Pause) return f.phase.from;
    return f.phase.from + " -> " + f.phase.to;
}

void render_circle(std::ostringstream& out, double cx, double cy, double r, Rgb fill,
                   double opacity) {
    out << "<circle cx=\"" << fmt2(cx) << "\" cy=\"" << fmt2(cy) << "\" r=\"" << fmt2(r)
        << "\" fill=\"" << to_hex(fill) << "\"";
    if (opacity < 1.0) out << " fill-opacity=\"" << fmt3(opacity) << "\"";
    out << "/>\n";
}

// geometry layers shared by single-frame renders and facet panels
std::string render_frame_content(const Frame& frame, const RenderStyle& style,
                                 const Mapper& m) {
    std::ostringstream out;
    out << "<g class=\"frame\">\n";

    out << "<g class=\"shadows\">\n";
    for (const auto& s : frame.shadows) {
        for (Index i = 0; i < s.points.rows(); ++i) {
            const Rgb c = group_color(style, frame.legend_groups, s.groups[static_cast<size_t>(i)]);
            render_circle(out, m.px(s.points(i, 0)), m.py(s.points(i, 1)), 2.5, c, s.opacity);
        }
    }
    out << "</g>\n";

    out << "<g class=\"hulls\">\n";
    for (const auto& h : frame.hulls) {
        if (h.passthrough) continue;
        const Rgb c = group_color(style, frame.legend_groups, h.group);
        out << "<path d=\"";
        for (Index i = 0; i < h.vertices.rows(); ++i) {
            out << (i == 0 ? "M" : " L") << fmt2(m.px(h.vertices(i, 0))) << ","
                << fmt2(m.py(h.vertices(i, 1)));
        }
        out << " Z\" fill=\"" << to_hex(c) << "\" fill-opacity=\"" << fmt3(style.hull_opacity)
            << "\" stroke=\"" << to_hex(c) << "\" stroke-width=\"1\"/>\n";
    }
    out << "</g>\n";

    // with hulls on, only groups that fell back to passthrough keep points
    std::vector<std::string> point_groups;
    if (frame.hulls_enabled) {
        for (const auto& h : frame.hulls)
            if (h.passthrough) point_groups.push_back(h.group);
    }
    out << "<g class=\"samples\">\n";
    for (Index i = 0; i < frame.sample_points.rows(); ++i) {
        const auto& g = frame.groups[static_cast<size_t>(i)];
        if (frame.hulls_enabled &&
            std::find(point_groups.begin(), point_groups.end(), g) == point_groups.end())
            continue;
        const Rgb c = group_color(style, frame.legend_groups, g);
        render_circle(out, m.px(frame.sample_points(i, 0)), m.py(frame.sample_points(i, 1)),
                      3.5, c, 0.9);
    }
    out << "</g>\n";

    const Rgb vc = parse_hex_color(style.vector_color);
    out << "<g class=\"vectors\">\n";
    const double ox = m.px(0.0), oy = m.py(0.0);
    for (Index i = 0; i < frame.variable_vectors.rows(); ++i) {
        const double tx = m.px(frame.variable_vectors(i, 0));
        const double ty = m.py(frame.variable_vectors(i, 1));
        out << "<line x1=\"" << fmt2(ox) << "\" y1=\"" << fmt2(oy) << "\" x2=\"" << fmt2(tx)
            << "\" y2=\"" << fmt2(ty) << "\" stroke=\"" << to_hex(vc)
            << "\" stroke-width=\"1.5\"/>\n";
        const double dx = tx - ox, dy = ty - oy;
        const double len = std::sqrt(dx * dx + dy * dy);
        if (len > 1e-9) {
            const double ux = dx / len, uy = dy / len;
            const double paxx = -uy, paxy = ux;
            out << "<polygon points=\"" << fmt2(tx) << "," << fmt2(ty) << " "
                << fmt2(tx - 8 * ux + 3.5 * paxx) << "," << fmt2(ty - 8 * uy + 3.5 * paxy)
                << " " << fmt2(tx - 8 * ux - 3.5 * paxx) << ","
                << fmt2(ty - 8 * uy - 3.5 * paxy) << "\" fill=\"" << to_hex(vc) << "\"/>\n";
        }
        if (i < static_cast<Index>(frame.variable_names.size())) {
            const bool right = frame.variable_vectors(i, 0) >= 0.0;
            const double lx = tx + (right ? 6.0 : -6.0);
            const double ly = ty + (frame.variable_vectors(i, 1) >= 0.0
                                        ? -4.0
                                        : style.label_font_size * 0.9);
            out << "<text x=\"" << fmt2(lx) << "\" y=\"" << fmt2(ly) << "\" font-family=\"sans-serif\" font-size=\""
                << fmt2(style.label_font_size) << "\" fill=\"" << to_hex(vc)
                << "\" text-anchor=\"" << (right ? "start" : "end") << "\">"
                << xml_escape(frame.variable_names[static_cast<size_t>(i)]) << "</text>\n";
        }
    }
    out << "</g>\n";

    out << "</g>\n";
    return out.str();
}

std::string render_legend(const std::vector<std::string>& legend, const RenderStyle& style,
                          double x, double y) {
    std::ostringstream out;
    out << "<g class=\"legend\">\n";
    for (const auto& g : legend) {
        const Rgb c = group_color(style, legend, g);
        out << "<rect x=\"" << fmt2(x) << "\" y=\"" << fmt2(y - 9.0)
            << "\" width=\"10\" height=\"10\" fill=\"" << to_hex(c) << "\"/>\n";
        out << "<text x=\"" << fmt2(x + 14.0) << "\" y=\"" << fmt2(y)
            << "\" font-family=\"sans-serif\" font-size=\"" << fmt2(style.label_font_size)
            << "\" fill=\"#222222\">" << xml_escape(g) << "</text>\n";
        x += 14.0 + 0.62 * style.label_font_size * double(g.size()) + 16.0;
    }
    out << "</g>\n";
    return out.str();
}

std::string svg_open(int w, int h) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"#ffffff\"/>\n";
    return out.str();
}

}  // namespace

std::string render_frame_svg(const Frame& frame, const RenderStyle& style,
                             const Viewport& viewport) {
    check_viewport(viewport);
    const Mapper m{style, viewport};
    std::ostringstream out;
    out << svg_open(style.width, style.height);
    out << render_frame_content(frame, style, m);
    out << render_legend(frame.legend_groups, style, style.margin,
                         double(style.height) - 12.0);
    out << "<text x=\"" << fmt2(style.margin) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\""
        << fmt2(style.label_font_size + 3.0) << "\" font-weight=\"bold\" fill=\"#222222\">"
        << xml_escape(annotation_of(frame)) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string render_facets(const std::vector<Frame>& frames, const RenderStyle& style,
                          int cols) {
    if (frames.empty()) throw DataError("facets: no states to render");
    if (cols < 1) throw ConfigError("facet columns must be >= 1");
    const Viewport vp = compute_viewport(frames);
    check_viewport(vp);
    const Mapper m{style, vp};

    const int T = static_cast<int>(frames.size());
    const int rows = (T + cols - 1) / cols;
    const int legend_band = 40;
    const int W = style.width * std::min(cols, T);
    const int H = style.height * rows + legend_band;

    std::ostringstream out;
    out << svg_open(W, H);
    for (int i = 0; i < T; ++i) {
        const int cx = i % cols;
        const int cy = i / cols;
        out << "<g class=\"panel\" transform=\"translate(" << cx * style.width << ","
            << cy * style.height << ")\">\n";
        out << "<rect x=\"0.5\" y=\"0.5\" width=\"" << style.width - 1 << "\" height=\""
            << style.height - 1 << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
        out << render_frame_content(frames[static_cast<size_t>(i)], style, m);
        out << "<text x=\"" << fmt2(style.margin) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\""
            << fmt2(style.label_font_size + 3.0) << "\" font-weight=\"bold\" fill=\"#222222\">"
            << xml_escape(frames[static_cast<size_t>(i)].phase.from) << "</text>\n";
        out << "</g>\n";
    }
    out << render_legend(frames.front().legend_groups, style, style.margin,
                         double(H) - 14.0);
    out << "</svg>\n";
    return out.str();
}

namespace {

struct Series {
    std::string name;
    std::string color;
    std::vector<double> values;
};

std::string render_chart(const std::string& title, const std::vector<std::string>& levels,
                         const std::vector<Series>& series, const RenderStyle& style,
                         const std::string& peak_marker_series) {
    const double left = 64, right = 20, top = 34, bottom = 48;
    const double W = style.width, H = style.height;
    const double plot_w = W - left - right;
    const double plot_h = H - top - bottom;
    const int N = static_cast<int>(levels.size());

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : series)
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = (hi - lo) * 0.08;
    lo -= pad;
    hi += pad;

    auto X = [&](int i) { return left + (N == 1 ? 0.0 : double(i) * plot_w / double(N - 1)); };
    auto Y = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

    std::ostringstream out;
    out << svg_open(static_cast<int>(W), static_cast<int>(H));
    out << "<text x=\"" << fmt2(left) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\""
        << fmt2(style.label_font_size + 2.0) << "\" font-weight=\"bold\" fill=\"#222222\">"
        << xml_escape(title) << "</text>\n";

    // y grid and ticks
    for (int i = 0; i < 5; ++i) {
        const double v = lo + (hi - lo) * double(i) / 4.0;
        const double y = Y(v);
        out << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(y) << "\" x2=\""
            << fmt2(W - right) << "\" y2=\"" << fmt2(y)
            << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt2(left - 8.0) << "\" y=\"" << fmt2(y + 4.0)
            << "\" font-family=\"sans-serif\" font-size=\"" << fmt2(style.label_font_size - 1.0)
            << "\" fill=\"#444444\" text-anchor=\"end\">" << fmt_tick(v) << "</text>\n";
    }
    // categorical x axis
    out << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(H - bottom) << "\" x2=\""
        << fmt2(W - right) << "\" y2=\"" << fmt2(H - bottom)
        << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    for (int i = 0; i < N; ++i) {
        out << "<text x=\"" << fmt2(X(i)) << "\" y=\"" << fmt2(H - bottom + 18.0)
            << "\" font-family=\"sans-serif\" font-size=\"" << fmt2(style.label_font_size - 1.0)
            << "\" fill=\"#444444\" text-anchor=\"middle\">" << xml_escape(levels[static_cast<size_t>(i)])
            << "</text>\n";
    }

    double lx = left;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"2\" points=\"";
        for (int i = 0; i < N; ++i) {
            if (i) out << ' ';
            out << fmt2(X(i)) << "," << fmt2(Y(s.values[static_cast<size_t>(i)]));
        }
        out << "\"/>\n";
        for (int i = 0; i < N; ++i)
            out << "<circle cx=\"" << fmt2(X(i)) << "\" cy=\""
                << fmt2(Y(s.values[static_cast<size_t>(i)])) << "\" r=\"3\" fill=\"" << s.color
                << "\"/>\n";
        // series legend
        out << "<rect x=\"" << fmt2(lx) << "\" y=\"" << fmt2(H - 16.0)
            << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << fmt2(lx + 14.0) << "\" y=\"" << fmt2(H - 7.0)
            << "\" font-family=\"sans-serif\" font-size=\"" << fmt2(style.label_font_size - 1.0)
            << "\" fill=\"#222222\">" << xml_escape(s.name) << "</text>\n";
        lx += 14.0 + 0.62 * (style.label_font_size - 1.0) * double(s.name.size()) + 18.0;

        if (s.name == peak_marker_series) {
            int peak = 0;
            for (int i = 1; i < N; ++i)
                if (s.values[static_cast<size_t>(i)] > s.values[static_cast<size_t>(peak)])
                    peak = i;
            out << "<circle id=\"ps-peak\" data-level=\""
                << xml_escape(levels[static_cast<size_t>(peak)]) << "\" cx=\"" << fmt2(X(peak))
                << "\" cy=\"" << fmt2(Y(s.values[static_cast<size_t>(peak)]))
                << "\" r=\"6.5\" fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace

MeasureCharts render_measure_charts(const EvaluationReport& report, const RenderStyle& style) {
    if (report.records.size() < 2)
        throw ConfigError("measure charts need at least 2 levels; use the table output for a "
                          "single comparison");
    std::vector<std::string> levels;
    Series ps{"PS", "#d95f02", {}}, cc{"CC", "#1b9e77", {}};
    Series amb{"AMB", "#7570b3", {}}, mb{"MB", "#e7298a", {}}, rmsb{"RMSB", "#66a61e", {}};
    for (const auto& r : report.records) {
        levels.push_back(r.level);
        ps.values.push_back(r.PS);
        cc.values.push_back(r.CC);
        amb.values.push_back(r.AMB);
        mb.values.push_back(r.MB);
        rmsb.values.push_back(r.RMSB);
    }
    MeasureCharts charts;
    charts.fit_svg = render_chart("Fit measures", levels, {ps, cc}, style, "PS");
    charts.bias_svg = render_chart("Bias measures", levels, {amb, mb, rmsb}, style, "");
    return charts;
}

}  // namespace biplot
