#include "biplot/gif.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "biplot/errors.hpp"
#include "biplot/font5x7.hpp"

namespace biplot {

namespace {

Rgb blend_over_white(Rgb c, double alpha) {
    auto mix = [&](uint8_t v) {
        return static_cast<uint8_t>(std::lround(alpha * v + (1.0 - alpha) * 255.0));
    };
    return {mix(c.r), mix(c.g), mix(c.b)};
}

// Fixed global palette: white, black, grays, then an 18-step fade toward
// white for each style color (groups first, vector color last).
std::vector<Rgb> build_palette(const RenderStyle& style) {
    std::vector<Rgb> pal;
    pal.push_back({255, 255, 255});
    pal.push_back({0, 0, 0});
    pal.push_back({68, 68, 68});
    pal.push_back({204, 204, 204});

    std::vector<Rgb> bases;
    for (const auto& hex : style.group_palette) bases.push_back(parse_hex_color(hex));
    bases.push_back(parse_hex_color(style.vector_color));
    const size_t max_ramps = (256 - pal.size()) / 18;
    if (bases.size() > max_ramps) bases.resize(max_ramps);
    for (const auto& base : bases) {
        for (int k = 0; k < 18; ++k) {
            const double alpha = 1.0 - double(k) / 18.0;
            pal.push_back(blend_over_white(base, alpha));
        }
    }
    pal.resize(std::min<size_t>(pal.size(), 256));
    while (pal.size() < 256) pal.push_back({0, 0, 0});
    return pal;
}

class Canvas {
public:
    Canvas(int w, int h, std::vector<Rgb> palette)
        : w_(w), h_(h), px_(static_cast<size_t>(w) * static_cast<size_t>(h), 0),
          palette_(std::move(palette)) {}

    int width() const { return w_; }
    int height() const { return h_; }
    const std::vector<uint8_t>& pixels() const { return px_; }
    const std::vector<Rgb>& palette() const { return palette_; }

    void clear(uint8_t idx) { std::fill(px_.begin(), px_.end(), idx); }

    uint8_t color(Rgb c, double alpha = 1.0) {
        const Rgb want = alpha < 1.0 ? blend_over_white(c, alpha) : c;
        const uint32_t key = (uint32_t(want.r) << 16) | (uint32_t(want.g) << 8) | want.b;
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        size_t best = 0;
        long best_d = 1L << 30;
        for (size_t i = 0; i < palette_.size(); ++i) {
            const long dr = long(palette_[i].r) - want.r;
            const long dg = long(palette_[i].g) - want.g;
            const long db = long(palette_[i].b) - want.b;
            const long d = dr * dr + dg * dg + db * db;
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        cache_.emplace(key, static_cast<uint8_t>(best));
        return static_cast<uint8_t>(best);
    }

    void set(int x, int y, uint8_t idx) {
        if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
        px_[static_cast<size_t>(y) * w_ + x] = idx;
    }

    void fill_circle(double cx, double cy, double r, uint8_t idx) {
        const int ri = static_cast<int>(std::ceil(r));
        const int x0 = static_cast<int>(std::lround(cx));
        const int y0 = static_cast<int>(std::lround(cy));
        for (int dy = -ri; dy <= ri; ++dy) {
            for (int dx = -ri; dx <= ri; ++dx) {
                if (dx * dx + dy * dy <= r * r) set(x0 + dx, y0 + dy, idx);
            }
        }
    }

    void line(double x0d, double y0d, double x1d, double y1d, uint8_t idx, int thickness = 1) {
        int x0 = static_cast<int>(std::lround(x0d));
        int y0 = static_cast<int>(std::lround(y0d));
        const int x1 = static_cast<int>(std::lround(x1d));
        const int y1 = static_cast<int>(std::lround(y1d));
        const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
        const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        const int t0 = -(thickness / 2), t1 = t0 + thickness;
        while (true) {
            for (int oy = t0; oy < t1; ++oy)
                for (int ox = t0; ox < t1; ++ox) set(x0 + ox, y0 + oy, idx);
            if (x0 == x1 && y0 == y1) break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    void fill_polygon(const std::vector<std::pair<double, double>>& pts, uint8_t idx) {
        if (pts.size() < 3) return;
        double ymin = pts[0].second, ymax = pts[0].second;
        for (const auto& p : pts) {
            ymin = std::min(ymin, p.second);
            ymax = std::max(ymax, p.second);
        }
        const int y0 = std::max(0, static_cast<int>(std::floor(ymin)));
        const int y1 = std::min(h_ - 1, static_cast<int>(std::ceil(ymax)));
        std::vector<double> xs;
        for (int y = y0; y <= y1; ++y) {
            const double yc = y + 0.5;
            xs.clear();
            for (size_t i = 0; i < pts.size(); ++i) {
                const auto& a = pts[i];
                const auto& b = pts[(i + 1) % pts.size()];
                if ((a.second <= yc && yc < b.second) || (b.second <= yc && yc < a.second)) {
                    xs.push_back(a.first +
                                 (yc - a.second) * (b.first - a.first) / (b.second - a.second));
                }
            }
            std::sort(xs.begin(), xs.end());
            for (size_t k = 0; k + 1 < xs.size(); k += 2) {
                const int xa = static_cast<int>(std::lround(xs[k]));
                const int xb = static_cast<int>(std::lround(xs[k + 1]));
                for (int x = xa; x <= xb; ++x) set(x, y, idx);
            }
        }
    }

    void text(double xd, double yd, const std::string& s, uint8_t idx, int scale) {
        int x = static_cast<int>(std::lround(xd));
        const int y = static_cast<int>(std::lround(yd));
        for (char c : s) {
            const char* const* glyph = glyph5x7(c);
            for (int row = 0; row < 7; ++row) {
                for (int col = 0; col < 5; ++col) {
                    if (glyph[row][col] != '#') continue;
                    for (int sy = 0; sy < scale; ++sy)
                        for (int sx = 0; sx < scale; ++sx)
                            set(x + col * scale + sx, y + row * scale + sy, idx);
                }
            }
            x += 6 * scale;
        }
    }

private:
    int w_, h_;
    std::vector<uint8_t> px_;
    std::vector<Rgb> palette_;
    std::unordered_map<uint32_t, uint8_t> cache_;
};

int text_width(const std::string& s, int scale) { return static_cast<int>(s.size()) * 6 * scale; }

// ---- GIF89a encoding ----

void put_u16(std::string& out, unsigned v) {
    out += static_cast<char>(v & 0xFF);
    out += static_cast<char>((v >> 8) & 0xFF);
}

class BitWriter {
public:
    explicit BitWriter(std::string& out) : out_(out) {}

    void put(unsigned code, int bits) {
        acc_ |= static_cast<uint32_t>(code) << nbits_;
        nbits_ += bits;
        while (nbits_ >= 8) {
            byte(static_cast<uint8_t>(acc_ & 0xFF));
            acc_ >>= 8;
            nbits_ -= 8;
        }
    }

    void finish() {
        if (nbits_ > 0) byte(static_cast<uint8_t>(acc_ & 0xFF));
        if (!block_.empty()) flush_block();
        out_ += '\0';  // block terminator
        acc_ = 0;
        nbits_ = 0;
    }

private:
    void byte(uint8_t b) {
        block_ += static_cast<char>(b);
        if (block_.size() == 255) flush_block();
    }
    void flush_block() {
        out_ += static_cast<char>(block_.size());
        out_ += block_;
        block_.clear();
    }

    std::string& out_;
    std::string block_;
    uint32_t acc_ = 0;
    int nbits_ = 0;
};

// LZW with the standard 8-bit min code size and deferred dictionary reset.
void write_lzw(std::string& out, const std::vector<uint8_t>& pixels) {
    constexpr int kMinCode = 8;
    constexpr unsigned kClear = 256;
    constexpr unsigned kEoi = 257;
    out += static_cast<char>(kMinCode);

    std::vector<std::array<uint16_t, 256>> children(4096);
    auto reset = [&] { std::memset(children.data(), 0, children.size() * sizeof(children[0])); };
    reset();

    BitWriter bits(out);
    int code_size = kMinCode + 1;
    unsigned max_code = kEoi;
    bits.put(kClear, code_size);

    int32_t cur = -1;
    for (uint8_t p : pixels) {
        if (cur < 0) {
            cur = p;
            continue;
        }
        const uint16_t child = children[static_cast<size_t>(cur)][p];
        if (child != 0) {
            cur = child;
            continue;
        }
        bits.put(static_cast<unsigned>(cur), code_size);
        children[static_cast<size_t>(cur)][p] = static_cast<uint16_t>(++max_code);
        if (max_code >= (1u << code_size)) ++code_size;
        if (max_code == 4095) {
            bits.put(kClear, code_size);
            reset();
            code_size = kMinCode + 1;
            max_code = kEoi;
        }
        cur = p;
    }
    bits.put(static_cast<unsigned>(cur), code_size);
    bits.put(kClear, code_size);
    bits.put(kEoi, kMinCode + 1);
    bits.finish();
}

struct GifWriter {
    std::string bytes;

    void header(int w, int h, const std::vector<Rgb>& palette) {
        bytes += "GIF89a";
        put_u16(bytes, static_cast<unsigned>(w));
        put_u16(bytes, static_cast<unsigned>(h));
        bytes += static_cast<char>(0xF7);  // GCT present, 8-bit, 256 entries
        bytes += '\0';                     // background color index
        bytes += '\0';                     // aspect ratio
        for (const auto& c : palette) {
            bytes += static_cast<char>(c.r);
            bytes += static_cast<char>(c.g);
            bytes += static_cast<char>(c.b);
        }
        // loop forever
        bytes += static_cast<char>(0x21);
        bytes += static_cast<char>(0xFF);
        bytes += static_cast<char>(0x0B);
        bytes += "NETSCAPE2.0";
        bytes += static_cast<char>(0x03);
        bytes += static_cast<char>(0x01);
        put_u16(bytes, 0);
        bytes += '\0';
    }

    void frame(const Canvas& canvas, int delay_cs) {
        bytes += static_cast<char>(0x21);
        bytes += static_cast<char>(0xF9);
        bytes += static_cast<char>(0x04);
        bytes += static_cast<char>(0x04);  // disposal: do not dispose
        put_u16(bytes, static_cast<unsigned>(delay_cs));
        bytes += '\0';  // no transparency
        bytes += '\0';
        bytes += static_cast<char>(0x2C);
        put_u16(bytes, 0);
        put_u16(bytes, 0);
        put_u16(bytes, static_cast<unsigned>(canvas.width()));
        put_u16(bytes, static_cast<unsigned>(canvas.height()));
        bytes += '\0';  // no local color table
        write_lzw(bytes, canvas.pixels());
    }

    void trailer() { bytes += static_cast<char>(0x3B); }
};

// ---- frame rasterization ----

struct PixelMapper {
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

void rasterize_frame(Canvas& canvas, const Frame& f, const RenderStyle& style,
                     const Viewport& vp) {
    const PixelMapper m{style, vp};
    const uint8_t white = canvas.color({255, 255, 255});
    const uint8_t black = canvas.color({0, 0, 0});
    canvas.clear(white);

    for (const auto& s : f.shadows) {
        for (Index i = 0; i < s.points.rows(); ++i) {
            const Rgb c = group_color(style, f.legend_groups, s.groups[static_cast<size_t>(i)]);
            canvas.fill_circle(m.px(s.points(i, 0)), m.py(s.points(i, 1)), 2.0,
                               canvas.color(c, s.opacity));
        }
    }

    for (const auto& h : f.hulls) {
        if (h.passthrough) continue;
        const Rgb c = group_color(style, f.legend_groups, h.group);
        std::vector<std::pair<double, double>> poly;
        for (Index i = 0; i < h.vertices.rows(); ++i)
            poly.emplace_back(m.px(h.vertices(i, 0)), m.py(h.vertices(i, 1)));
        canvas.fill_polygon(poly, canvas.color(c, style.hull_opacity));
        for (size_t i = 0; i < poly.size(); ++i) {
            const auto& a = poly[i];
            const auto& b = poly[(i + 1) % poly.size()];
            canvas.line(a.first, a.second, b.first, b.second, canvas.color(c));
        }
    }

    std::vector<std::string> point_groups;
    if (f.hulls_enabled) {
        for (const auto& h : f.hulls)
            if (h.passthrough) point_groups.push_back(h.group);
    }
    for (Index i = 0; i < f.sample_points.rows(); ++i) {
        const auto& g = f.groups[static_cast<size_t>(i)];
        if (f.hulls_enabled &&
            std::find(point_groups.begin(), point_groups.end(), g) == point_groups.end())
            continue;
        const Rgb c = group_color(style, f.legend_groups, g);
        canvas.fill_circle(m.px(f.sample_points(i, 0)), m.py(f.sample_points(i, 1)), 3.0,
                           canvas.color(c));
    }

    const int scale = std::max(1, static_cast<int>(std::lround(style.label_font_size / 8.0)));
    const uint8_t vc = canvas.color(parse_hex_color(style.vector_color));
    const double ox = m.px(0.0), oy = m.py(0.0);
    for (Index i = 0; i < f.variable_vectors.rows(); ++i) {
        const double tx = m.px(f.variable_vectors(i, 0));
        const double ty = m.py(f.variable_vectors(i, 1));
        canvas.line(ox, oy, tx, ty, vc, 2);
        const double dx = tx - ox, dy = ty - oy;
        const double len = std::sqrt(dx * dx + dy * dy);
        if (len > 1e-9) {
            const double ux = dx / len, uy = dy / len;
            canvas.fill_polygon({{tx, ty},
                                 {tx - 7 * ux - 3 * uy, ty - 7 * uy + 3 * ux},
                                 {tx - 7 * ux + 3 * uy, ty - 7 * uy - 3 * ux}},
                                vc);
        }
        if (i < static_cast<Index>(f.variable_names.size())) {
            const std::string& name = f.variable_names[static_cast<size_t>(i)];
            const bool right = f.variable_vectors(i, 0) >= 0.0;
            const double lx = right ? tx + 5.0 : tx - 5.0 - text_width(name, scale);
            const double ly = f.variable_vectors(i, 1) >= 0.0 ? ty - 9.0 * scale : ty + 4.0;
            canvas.text(lx, ly, name, vc, scale);
        }
    }

    // legend band and level annotation
    double lx = style.margin;
    const double ly = double(style.height) - 10.0 - 7.0 * scale;
    for (const auto& g : f.legend_groups) {
        const uint8_t c = canvas.color(group_color(style, f.legend_groups, g));
        canvas.fill_circle(lx + 4.0, ly + 3.5 * scale, 4.0, c);
        canvas.text(lx + 12.0, ly, g, black, scale);
        lx += 12.0 + text_width(g, scale) + 14.0;
    }
    const std::string label = f.phase.kind == PhaseKind::Pause
                                  ? f.phase.from
                                  : f.phase.from + " -> " + f.phase.to;
    canvas.text(style.margin, 10.0, label, black, scale + 1);
}

}  // namespace

std::string encode_gif(const FrameSequence& seq, const RenderStyle& style,
                       const Viewport& viewport) {
    if (seq.frames.empty()) throw DataError("gif: empty frame sequence");
    if (!(viewport.width() > 0.0) || !(viewport.height() > 0.0))
        throw NumericError("gif: degenerate viewport (zero area)");
    if (!(seq.fps > 0.0)) throw ConfigError("gif: fps must be positive");

    const int delay_cs = static_cast<int>(std::lround(100.0 / seq.fps));
    Canvas canvas(style.width, style.height, build_palette(style));

    GifWriter gif;
    gif.header(style.width, style.height, canvas.palette());
    for (const auto& f : seq.frames) {
        rasterize_frame(canvas, f, style, viewport);
        gif.frame(canvas, delay_cs);
    }
    gif.trailer();
    return std::move(gif.bytes);
}

void assemble_gif(const FrameSequence& seq, const RenderStyle& style, const std::string& out) {
    const std::string bytes = encode_gif(seq, style, compute_viewport(seq));
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file: " + out);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failure: " + out);
}

}  // namespace biplot
