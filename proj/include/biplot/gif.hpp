#pragma once

#include <string>
#include <vector>

#include "biplot/animation.hpp"
#include "biplot/render.hpp"

namespace biplot {

/// Animated GIF89a bytes for the whole sequence: frame delay
/// round(100/fps) centiseconds, looping forever, one fixed global 256-color
/// palette derived from the style palette (deterministic output).
std::string encode_gif(const FrameSequence& seq, const RenderStyle& style,
                       const Viewport& viewport);

/// encode_gif + write to `out`.
void assemble_gif(const FrameSequence& seq, const RenderStyle& style, const std::string& out);

}  // namespace biplot
