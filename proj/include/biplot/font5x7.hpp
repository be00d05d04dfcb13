#pragma once

namespace biplot {

/// 7 row strings of 5 chars ('#' = pixel on) for a printable ASCII char;
/// anything outside 32..126 maps to '?'.
const char* const* glyph5x7(char c);

}  // namespace biplot
