#pragma once

#include <string>

#include "biplot/animation.hpp"

namespace biplot {

/// Frame manifest:
/// {fps, levels:[...], frames:[{index, clock, phase:{kind, from, to, u},
///  samples:[{x,y,group}], vectors:[{x,y,name}],
///  hulls:[{group, vertices:[[x,y]...]}], shadows:[{level, opacity,
///  points:[{x,y,group}]}]}]}
/// Numbers are serialized at full (shortest round-trip) precision; empty
/// arrays are always present. A passthrough hull carries empty vertices.
std::string export_frames_json(const FrameSequence& seq);

/// Inverse of export_frames_json; export(import(export(x))) is byte-identical.
FrameSequence import_frames_json(const std::string& text);

}  // namespace biplot
