#pragma once

#include "biplot/types.hpp"

namespace biplot {

/// Convex hull of a planar point set, or the documented fallback: with fewer
/// than 3 points, or all points collinear, the renderer is told to draw the
/// points themselves.
struct HullResult {
    bool passthrough = false;  // true: no polygon, draw the points
    Config vertices;           // CCW hull vertices (empty when passthrough)
};

/// Monotone-chain hull. Vertices are a strict subset of the input (collinear
/// boundary points excluded), ordered counter-clockwise starting from the
/// lexicographically smallest point.
HullResult convex_hull(const Config& points);

/// Twice the signed area of triangle (a, b, c); > 0 for a left turn.
double cross2(const RowVector2& a, const RowVector2& b, const RowVector2& c);

/// True if q lies inside or on the polygon (CCW vertex order).
bool point_in_hull(const Config& hull, const RowVector2& q, double eps = 1e-12);

}  // namespace biplot
