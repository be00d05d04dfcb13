#include "biplot/hull.hpp"

#include <algorithm>
#include <vector>

namespace biplot {

double cross2(const RowVector2& a, const RowVector2& b, const RowVector2& c) {
    return (b(0) - a(0)) * (c(1) - a(1)) - (b(1) - a(1)) * (c(0) - a(0));
}

HullResult convex_hull(const Config& points) {
    const Index m = points.rows();
    HullResult res;
    if (m < 3) {
        res.passthrough = true;
        return res;
    }

    std::vector<Index> idx(static_cast<size_t>(m));
    for (Index i = 0; i < m; ++i) idx[static_cast<size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
        if (points(a, 0) != points(b, 0)) return points(a, 0) < points(b, 0);
        return points(a, 1) < points(b, 1);
    });

    // Andrew's monotone chain, strict turns only: collinear points are never
    // emitted as vertices.
    auto build = [&](bool upper) {
        std::vector<Index> chain;
        for (size_t k = 0; k < idx.size(); ++k) {
            const Index i = idx[upper ? idx.size() - 1 - k : k];
            while (chain.size() >= 2) {
                const RowVector2 a = points.row(chain[chain.size() - 2]);
                const RowVector2 b = points.row(chain.back());
                if (cross2(a, b, points.row(i)) <= 0.0)
                    chain.pop_back();
                else
                    break;
            }
            chain.push_back(i);
        }
        return chain;
    };

    const auto lower = build(false);
    const auto upper = build(true);
    if (lower.size() < 3 && upper.size() < 3) {  // all collinear
        res.passthrough = true;
        return res;
    }

    std::vector<Index> hull(lower.begin(), lower.end() - 1);
    hull.insert(hull.end(), upper.begin(), upper.end() - 1);

    res.vertices.resize(static_cast<Index>(hull.size()), 2);
    for (size_t k = 0; k < hull.size(); ++k)
        res.vertices.row(static_cast<Index>(k)) = points.row(hull[k]);
    return res;
}

bool point_in_hull(const Config& hull, const RowVector2& q, double eps) {
    const Index k = hull.rows();
    if (k < 3) return false;
    for (Index i = 0; i < k; ++i) {
        const RowVector2 a = hull.row(i);
        const RowVector2 b = hull.row((i + 1) % k);
        if (cross2(a, b, q) < -eps) return false;
    }
    return true;
}

}  // namespace biplot
