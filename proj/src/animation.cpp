#include "biplot/animation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "biplot/alignment.hpp"
#include "biplot/errors.hpp"

namespace biplot {

namespace {

struct CanonicalState {
    std::string level;
    Config points;
    std::vector<std::string> groups;
    Config vectors;  // scale_var applied
};

std::vector<std::string> group_order_of(const std::vector<std::string>& groups,
                                        const std::vector<std::string>& group_levels) {
    std::vector<std::string> order;
    for (const auto& g : group_levels)
        if (std::find(groups.begin(), groups.end(), g) != groups.end()) order.push_back(g);
    for (const auto& g : groups)
        if (std::find(order.begin(), order.end(), g) == order.end()) order.push_back(g);
    return order;
}

std::vector<GroupHull> hulls_of(const Config& points, const std::vector<std::string>& groups,
                                const std::vector<std::string>& group_levels) {
    std::vector<GroupHull> out;
    for (const auto& g : group_order_of(groups, group_levels)) {
        std::vector<Index> rows;
        for (size_t i = 0; i < groups.size(); ++i)
            if (groups[i] == g) rows.push_back(static_cast<Index>(i));
        Config pts(static_cast<Index>(rows.size()), 2);
        for (size_t i = 0; i < rows.size(); ++i)
            pts.row(static_cast<Index>(i)) = points.row(rows[i]);
        auto hull = convex_hull(pts);
        GroupHull gh;
        gh.group = g;
        gh.passthrough = hull.passthrough;
        if (!hull.passthrough) gh.vertices = std::move(hull.vertices);
        out.push_back(std::move(gh));
    }
    return out;
}

std::map<std::string, Index> counts_of(const std::vector<std::string>& groups) {
    std::map<std::string, Index> c;
    for (const auto& g : groups) ++c[g];
    return c;
}

// Matched endpoint point sets for one transition. When per-group counts agree
// the canonical rows already correspond; otherwise (fixed frame only) the
// smaller side of each group is index-cycled up to the larger count.
struct TransitionEndpoints {
    Config a;
    Config b;
    std::vector<std::string> groups;
};

TransitionEndpoints match_endpoints(const CanonicalState& sa, const CanonicalState& sb,
                                    const std::vector<std::string>& group_levels) {
    TransitionEndpoints te;
    if (counts_of(sa.groups) == counts_of(sb.groups)) {
        te.a = sa.points;
        te.b = sb.points;
        te.groups = sa.groups;
        return te;
    }

    std::vector<std::string> all = sa.groups;
    all.insert(all.end(), sb.groups.begin(), sb.groups.end());
    std::vector<RowVector2> arows, brows;
    for (const auto& g : group_order_of(all, group_levels)) {
        std::vector<Index> ia, ib;
        for (size_t i = 0; i < sa.groups.size(); ++i)
            if (sa.groups[i] == g) ia.push_back(static_cast<Index>(i));
        for (size_t i = 0; i < sb.groups.size(); ++i)
            if (sb.groups[i] == g) ib.push_back(static_cast<Index>(i));
        const size_t m = std::max(ia.size(), ib.size());
        for (size_t i = 0; i < m; ++i) {
            const RowVector2 pa = ia.empty() ? RowVector2(sb.points.row(ib[i % ib.size()]))
                                             : RowVector2(sa.points.row(ia[i % ia.size()]));
            const RowVector2 pb = ib.empty() ? RowVector2(sa.points.row(ia[i % ia.size()]))
                                             : RowVector2(sb.points.row(ib[i % ib.size()]));
            arows.push_back(pa);
            brows.push_back(pb);
            te.groups.push_back(g);
        }
    }
    te.a.resize(static_cast<Index>(arows.size()), 2);
    te.b.resize(static_cast<Index>(brows.size()), 2);
    for (size_t i = 0; i < arows.size(); ++i) {
        te.a.row(static_cast<Index>(i)) = arows[i];
        te.b.row(static_cast<Index>(i)) = brows[i];
    }
    return te;
}

}  // namespace

FrameSequence build_timeline(const std::vector<BiplotState>& states, FrameMode mode,
                             const TimelineOptions& opts,
                             const std::vector<std::string>& group_levels) {
    if (states.size() < 2)
        throw DataError("timeline: need at least 2 states, got " +
                        std::to_string(states.size()));
    if (opts.pause_frames < 1)
        throw ConfigError("timeline: pause frames must be >= 1");
    if (opts.transition_frames < 0)
        throw ConfigError("timeline: transition frames must be >= 0");
    if (!(opts.fps > 0.0)) throw ConfigError("timeline: fps must be positive");
    if (!(opts.scale_var > 0.0)) throw ConfigError("timeline: scale-var must be positive");
    if (opts.shadow && opts.hulls)
        throw ConfigError("shadow trails are available only when hulls are disabled");

    const size_t T = states.size();
    std::vector<CanonicalState> cs(T);
    Config shared_vectors;
    if (mode == FrameMode::Fixed) shared_vectors = states.front().V * opts.scale_var;
    for (size_t t = 0; t < T; ++t) {
        const auto order = canonical_row_order(states[t], group_levels);
        cs[t].level = states[t].level;
        cs[t].points.resize(states[t].Z.rows(), 2);
        cs[t].groups.resize(order.size());
        for (size_t i = 0; i < order.size(); ++i) {
            cs[t].points.row(static_cast<Index>(i)) = states[t].Z.row(order[i]);
            cs[t].groups[i] = states[t].group_of_row[static_cast<size_t>(order[i])];
        }
        cs[t].vectors = mode == FrameMode::Fixed ? shared_vectors
                                                 : Config(states[t].V * opts.scale_var);
    }

    if (mode == FrameMode::Dynamic) {
        for (size_t t = 0; t + 1 < T; ++t) {
            if (counts_of(cs[t].groups) != counts_of(cs[t + 1].groups))
                throw DataError("dynamic frame: states " + cs[t].level + " and " +
                                cs[t + 1].level + " have mismatched sample rows");
        }
    }

    std::vector<std::string> all_groups;
    for (const auto& c : cs) all_groups.insert(all_groups.end(), c.groups.begin(), c.groups.end());
    const auto legend = group_order_of(all_groups, group_levels);

    FrameSequence seq;
    seq.fps = opts.fps;
    for (const auto& c : cs) {
        seq.states_covered.push_back(c.level);
        seq.snapshots.push_back({c.level, c.points, c.groups});
    }

    int index = 0;
    auto emit = [&](Frame f) {
        f.index = index;
        f.clock = index / opts.fps;
        ++index;
        seq.frames.push_back(std::move(f));
    };

    for (size_t t = 0; t < T; ++t) {
        for (int p = 0; p < opts.pause_frames; ++p) {
            Frame f;
            f.phase = {PhaseKind::Pause, cs[t].level, cs[t].level, 0.0};
            f.sample_points = cs[t].points;
            f.groups = cs[t].groups;
            f.variable_vectors = cs[t].vectors;
            f.variable_names = states[t].variable_names;
            f.legend_groups = legend;
            f.hulls_enabled = opts.hulls;
            if (opts.hulls) f.hulls = hulls_of(f.sample_points, f.groups, group_levels);
            emit(std::move(f));
        }
        if (t + 1 == T) continue;
        const auto te = match_endpoints(cs[t], cs[t + 1], group_levels);
        for (int j = 1; j <= opts.transition_frames; ++j) {
            const double u = double(j) / double(opts.transition_frames);
            Frame f;
            f.phase = {PhaseKind::Transition, cs[t].level, cs[t + 1].level, u};
            f.sample_points = linear_ease(te.a, te.b, u);
            f.groups = te.groups;
            f.variable_vectors = mode == FrameMode::Fixed
                                     ? shared_vectors
                                     : Config(linear_ease(cs[t].vectors, cs[t + 1].vectors, u));
            f.variable_names = states[t].variable_names;
            f.legend_groups = legend;
            f.hulls_enabled = opts.hulls;
            if (opts.hulls) f.hulls = hulls_of(f.sample_points, f.groups, group_levels);
            emit(std::move(f));
        }
    }

    if (opts.shadow) return shadow_trails(seq, opts.shadow_decay);
    return seq;
}

Frame make_state_frame(const BiplotState& state, double scale_var, bool hulls,
                       const std::vector<std::string>& group_levels,
                       const std::vector<std::string>& legend_groups) {
    const auto order = canonical_row_order(state, group_levels);
    Frame f;
    f.phase = {PhaseKind::Pause, state.level, state.level, 0.0};
    f.sample_points.resize(state.Z.rows(), 2);
    f.groups.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
        f.sample_points.row(static_cast<Index>(i)) = state.Z.row(order[i]);
        f.groups[i] = state.group_of_row[static_cast<size_t>(order[i])];
    }
    f.variable_vectors = state.V * scale_var;
    f.variable_names = state.variable_names;
    f.legend_groups = legend_groups;
    f.hulls_enabled = hulls;
    if (hulls) f.hulls = hulls_of(f.sample_points, f.groups, group_levels);
    return f;
}

std::vector<std::string> legend_of(const std::vector<BiplotState>& states,
                                   const std::vector<std::string>& group_levels) {
    std::vector<std::string> all;
    for (const auto& s : states) all.insert(all.end(), s.group_of_row.begin(), s.group_of_row.end());
    return group_order_of(all, group_levels);
}

FrameSequence shadow_trails(const FrameSequence& seq, double decay) {
    if (!(decay > 0.0 && decay < 1.0))
        throw ConfigError("shadow decay must lie in (0, 1), got " + std::to_string(decay));
    for (const auto& f : seq.frames)
        if (f.hulls_enabled)
            throw ConfigError("shadow trails are available only when hulls are disabled");
    if (seq.snapshots.size() != seq.states_covered.size())
        throw DataError("shadow trails: sequence lacks per-state snapshots");

    std::unordered_map<std::string, size_t> level_index;
    for (size_t i = 0; i < seq.states_covered.size(); ++i)
        level_index[seq.states_covered[i]] = i;

    FrameSequence out = seq;
    for (auto& f : out.frames) {
        f.shadows.clear();
        const size_t from = level_index.at(f.phase.from);
        // during a pause at state s the trail covers states < s; during the
        // transition s -> s+1 it already includes s itself
        const size_t horizon = f.phase.kind == PhaseKind::Pause ? from : from + 1;
        for (size_t j = 0; j < horizon; ++j) {
            const double age = double(horizon - j);
            const double opacity = std::pow(decay, age);
            if (opacity < 0.02) continue;
            ShadowSet s;
            s.source_level = seq.snapshots[j].level;
            s.opacity = opacity;
            s.points = seq.snapshots[j].points;
            s.groups = seq.snapshots[j].groups;
            f.shadows.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace biplot
