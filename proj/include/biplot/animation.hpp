#pragma once

#include <string>
#include <vector>

#include "biplot/hull.hpp"
#include "biplot/pca.hpp"
#include "biplot/types.hpp"

namespace biplot {

/// Linear easing: (1-u)*a + u*b elementwise, exact at the endpoints.
template <typename DerivedA, typename DerivedB>
auto linear_ease(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                 double u) {
    return ((1.0 - u) * a + u * b).eval();
}

enum class PhaseKind { Pause, Transition };

struct Phase {
    PhaseKind kind = PhaseKind::Pause;
    std::string from;
    std::string to;
    double u = 0.0;  // transition progress, strictly increasing within one transition
};

struct GroupHull {
    std::string group;
    bool passthrough = false;  // renderer draws the group's points instead
    Config vertices;
};

struct ShadowSet {
    std::string source_level;
    double opacity = 0.0;  // in (0, 1)
    Config points;
    std::vector<std::string> groups;
};

struct Frame {
    int index = 0;
    double clock = 0.0;  // seconds, index / fps
    Phase phase;
    Config sample_points;                     // canonical (group, ordinal) row order
    std::vector<std::string> groups;          // per sample row
    Config variable_vectors;                  // p x 2, scale_var already applied
    std::vector<std::string> variable_names;  // length p
    std::vector<std::string> legend_groups;   // each data group exactly once
    bool hulls_enabled = false;
    std::vector<GroupHull> hulls;
    std::vector<ShadowSet> shadows;
};

/// Per-state snapshot kept for shadow construction (not serialized).
struct StateSnapshot {
    std::string level;
    Config points;
    std::vector<std::string> groups;
};

struct FrameSequence {
    std::vector<Frame> frames;
    double fps = 20.0;
    std::vector<std::string> states_covered;  // levels, in order
    std::vector<StateSnapshot> snapshots;
};

enum class FrameMode { Fixed, Dynamic };

struct TimelineOptions {
    int pause_frames = 10;       // P >= 1
    int transition_frames = 30;  // F >= 0
    double fps = 20.0;
    double scale_var = 1.0;
    bool hulls = false;
    bool shadow = false;
    double shadow_decay = 0.6;
};

/// Frame timeline [P pauses at state 1, F transitions 1->2, P pauses at
/// state 2, ...]: T*P + (T-1)*F frames. Fixed mode keeps the variable vectors
/// bitwise constant; dynamic mode interpolates them with the same easing as
/// the samples. Transition rows are matched by (group, ordinal); in fixed
/// mode groups whose counts differ between endpoint states are index-cycled
/// to the larger count. Shadows (when enabled) require hulls disabled.
FrameSequence build_timeline(const std::vector<BiplotState>& states, FrameMode mode,
                             const TimelineOptions& opts,
                             const std::vector<std::string>& group_levels);

/// Add faded traces of prior states to every frame: opacity decay^age,
/// dropped below 0.02. Requires a timeline built without hulls.
FrameSequence shadow_trails(const FrameSequence& seq, double decay);

/// A single state's pause-equivalent frame (facet panels, previews).
Frame make_state_frame(const BiplotState& state, double scale_var, bool hulls,
                       const std::vector<std::string>& group_levels,
                       const std::vector<std::string>& legend_groups);

/// Every group seen in the states, each once, in group-level order.
std::vector<std::string> legend_of(const std::vector<BiplotState>& states,
                                   const std::vector<std::string>& group_levels);

}  // namespace biplot
