#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biplot/pca.hpp"
#include "biplot/procrustes.hpp"
#include "biplot/types.hpp"

namespace biplot {

enum class ReflectAxis { X, Y, XY };

/// Parse "x" | "y" | "xy"; anything else is an argument error.
ReflectAxis parse_reflect_axis(const std::string& token);

/// Mirror a state's Z and V: axis x negates the second coordinate, axis y the
/// first, xy both. Labels and explained variance are untouched.
BiplotState apply_reflection(const BiplotState& state, ReflectAxis axis);

/// Reflect the states at the named levels; all other states pass through
/// unchanged. Unknown levels are errors listing the valid levels.
std::vector<BiplotState> reflect_at_levels(const std::vector<BiplotState>& states,
                                           const std::vector<std::string>& align_time,
                                           ReflectAxis axis);

enum class AlignOn { Samples, Variables };

struct AlignOptions {
    AlignOn align_on = AlignOn::Samples;
    double gpa_tol = 1e-10;
    int gpa_max_iter = 100;
};

/// Series alignment outcome. `consensus` is the target configuration the
/// evaluation module compares against: the GPA consensus when no target was
/// supplied, the fixed target configuration otherwise. `aligned_configs`
/// holds the per-level aligned configurations in the same (canonical) row
/// order as the consensus.
struct AlignmentResult {
    std::vector<BiplotState> aligned_states;
    std::vector<SimilarityTransform> transforms;
    std::vector<Config> aligned_configs;
    Config consensus;
    bool target_supplied = false;
    int iterations = 0;
    double final_rss = 0.0;
    bool converged = true;
    std::vector<double> rss_history;
};

/// Permutation that sorts a state's rows by (group level order, within-group
/// appearance); the canonical correspondence used to match rows across
/// balanced slices. `group_levels` fixes the group order (first-appearance
/// order of the dataset); groups not listed sort after listed ones by name.
std::vector<Index> canonical_row_order(const BiplotState& state,
                                       const std::vector<std::string>& group_levels);

/// Align every state's configuration: to the GPA consensus when `target` is
/// absent, else one-pass orthogonal Procrustes onto the fixed target (the
/// target never moves). The recovered Q and s apply to both Z and V; the
/// translation applies to Z only.
AlignmentResult align_series(const std::vector<BiplotState>& states,
                             const std::optional<BiplotState>& target,
                             const std::vector<std::string>& group_levels,
                             const AlignOptions& opts = {});

}  // namespace biplot
