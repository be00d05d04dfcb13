#pragma once

#include <vector>

#include "biplot/types.hpp"

namespace biplot {

/// Admissible similarity map x -> s * x * Q + t for row vectors x. Q is
/// orthogonal with det +/-1 (reflections permitted), s > 0.
struct SimilarityTransform {
    Matrix2 Q = Matrix2::Identity();
    double s = 1.0;
    RowVector2 t = RowVector2::Zero();
};

/// Apply the transform to every row of a configuration.
Config apply_transform(const SimilarityTransform& T, const Config& X);

/// Least-squares fit of `source` onto `target`: minimizes
/// || s * (source - mean) * Q + mean(target) - target ||_F over orthogonal Q
/// (reflections allowed), with s = 1 when `allow_scale` is false. Solved via
/// the SVD of centered_source' * centered_target.
SimilarityTransform orthogonal_procrustes(const Config& source, const Config& target,
                                          bool allow_scale);

/// Residual of the fitted source against the target.
double procrustes_residual(const Config& source, const Config& target, bool allow_scale);

struct GpaOptions {
    double tol = 1e-10;  // stop when the RSS decrease falls below this
    int max_iter = 100;
};

/// Generalized Procrustes alignment of raw configurations.
struct GpaResult {
    std::vector<Config> aligned;  // centered, transformed copies
    std::vector<SimilarityTransform> transforms;
    Config consensus;  // mean of the aligned configurations
    int iterations = 0;
    double final_rss = 0.0;
    bool converged = true;
    std::vector<double> rss_history;  // RSS after each iteration (monotonicity witness)
};

/// Gower-style iteration: center all, initialize the consensus as the mean,
/// then alternate per-configuration rotation (reflections allowed), a joint
/// scaling step constrained to preserve the ensemble's total sum of squares,
/// and the consensus update, until the RSS decrease drops below tol.
GpaResult gpa_consensus(const std::vector<Config>& configs, const GpaOptions& opts = {});

}  // namespace biplot
