#pragma once

#include <string>
#include <vector>

#include "biplot/dataset.hpp"
#include "biplot/types.hpp"

namespace biplot {

/// One time slice's 2-D biplot configuration: samples in principal
/// coordinates (rows of UD), variables in standard coordinates (rows of V).
struct BiplotState {
    std::string level;
    Config Z;                                 // n_t x 2 sample coordinates
    Config V;                                 // p x 2 variable coordinates
    std::vector<std::string> variable_names;  // length p
    std::vector<std::string> group_of_row;    // length n_t
    Vector2 explained_variance;               // top-2 fractions, non-increasing
};

struct StandardizationStats {
    Vector means;   // length p
    Vector scales;  // length p, strictly positive when scaled
    bool scaled = false;
};

/// Center columns; divide by the sample standard deviation (n-1 denominator)
/// when `scaled`. A zero-variance column under scaling is an error naming the
/// column (names taken from `names` when provided).
std::pair<Matrix, StandardizationStats> standardize(
    const Matrix& X, bool scaled, const std::vector<std::string>& names = {});

/// 2-D PCA biplot of X via SVD of the standardized matrix. Requires n >= 3,
/// p >= 2, and centered rank >= 2. A deterministic sign convention is applied:
/// each retained component is flipped so the largest-|entry| of its V column
/// is positive, ties broken by lowest variable index.
BiplotState pca_biplot(const Matrix& X, bool scaled, const std::string& level);

/// SVD step on an already-standardized matrix (used by the global
/// standardization path, where slices must not be re-centered).
BiplotState pca_biplot_of_standardized(const Matrix& Xstd, const std::string& level);

/// Flip signs of Z/V columns per the deterministic convention (idempotent).
void apply_sign_convention(Config& Z, Config& V);

/// Fixed variable frame: slice the global state's sample scores; every output
/// shares the global V unchanged.
std::vector<BiplotState> project_slices(const BiplotState& global, const Dataset& d,
                                        const std::vector<TimeSlice>& slices);

enum class SliceStandardization {
    WithinSlice,  // center (and optionally scale) inside each slice
    Global,       // standardize once on the full dataset, no per-slice re-centering
};

/// Dynamic frame: one independent PCA per slice. Each slice needs n_t >= 3
/// and standardized rank >= 2; violations are errors naming the level.
std::vector<BiplotState> per_slice_pca(
    const Dataset& d, const std::vector<TimeSlice>& slices, bool scaled,
    SliceStandardization mode = SliceStandardization::WithinSlice);

}  // namespace biplot
