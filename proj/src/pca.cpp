#include "biplot/pca.hpp"

#include <cmath>
#include <limits>

#include "biplot/errors.hpp"

namespace biplot {

std::pair<Matrix, StandardizationStats> standardize(const Matrix& X, bool scaled,
                                                    const std::vector<std::string>& names) {
    const Index n = X.rows();
    const Index p = X.cols();
    if (n < 2) throw NumericError("standardize: need at least 2 rows, got " + std::to_string(n));

    StandardizationStats stats;
    stats.scaled = scaled;
    stats.means = X.colwise().mean();
    Matrix out = X.rowwise() - stats.means.transpose();
    stats.scales = Vector::Ones(p);
    if (scaled) {
        for (Index j = 0; j < p; ++j) {
            const double sd = std::sqrt(out.col(j).squaredNorm() / double(n - 1));
            if (sd <= 0.0) {
                const std::string name =
                    j < static_cast<Index>(names.size()) ? names[j] : std::to_string(j + 1);
                throw NumericError("standardize: column \"" + name +
                                   "\" has zero variance and cannot be scaled");
            }
            stats.scales(j) = sd;
            out.col(j) /= sd;
        }
    }
    return {std::move(out), std::move(stats)};
}

void apply_sign_convention(Config& Z, Config& V) {
    for (Index k = 0; k < 2; ++k) {
        Index lead = 0;
        double best = -1.0;
        for (Index j = 0; j < V.rows(); ++j) {
            const double a = std::abs(V(j, k));
            if (a > best) {  // strict: ties keep the lowest index
                best = a;
                lead = j;
            }
        }
        if (V(lead, k) < 0.0) {
            V.col(k) = -V.col(k);
            Z.col(k) = -Z.col(k);
        }
    }
}

BiplotState pca_biplot_of_standardized(const Matrix& Xstd, const std::string& level) {
    const Index n = Xstd.rows();
    const Index p = Xstd.cols();
    if (n < 3) throw NumericError("pca: need at least 3 rows, got " + std::to_string(n));
    if (p < 2) throw NumericError("pca: need at least 2 variables, got " + std::to_string(p));

    Eigen::JacobiSVD<Matrix> svd(Xstd, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& d = svd.singularValues();

    const double rank_tol =
        std::max(n, p) * std::numeric_limits<double>::epsilon() * std::max(d(0), 0.0);
    if (d.size() < 2 || !(d(1) > rank_tol))
        throw NumericError("pca: rank < 2 after centering");

    BiplotState st;
    st.level = level;
    st.Z = svd.matrixU().leftCols<2>() * d.head<2>().asDiagonal();
    st.V = svd.matrixV().leftCols<2>();
    const double total = d.squaredNorm();
    st.explained_variance = Vector2(d(0) * d(0) / total, d(1) * d(1) / total);
    apply_sign_convention(st.Z, st.V);
    return st;
}

BiplotState pca_biplot(const Matrix& X, bool scaled, const std::string& level) {
    auto [Xstd, stats] = standardize(X, scaled);
    return pca_biplot_of_standardized(Xstd, level);
}

std::vector<BiplotState> project_slices(const BiplotState& global, const Dataset& d,
                                        const std::vector<TimeSlice>& slices) {
    std::vector<BiplotState> out;
    out.reserve(slices.size());
    for (const auto& slice : slices) {
        BiplotState st;
        st.level = slice.level;
        st.V = global.V;
        st.variable_names = global.variable_names;
        st.explained_variance = global.explained_variance;
        st.Z.resize(slice.count(), 2);
        st.group_of_row.reserve(slice.row_indices.size());
        for (Index i = 0; i < slice.count(); ++i) {
            const Index r = slice.row_indices[static_cast<size_t>(i)];
            if (r < 0 || r >= global.Z.rows())
                throw DataError("project_slices: row index " + std::to_string(r) +
                                " outside the global configuration");
            st.Z.row(i) = global.Z.row(r);
            st.group_of_row.push_back(d.group_labels[static_cast<size_t>(r)]);
        }
        out.push_back(std::move(st));
    }
    return out;
}

std::vector<BiplotState> per_slice_pca(const Dataset& d,
                                       const std::vector<TimeSlice>& slices, bool scaled,
                                       SliceStandardization mode) {
    Matrix pre;
    if (mode == SliceStandardization::Global) {
        pre = standardize(d.numeric_block, scaled, d.variable_names).first;
    }

    std::vector<BiplotState> out;
    out.reserve(slices.size());
    for (const auto& slice : slices) {
        if (slice.count() < 3)
            throw NumericError("per-slice PCA needs at least 3 rows per slice; level \"" +
                               slice.level + "\" has " + std::to_string(slice.count()));
        Matrix block(slice.count(), d.p());
        for (Index i = 0; i < slice.count(); ++i)
            block.row(i) = (mode == SliceStandardization::Global ? pre : d.numeric_block)
                               .row(slice.row_indices[static_cast<size_t>(i)]);

        BiplotState st;
        try {
            if (mode == SliceStandardization::Global) {
                st = pca_biplot_of_standardized(block, slice.level);
            } else {
                auto [Xstd, stats] = standardize(block, scaled, d.variable_names);
                st = pca_biplot_of_standardized(Xstd, slice.level);
            }
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " (level \"" + slice.level + "\")");
        }
        st.variable_names = d.variable_names;
        st.group_of_row.reserve(slice.row_indices.size());
        for (Index r : slice.row_indices)
            st.group_of_row.push_back(d.group_labels[static_cast<size_t>(r)]);
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace biplot
