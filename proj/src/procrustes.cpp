#include "biplot/procrustes.hpp"

#include <cmath>
#include <string>

#include "biplot/errors.hpp"

namespace biplot {

Config apply_transform(const SimilarityTransform& T, const Config& X) {
    Config out = T.s * (X * T.Q);
    out.rowwise() += T.t;
    return out;
}

SimilarityTransform orthogonal_procrustes(const Config& source, const Config& target,
                                          bool allow_scale) {
    if (source.rows() != target.rows())
        throw DataError("procrustes: source has " + std::to_string(source.rows()) +
                        " rows, target has " + std::to_string(target.rows()));
    if (source.rows() < 2)
        throw NumericError("procrustes: need at least 2 matched rows, got " +
                           std::to_string(source.rows()));

    const RowVector2 mu_s = source.colwise().mean();
    const RowVector2 mu_t = target.colwise().mean();
    const Config A = source.rowwise() - mu_s;
    const Config B = target.rowwise() - mu_t;

    const double ss_source = A.squaredNorm();
    if (ss_source <= 0.0)
        throw NumericError("procrustes: source configuration has zero variance");

    const Matrix2 M = A.transpose() * B;
    Eigen::JacobiSVD<Matrix2> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);

    SimilarityTransform T;
    T.Q = svd.matrixU() * svd.matrixV().transpose();
    if (allow_scale) {
        const double trace_sigma = svd.singularValues().sum();
        if (trace_sigma <= 0.0)
            throw NumericError("procrustes: configurations are uncorrelated, scale undefined");
        T.s = trace_sigma / ss_source;
    }
    T.t = mu_t - T.s * (mu_s * T.Q);
    return T;
}

double procrustes_residual(const Config& source, const Config& target, bool allow_scale) {
    const auto T = orthogonal_procrustes(source, target, allow_scale);
    return (apply_transform(T, source) - target).norm();
}

namespace {

double ensemble_rss(const std::vector<Config>& configs, const Config& consensus) {
    double rss = 0.0;
    for (const auto& c : configs) rss += (c - consensus).squaredNorm();
    return rss;
}

Config mean_config(const std::vector<Config>& configs) {
    Config g = Config::Zero(configs.front().rows(), 2);
    for (const auto& c : configs) g += c;
    return g / double(configs.size());
}

}  // namespace

GpaResult gpa_consensus(const std::vector<Config>& configs, const GpaOptions& opts) {
    const size_t k = configs.size();
    if (k < 2)
        throw DataError("gpa: need at least 2 configurations, got " + std::to_string(k));
    const Index m = configs.front().rows();
    for (size_t i = 1; i < k; ++i) {
        if (configs[i].rows() != m)
            throw DataError("gpa: configuration " + std::to_string(i + 1) + " has " +
                            std::to_string(configs[i].rows()) + " rows, expected " +
                            std::to_string(m));
    }
    if (m < 2) throw NumericError("gpa: configurations need at least 2 rows");

    GpaResult res;
    res.transforms.assign(k, SimilarityTransform{});
    res.aligned.reserve(k);

    std::vector<RowVector2> centroids(k);
    double total_ss = 0.0;
    for (size_t i = 0; i < k; ++i) {
        centroids[i] = configs[i].colwise().mean();
        Config c = configs[i].rowwise() - centroids[i];
        const double ss = c.squaredNorm();
        if (ss <= 0.0)
            throw NumericError("gpa: configuration " + std::to_string(i + 1) +
                               " has zero variance");
        total_ss += ss;
        res.aligned.push_back(std::move(c));
    }

    Config g = mean_config(res.aligned);
    double rss_prev = ensemble_rss(res.aligned, g);
    res.rss_history.push_back(rss_prev);

    for (int it = 1; it <= opts.max_iter; ++it) {
        // rotation step (reflections allowed), one exact fit per configuration
        for (size_t i = 0; i < k; ++i) {
            const Matrix2 M = res.aligned[i].transpose() * g;
            Eigen::JacobiSVD<Matrix2> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const Matrix2 Q = svd.matrixU() * svd.matrixV().transpose();
            res.aligned[i] = res.aligned[i] * Q;
            res.transforms[i].Q = res.transforms[i].Q * Q;
        }
        g = mean_config(res.aligned);

        // joint scaling step under Gower's constraint: the scales maximize the
        // consensus norm subject to preserving the ensemble's total sum of
        // squares (leading eigenvector of the normalized cross-product matrix)
        Matrix phi(k, k);
        for (size_t i = 0; i < k; ++i) {
            for (size_t j = i; j < k; ++j) {
                const double v = (res.aligned[i].array() * res.aligned[j].array()).sum();
                phi(static_cast<Index>(i), static_cast<Index>(j)) = v;
                phi(static_cast<Index>(j), static_cast<Index>(i)) = v;
            }
        }
        const Vector dinv_sqrt = phi.diagonal().array().sqrt().inverse();
        const Matrix corr = dinv_sqrt.asDiagonal() * phi * dinv_sqrt.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Matrix> eig(corr);
        Vector lead = eig.eigenvectors().col(static_cast<Index>(k) - 1);
        if (lead.sum() < 0.0) lead = -lead;

        bool scales_valid = true;
        Vector beta(static_cast<Index>(k));
        for (size_t i = 0; i < k; ++i) {
            beta(static_cast<Index>(i)) = std::sqrt(total_ss) * lead(static_cast<Index>(i)) *
                                          dinv_sqrt(static_cast<Index>(i));
            if (!(beta(static_cast<Index>(i)) > 0.0)) scales_valid = false;
        }
        if (scales_valid) {
            for (size_t i = 0; i < k; ++i) {
                res.aligned[i] *= beta(static_cast<Index>(i));
                res.transforms[i].s *= beta(static_cast<Index>(i));
            }
            g = mean_config(res.aligned);
        }

        const double rss = ensemble_rss(res.aligned, g);
        res.rss_history.push_back(rss);
        res.iterations = it;
        if (rss_prev - rss < opts.tol) {
            rss_prev = rss;
            res.converged = true;
            break;
        }
        rss_prev = rss;
        res.converged = false;
    }

    res.consensus = g;
    res.final_rss = rss_prev;
    for (size_t i = 0; i < k; ++i) {
        auto& T = res.transforms[i];
        T.t = -T.s * (centroids[i] * T.Q);
    }
    return res;
}

}  // namespace biplot
