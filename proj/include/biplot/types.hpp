#pragma once

#include <Eigen/Dense>

namespace biplot {

using Matrix = Eigen::MatrixXd;
using Config = Eigen::Matrix<double, Eigen::Dynamic, 2>;  // m x 2 planar configuration
using Vector = Eigen::VectorXd;
using Vector2 = Eigen::Vector2d;
using RowVector2 = Eigen::RowVector2d;
using Matrix2 = Eigen::Matrix2d;
using Index = Eigen::Index;

}  // namespace biplot
