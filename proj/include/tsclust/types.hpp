#pragma once

#include <Eigen/Core>

namespace tsclust {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntVector = Eigen::VectorXi;

// Stack-allocated small matrices for the lag-design moment solves.
// Order selection is capped at kMaxLagOrder lags plus an intercept.
inline constexpr int kMaxLagOrder = 24;
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLagOrder + 1, kMaxLagOrder + 1>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxLagOrder + 1, 1>;

}  // namespace tsclust
