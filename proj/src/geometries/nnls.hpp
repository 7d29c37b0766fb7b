#pragma once

#include <Eigen/Dense>

namespace horoforge::geometry::detail {

struct NnlsResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    bool converged = false;
};

// Lawson-Hanson active set: min ||A x - b|| subject to x >= 0.
NnlsResult solve_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_outer = 0);

} // namespace horoforge::geometry::detail
