#include "nnls.hpp"

#include <vector>

namespace horoforge::geometry::detail {

namespace {

Eigen::VectorXd solve_on_support(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
    std::vector<Eigen::Index> columns;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (passive[static_cast<std::size_t>(j)]) columns.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) {
        sub.col(static_cast<Eigen::Index>(k)) = a.col(columns[k]);
    }
    const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(a.cols());
    for (std::size_t k = 0; k < columns.size(); ++k) {
        full(columns[k]) = z(static_cast<Eigen::Index>(k));
    }
    return full;
}

} // namespace

NnlsResult solve_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_outer) {
    const Eigen::Index n = a.cols();
    if (max_outer <= 0) max_outer = static_cast<int>(3 * n);
    const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff()) *
                       static_cast<double>(std::max(a.rows(), n));

    NnlsResult result;
    result.x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);

    for (int outer = 0; outer < max_outer; ++outer) {
        const Eigen::VectorXd gradient = a.transpose() * (b - a * result.x);
        Eigen::Index best = -1;
        double best_value = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && gradient(j) > best_value) {
                best_value = gradient(j);
                best = j;
            }
        }
        if (best < 0) {
            result.converged = true;
            break;
        }
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < 3 * n; ++inner) {
            const Eigen::VectorXd candidate = solve_on_support(a, b, passive);
            bool feasible = true;
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && candidate(j) <= 0.0) {
                    feasible = false;
                    const double denom = result.x(j) - candidate(j);
                    if (denom > 0.0) alpha = std::min(alpha, result.x(j) / denom);
                }
            }
            if (feasible) {
                result.x = candidate;
                break;
            }
            result.x += alpha * (candidate - result.x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && result.x(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    result.x(j) = 0.0;
                }
            }
        }
    }
    result.residual_norm = (a * result.x - b).norm();
    return result;
}

} // namespace horoforge::geometry::detail
