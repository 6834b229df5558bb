#ifndef PEELKIT_LINPROG_HPP
#define PEELKIT_LINPROG_HPP

#include <Eigen/Dense>

namespace peelkit {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Eigen::VectorXd x;
};

/// max c.x subject to A x <= b, x free. Dense two-phase simplex with
/// Bland's rule; intended for the small systems this library produces.
LpResult lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c, double eps = 1e-10);

/// Feasibility of A x <= b.
bool lp_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double eps = 1e-10);

} // namespace peelkit

#endif
