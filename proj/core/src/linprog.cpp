#include "peelkit/linprog.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace peelkit {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Tableau simplex on: min z = c.y subject to T y = rhs, y >= 0, rhs >= 0,
// starting from the given basis. Bland's rule, so it cannot cycle.
// Returns false when unbounded.
bool run_simplex(MatrixXd& T, VectorXd& rhs, VectorXd& obj, double& z,
                 std::vector<int>& basis, double eps) {
    const int m = static_cast<int>(T.rows());
    const int n = static_cast<int>(T.cols());
    for (long iter = 0; iter < 50000L * (m + n); ++iter) {
        int enter = -1;
        for (int j = 0; j < n; ++j) {
            if (obj[j] < -eps) { enter = j; break; }
        }
        if (enter < 0) return true; // optimal
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (T(i, enter) > eps) {
                const double ratio = rhs[i] / T(i, enter);
                if (ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps && (leave < 0 || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return false; // unbounded
        const double piv = T(leave, enter);
        T.row(leave) /= piv;
        rhs[leave] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double f = T(i, enter);
            if (f != 0.0) {
                T.row(i) -= f * T.row(leave);
                rhs[i] -= f * rhs[leave];
            }
        }
        const double f = obj[enter];
        if (f != 0.0) {
            obj -= f * T.row(leave).transpose();
            z -= f * rhs[leave];
        }
        basis[leave] = enter;
    }
    throw std::runtime_error("lp_maximize: simplex iteration limit exceeded");
}

} // namespace

LpResult lp_maximize(const MatrixXd& A, const VectorXd& b, const VectorXd& c, double eps) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    // Free x split as x = u - v; slack s (sign-flipped rows get artificials).
    // Columns: [u(n) | v(n) | s(m) | artificials].
    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (b[i] < 0) ++n_art;
    const int cols = 2 * n + m + n_art;
    MatrixXd T = MatrixXd::Zero(m, cols);
    VectorXd rhs(m);
    std::vector<int> basis(static_cast<std::size_t>(m));
    int art = 0;
    for (int i = 0; i < m; ++i) {
        const double sgn = (b[i] < 0) ? -1.0 : 1.0;
        T.block(i, 0, 1, n) = sgn * A.row(i);
        T.block(i, n, 1, n) = -sgn * A.row(i);
        T(i, 2 * n + i) = sgn;
        rhs[i] = sgn * b[i];
        if (b[i] < 0) {
            T(i, 2 * n + m + art) = 1.0;
            basis[static_cast<std::size_t>(i)] = 2 * n + m + art;
            ++art;
        } else {
            basis[static_cast<std::size_t>(i)] = 2 * n + i;
        }
    }

    LpResult res;
    if (n_art > 0) {
        // Phase 1: minimize the artificial sum.
        VectorXd obj = VectorXd::Zero(cols);
        for (int j = 2 * n + m; j < cols; ++j) obj[j] = 1.0;
        double z = 0.0;
        for (int i = 0; i < m; ++i) {
            if (basis[static_cast<std::size_t>(i)] >= 2 * n + m) {
                obj -= T.row(i).transpose();
                z -= rhs[i];
            }
        }
        if (!run_simplex(T, rhs, obj, z, basis, eps))
            throw std::runtime_error("lp_maximize: phase-1 unbounded");
        if (z < -1e-7) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        // Pivot remaining artificials out of the basis where possible.
        for (int i = 0; i < m; ++i) {
            if (basis[static_cast<std::size_t>(i)] >= 2 * n + m) {
                int enter = -1;
                for (int j = 0; j < 2 * n + m; ++j) {
                    if (std::abs(T(i, j)) > eps) { enter = j; break; }
                }
                if (enter < 0) continue; // redundant row
                const double piv = T(i, enter);
                T.row(i) /= piv;
                rhs[i] /= piv;
                for (int r = 0; r < m; ++r) {
                    if (r == i) continue;
                    const double f = T(r, enter);
                    if (f != 0.0) {
                        T.row(r) -= f * T.row(i);
                        rhs[r] -= f * rhs[i];
                    }
                }
                basis[static_cast<std::size_t>(i)] = enter;
            }
        }
    }

    // Phase 2 on the original objective (min -c.x form).
    VectorXd obj = VectorXd::Zero(cols);
    obj.head(n) = -c;
    obj.segment(n, n) = c;
    for (int j = 2 * n + m; j < cols; ++j) obj[j] = 1e30; // keep artificials out
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        const int bi = basis[static_cast<std::size_t>(i)];
        const double f = obj[bi];
        if (f != 0.0) {
            obj -= f * T.row(i).transpose();
            z -= f * rhs[i];
        }
    }
    if (!run_simplex(T, rhs, obj, z, basis, eps)) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    VectorXd y = VectorXd::Zero(cols);
    for (int i = 0; i < m; ++i) y[basis[static_cast<std::size_t>(i)]] = rhs[i];
    res.status = LpStatus::Optimal;
    res.x = y.head(n) - y.segment(n, n);
    res.value = c.dot(res.x);
    return res;
}

bool lp_feasible(const MatrixXd& A, const VectorXd& b, double eps) {
    LpResult r = lp_maximize(A, b, VectorXd::Zero(A.cols()), eps);
    return r.status == LpStatus::Optimal;
}

} // namespace peelkit
