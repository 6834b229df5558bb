#include "peelkit/geometry.hpp"

#include <stdexcept>

namespace peelkit {

bool AffineHull::is_identity() const {
    if (dim() != ambient_dim()) return false;
    return base_.isZero(0.0) && basis_.isIdentity(0.0);
}

bool AffineHull::same_subspace(const AffineHull& other, double tol) const {
    if (ambient_dim() != other.ambient_dim() || dim() != other.dim()) return false;
    const double scale = 1.0 + base_.cwiseAbs().maxCoeff();
    if (other.distance(base_) > tol * scale) return false;
    // Each basis vector of one hull must lie in the span of the other.
    for (int j = 0; j < dim(); ++j) {
        Vec b = basis_.col(j);
        Vec r = b - other.basis() * (other.basis().transpose() * b);
        if (r.norm() > tol * 10.0) return false;
    }
    return true;
}

int span_rank(std::span<const Vec> vectors, double tol) {
    if (vectors.empty()) return 0;
    const int d = static_cast<int>(vectors[0].size());
    Mat m(d, static_cast<int>(vectors.size()));
    double scale = 0.0;
    for (int j = 0; j < m.cols(); ++j) {
        m.col(j) = vectors[static_cast<std::size_t>(j)];
        scale = std::max(scale, m.col(j).norm());
    }
    if (scale == 0.0) return 0;
    Eigen::ColPivHouseholderQR<Mat> qr(m);
    qr.setThreshold(std::max(tol, 1e-13) * 100.0);
    return static_cast<int>(qr.rank());
}

AffineHull affine_hull(std::span<const Vec> points, double tol) {
    if (points.empty()) throw std::invalid_argument("affine_hull: empty point set");
    const int d = static_cast<int>(points[0].size());
    if (d < 1) throw std::invalid_argument("affine_hull: zero-dimensional points");
    double scale = 0.0;
    for (const Vec& p : points) {
        if (static_cast<int>(p.size()) != d)
            throw std::invalid_argument("affine_hull: inconsistent point dimensions");
        if (!finite(p)) throw std::invalid_argument("affine_hull: non-finite coordinate");
        scale = std::max(scale, p.cwiseAbs().maxCoeff());
    }
    const Vec& base = points[0];
    const double thresh = std::max(tol, 1e-13) * (1.0 + scale) * 10.0;

    // Greedy pivoted Gram-Schmidt on the centered set.
    std::vector<Vec> cols;
    std::vector<Vec> residuals;
    residuals.reserve(points.size());
    for (const Vec& p : points) residuals.push_back(p - base);
    while (static_cast<int>(cols.size()) < d) {
        int best = -1;
        double best_norm = thresh;
        for (std::size_t i = 0; i < residuals.size(); ++i) {
            const double n = residuals[i].norm();
            if (n > best_norm) {
                best_norm = n;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) break;
        Vec q = residuals[static_cast<std::size_t>(best)] / best_norm;
        cols.push_back(q);
        for (Vec& r : residuals) r -= q * q.dot(r);
    }
    Mat basis(d, static_cast<int>(cols.size()));
    for (int j = 0; j < basis.cols(); ++j) basis.col(j) = cols[static_cast<std::size_t>(j)];
    // One re-orthogonalization pass keeps the basis orthonormal to ~1e-15.
    if (basis.cols() > 0) {
        Eigen::HouseholderQR<Mat> qr(basis);
        Mat q = qr.householderQ() * Mat::Identity(d, basis.cols());
        // Align signs with the Gram-Schmidt result for determinism.
        for (int j = 0; j < q.cols(); ++j)
            if (q.col(j).dot(basis.col(j)) < 0) q.col(j) = -q.col(j);
        basis = q;
    }
    return AffineHull(base, std::move(basis));
}

} // namespace peelkit
