#ifndef PEELKIT_GEOMETRY_HPP
#define PEELKIT_GEOMETRY_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace peelkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-9;

/// Closed halfspace { x : normal . x <= offset }, with unit normal.
struct Halfspace {
    Vec normal;
    double offset = 0.0;

    double residual(const Vec& x) const { return normal.dot(x) - offset; }
    Halfspace flipped() const { return {-normal, -offset}; }
};

/// Hyperplane { x : normal . x = offset }, with unit normal.
struct Hyperplane {
    Vec normal;
    double offset = 0.0;

    double residual(const Vec& x) const { return normal.dot(x) - offset; }
    Halfspace lower() const { return {normal, offset}; }   // normal.x <= offset
    Halfspace upper() const { return {-normal, -offset}; } // normal.x >= offset
};

struct Ball {
    Vec center;
    double radius = 0.0;
};

/// Affine subspace base + span(basis), with orthonormal basis columns.
/// Maps between hull coordinates (R^k) and ambient coordinates (R^d).
class AffineHull {
public:
    AffineHull() = default;
    AffineHull(Vec base, Mat basis) : base_(std::move(base)), basis_(std::move(basis)) {}

    static AffineHull full(int d) {
        return AffineHull(Vec::Zero(d), Mat::Identity(d, d));
    }

    int ambient_dim() const { return static_cast<int>(base_.size()); }
    int dim() const { return static_cast<int>(basis_.cols()); }

    const Vec& base() const { return base_; }
    const Mat& basis() const { return basis_; }

    Vec embed(const Vec& y) const { return base_ + basis_ * y; }
    Vec project(const Vec& x) const { return basis_.transpose() * (x - base_); }

    /// Ambient distance from x to the hull.
    double distance(const Vec& x) const {
        return (x - embed(project(x))).norm();
    }

    bool is_identity() const;

    /// Same affine subspace as `other`, up to tolerance.
    bool same_subspace(const AffineHull& other, double tol) const;

private:
    Vec base_;
    Mat basis_; // d x k, orthonormal columns
};

/// Orthonormal hull of a point set; dimension = rank of the centered set.
/// Throws std::invalid_argument on empty input or inconsistent dimensions.
AffineHull affine_hull(std::span<const Vec> points, double tol = kDefaultTol);

/// Rank of the span of `vectors` with threshold `tol` (relative to the
/// largest norm present).
int span_rank(std::span<const Vec> vectors, double tol);

inline bool finite(const Vec& v) { return v.allFinite(); }

} // namespace peelkit

#endif
