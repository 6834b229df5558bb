#include "peelkit/enclosing_ball.hpp"

#include <numeric>
#include <stdexcept>

#include "peelkit/rng.hpp"

namespace peelkit {
namespace {

// Ball through all boundary points, minimal radius: center constrained to
// the affine hull of the set.
Ball ball_of_boundary(const std::vector<Vec>& bnd) {
    Ball b;
    if (bnd.empty()) {
        b.radius = -1.0; // sentinel: contains nothing
        return b;
    }
    const int d = static_cast<int>(bnd[0].size());
    if (d == 0 || bnd.size() == 1) {
        b.center = bnd[0];
        b.radius = 0.0;
        return b;
    }
    const std::size_t m = bnd.size() - 1;
    Mat A(m, m);
    Vec rhs(m);
    Mat edges(d, m);
    for (std::size_t i = 0; i < m; ++i) edges.col(static_cast<int>(i)) = bnd[i + 1] - bnd[0];
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            A(static_cast<int>(i), static_cast<int>(j)) =
                2.0 * edges.col(static_cast<int>(i)).dot(edges.col(static_cast<int>(j)));
        rhs[static_cast<int>(i)] = edges.col(static_cast<int>(i)).squaredNorm();
    }
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) {
        // Affinely dependent boundary; drop the most recent point.
        std::vector<Vec> reduced(bnd.begin(), bnd.end() - 1);
        return ball_of_boundary(reduced);
    }
    Vec lambda = lu.solve(rhs);
    b.center = bnd[0] + edges * lambda;
    b.radius = 0.0;
    for (const Vec& p : bnd) b.radius = std::max(b.radius, (p - b.center).norm());
    return b;
}

struct WelzlState {
    std::vector<Vec> pts; // mutable order (move-to-front)
    double eps;
    std::vector<Vec> boundary;
    std::vector<const Vec*> boundary_src;
    int d;

    Ball mtf(std::size_t n) {
        Ball ball = ball_of_boundary(boundary);
        if (static_cast<int>(boundary.size()) == d + 1) return ball;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec& p = pts[i];
            if (ball.radius < 0.0 || (p - ball.center).norm() > ball.radius + eps) {
                boundary.push_back(p);
                ball = mtf(i);
                boundary.pop_back();
                // move-to-front
                Vec tmp = pts[i];
                for (std::size_t j = i; j > 0; --j) pts[j] = pts[j - 1];
                pts[0] = std::move(tmp);
            }
        }
        return ball;
    }
};

} // namespace

Ball circumball(std::span<const Vec> points) {
    std::vector<Vec> b(points.begin(), points.end());
    if (b.empty()) throw std::invalid_argument("circumball: empty input");
    return ball_of_boundary(b);
}

SupportBall min_enclosing_ball_support(std::span<const Vec> points, double tol) {
    if (points.empty()) throw std::invalid_argument("min_enclosing_ball: empty input");
    const int d = static_cast<int>(points[0].size());
    for (const Vec& p : points) {
        if (static_cast<int>(p.size()) != d)
            throw std::invalid_argument("min_enclosing_ball: inconsistent dimensions");
        if (!finite(p)) throw std::invalid_argument("min_enclosing_ball: non-finite point");
    }
    SupportBall out;
    if (d == 0) {
        out.ball.center = Vec(0);
        out.ball.radius = tol;
        out.support = {0};
        return out;
    }
    double scale = 1.0;
    for (const Vec& p : points) scale = std::max(scale, 1.0 + p.cwiseAbs().maxCoeff());

    WelzlState st;
    st.d = d;
    st.eps = tol * scale;
    st.pts.assign(points.begin(), points.end());
    // Deterministic shuffle guards against adversarial input order.
    Rng rng(0x5EED5EEDull ^ static_cast<std::uint64_t>(points.size()));
    for (std::size_t i = st.pts.size(); i > 1; --i)
        std::swap(st.pts[i - 1], st.pts[rng.below(i)]);
    Ball ball = st.mtf(st.pts.size());

    // Support set: input points on the boundary, thinned to at most d+1
    // affinely independent witnesses.
    std::vector<int> on;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (std::abs((points[i] - ball.center).norm() - ball.radius) <= st.eps * 4.0)
            on.push_back(static_cast<int>(i));
    }
    std::vector<int> support;
    std::vector<Vec> kept;
    for (int i : on) {
        if (static_cast<int>(support.size()) == d + 1) break;
        std::vector<Vec> trial = kept;
        trial.push_back(points[static_cast<std::size_t>(i)]);
        std::vector<Vec> diffs;
        for (std::size_t j = 1; j < trial.size(); ++j) diffs.push_back(trial[j] - trial[0]);
        if (diffs.empty() || span_rank(diffs, tol * scale) == static_cast<int>(diffs.size())) {
            support.push_back(i);
            kept = std::move(trial);
        }
    }
    out.ball = ball;
    out.ball.radius += tol;
    out.support = std::move(support);
    return out;
}

Ball min_enclosing_ball(std::span<const Vec> points, double tol) {
    return min_enclosing_ball_support(points, tol).ball;
}

} // namespace peelkit
