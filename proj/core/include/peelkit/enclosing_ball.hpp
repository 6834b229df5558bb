#ifndef PEELKIT_ENCLOSING_BALL_HPP
#define PEELKIT_ENCLOSING_BALL_HPP

#include <span>
#include <vector>

#include "peelkit/geometry.hpp"

namespace peelkit {

struct SupportBall {
    Ball ball;
    std::vector<int> support; // indices into the input set, size <= d+1
};

/// Smallest enclosing ball, move-to-front Welzl recursion over support sets
/// of size <= d+1. The returned radius is inflated by `tol` so that
/// "bounded by a ball of radius r" certifications stay conservative.
SupportBall min_enclosing_ball_support(std::span<const Vec> points, double tol = kDefaultTol);

Ball min_enclosing_ball(std::span<const Vec> points, double tol = kDefaultTol);

/// Circumscribed ball of an affinely independent set (used by the recursion
/// and exposed for tests). Throws on degenerate input.
Ball circumball(std::span<const Vec> points);

} // namespace peelkit

#endif
