#ifndef PEELKIT_SPHERE_NET_HPP
#define PEELKIT_SPHERE_NET_HPP

#include <vector>

#include "peelkit/polytope.hpp"

namespace peelkit {

/// Covering net: every unit vector lies within angle `theta` of some member.
struct SphereNet {
    int dim = 0;
    double theta = 0.0;             // requested covering angle
    std::vector<Vec> dirs;          // lex-sorted unit directions
    bool randomized = false;        // grid construction fell back to greedy
    int grid_m = 0;                 // grid subdivisions when applicable
    double certified_max_angle = 0; // largest sampled gap seen by the check
};

struct CoveringCheck {
    bool pass = false;
    double max_min_angle = 0.0;
    Vec worst; // sampled direction realizing the gap
};

/// Rejection-sample `samples` directions and measure the worst angular gap.
CoveringCheck covering_check(const std::vector<Vec>& dirs, int dim, double theta,
                             int samples, std::uint64_t seed);

/// Deterministic covering net: normalized grid on the cube faces, refined by
/// the analytic cell bound; greedy randomized fallback when the grid would
/// explode. Certified by sampling before it is returned.
SphereNet sphere_net(int dim, double theta, int cert_samples = 100000);

/// Same, memoized on (dim, quantized theta); the quantized angle is <= theta
/// so the cached net always covers at least as finely as requested.
const SphereNet& cached_sphere_net(int dim, double theta);

/// Convex polytope D with B(center,r_inner) ⊆ D ⊆ B(center,r_outer):
/// intersection of halfspaces tangent to the inner ball at net directions,
/// covering angle arccos(r_inner/r_outer). Vertex containment in the outer
/// ball is verified before returning.
Polytope sandwich_polytope(const Vec& center, double r_inner, double r_outer, int dim,
                           double tol = kDefaultTol);

} // namespace peelkit

#endif
