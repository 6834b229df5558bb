#ifndef PEELKIT_POLYTOPE_HPP
#define PEELKIT_POLYTOPE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "peelkit/geometry.hpp"
#include "peelkit/rng.hpp"

namespace peelkit {

/// Bounded convex polytope in dual representation. The polytope is
/// full-dimensional in the coordinates of its affine hull; `verts` and
/// `facets` are expressed in hull coordinates. Values are immutable once
/// constructed (operations return new polytopes).
class Polytope {
public:
    AffineHull hull;
    std::vector<Vec> verts;                  // hull coordinates, lex-sorted
    std::vector<Halfspace> facets;           // hull coordinates, lex-sorted
    std::vector<std::vector<int>> incidence; // facet -> sorted vertex indices
    double tol = kDefaultTol;

    int dim() const { return hull.dim(); }
    int ambient_dim() const { return hull.ambient_dim(); }
    std::size_t vertex_count() const { return verts.size(); }

    Vec vertex_ambient(int i) const { return hull.embed(verts[static_cast<std::size_t>(i)]); }
    std::vector<Vec> vertices_ambient() const;

    /// 1 + largest absolute hull coordinate; tolerance scale factor.
    double coord_scale() const;

    /// max of u.x over the polytope, u in hull coordinates.
    double support_hull(const Vec& u) const;
    /// max of u.x over the polytope, u in ambient coordinates.
    double support_ambient(const Vec& u) const;

    bool contains_hull_point(const Vec& y, double tau) const;
    /// Ambient membership: within `tau` of the hull and of every facet.
    bool contains_point(const Vec& x, double tau) const;
    /// Ball (given in hull coordinates) contained in the polytope.
    bool contains_ball_hull(const Ball& b, double tau) const;
    /// Every vertex within radius+tau of the ambient ball center.
    bool inside_ball(const Ball& b, double tau) const;
    /// Same for a ball given in hull coordinates.
    bool inside_ball_hull(const Ball& b, double tau) const;

    void hull_bbox(Vec& lo, Vec& hi) const;

    /// Lex-sort vertices and facets, remap incidence. Establishes the
    /// canonical form used by serialization and set-equality tests.
    void canonicalize();

    /// Check representation invariants; throws std::runtime_error on breach.
    void validate(double tau) const;
};

bool lex_less(const Vec& a, const Vec& b);

/// Convex hull of an ambient point set. Keeps only extreme points, derives
/// facets and incidence; result may be lower-dimensional.
Polytope from_vertices(std::span<const Vec> points, double tol = kDefaultTol);

/// Vertex enumeration of a bounded H-polytope. `halfspaces` are expressed in
/// the coordinates of `hull`. Throws on empty or unbounded systems.
Polytope from_halfspaces(const std::vector<Halfspace>& halfspaces, const AffineHull& hull,
                         double tol = kDefaultTol);

struct CutResult {
    std::optional<Polytope> near; // side normal.x <= offset
    std::optional<Polytope> far;  // side normal.x >= offset
};

/// Split by a hyperplane given in hull coordinates. Sides sharing the plane
/// reuse bit-identical crossing vertices, so near ∪ far = P exactly.
CutResult cut(const Polytope& P, const Hyperplane& h);

std::optional<Polytope> intersect(const Polytope& P, const Polytope& Q);

/// Intersect with additional halfspaces given in P's hull coordinates.
std::optional<Polytope> intersect_with_halfspaces(const Polytope& P,
                                                  std::span<const Halfspace> hs);

/// Dilation about the ambient origin by lambda > 0. Exact on the
/// representation: vertices, offsets and the hull base are scaled.
Polytope scale(const Polytope& P, double lambda);

struct MinkowskiCheck {
    Polytope sum;                  // (mu+lambda)·P
    bool samples_inside = false;   // sampled v+w with v in muP, w in lambdaP
    bool vertices_decompose = false;
    int samples = 0;
    double max_support_gap = 0.0;  // |h_muP + h_lamP - h_sumP| over sampled dirs
};

/// Fact "muS + lambdaS = (mu+lambda)S" as a constructive operation plus a
/// sampled verification artifact.
MinkowskiCheck minkowski_scaled_sum(const Polytope& P, int mu, int lambda,
                                    std::uint64_t seed = 0, int samples = 256);

/// Seeded uniform samples (rejection in the hull bounding box).
std::vector<Vec> sample_points_hull(const Polytope& P, int count, Rng& rng);
std::vector<Vec> sample_points(const Polytope& P, int count, Rng& rng);

} // namespace peelkit

#endif
