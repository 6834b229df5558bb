#ifndef PEELKIT_DD_HPP
#define PEELKIT_DD_HPP

#include <vector>

#include "peelkit/polytope.hpp"

namespace peelkit {

/// Incremental double-description state: vertex set, facet set and their
/// incidence, updated one halfspace insertion at a time. Works in hull
/// coordinates of a full-dimensional polytope (dim >= 1).
class DdBuilder {
public:
    enum class Outcome {
        Unchanged, // halfspace already satisfied
        Cut,       // proper cut, representation updated
        Empty,     // nothing satisfies the halfspace
        Collapsed  // only a lower-dimensional face satisfies it
    };

    /// Start from an axis-aligned box lo <= x <= hi (componentwise, lo < hi).
    DdBuilder(const Vec& lo, const Vec& hi, double tol);

    /// Start from an existing polytope (vertex order is preserved, which
    /// makes crossings canonical across builders seeded from the same P).
    explicit DdBuilder(const Polytope& P);

    Outcome insert(const Halfspace& h);

    bool empty() const { return empty_; }
    bool collapsed() const { return collapsed_; }

    /// Tight points of the collapsing halfspace (hull coordinates); valid
    /// after insert() returned Collapsed.
    const std::vector<Vec>& collapse_points() const { return collapse_pts_; }

    double support(const Vec& u) const;
    std::size_t vertex_count() const { return verts_.size(); }
    std::size_t facet_count() const { return facets_.size(); }

    /// Copy out the current state as a canonical Polytope.
    Polytope snapshot(const AffineHull& hull, double tol) const;

private:
    int dim_;
    double tol_;
    double scale_ = 1.0;
    bool empty_ = false;
    bool collapsed_ = false;
    std::vector<Vec> verts_;
    std::vector<Halfspace> facets_;
    std::vector<std::vector<int>> finc_; // facet -> sorted vertex ids
    std::vector<std::vector<int>> vinc_; // vertex -> sorted facet ids
    std::vector<Vec> collapse_pts_;

    double eps_on() const { return tol_ * scale_ * 4.0; }
    void refresh_scale();
    bool facet_valid(int f) const;
    void prune_facets(const std::vector<int>& candidates);
    void compact(const std::vector<char>& vert_alive, const std::vector<char>& facet_alive);
};

} // namespace peelkit

#endif
