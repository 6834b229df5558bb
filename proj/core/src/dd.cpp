#include "peelkit/dd.hpp"

#include <algorithm>
#include <stdexcept>

namespace peelkit {
namespace {

// size of sorted-vector intersection
int shared_count(const std::vector<int>& a, const std::vector<int>& b) {
    int n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

} // namespace

DdBuilder::DdBuilder(const Vec& lo, const Vec& hi, double tol)
    : dim_(static_cast<int>(lo.size())), tol_(tol) {
    if (dim_ < 1) throw std::invalid_argument("DdBuilder: dimension must be >= 1");
    for (int i = 0; i < dim_; ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("DdBuilder: degenerate box");
    // Box corners in binary-counter order, facets +-e_i.
    const std::size_t corners = std::size_t{1} << dim_;
    verts_.reserve(corners);
    for (std::size_t mask = 0; mask < corners; ++mask) {
        Vec v(dim_);
        for (int i = 0; i < dim_; ++i) v[i] = (mask >> i) & 1 ? hi[i] : lo[i];
        verts_.push_back(std::move(v));
    }
    for (int i = 0; i < dim_; ++i) {
        Vec n = Vec::Zero(dim_);
        n[i] = 1.0;
        facets_.push_back({n, hi[i]});
        facets_.push_back({-n, -lo[i]});
    }
    finc_.assign(facets_.size(), {});
    vinc_.assign(verts_.size(), {});
    for (std::size_t mask = 0; mask < corners; ++mask) {
        for (int i = 0; i < dim_; ++i) {
            const int f = 2 * i + (((mask >> i) & 1) ? 0 : 1);
            finc_[static_cast<std::size_t>(f)].push_back(static_cast<int>(mask));
            vinc_[mask].push_back(f);
        }
    }
    for (auto& v : finc_) std::sort(v.begin(), v.end());
    refresh_scale();
}

DdBuilder::DdBuilder(const Polytope& P) : dim_(P.dim()), tol_(P.tol) {
    if (dim_ < 1) throw std::invalid_argument("DdBuilder: needs hull dimension >= 1");
    verts_ = P.verts;
    facets_ = P.facets;
    finc_ = P.incidence;
    vinc_.assign(verts_.size(), {});
    for (std::size_t f = 0; f < finc_.size(); ++f)
        for (int v : finc_[f]) vinc_[static_cast<std::size_t>(v)].push_back(static_cast<int>(f));
    for (auto& v : vinc_) std::sort(v.begin(), v.end());
    refresh_scale();
}

void DdBuilder::refresh_scale() {
    double s = 1.0;
    for (const Vec& v : verts_) s = std::max(s, 1.0 + v.cwiseAbs().maxCoeff());
    scale_ = s;
}

bool DdBuilder::facet_valid(int f) const {
    const auto& tight = finc_[static_cast<std::size_t>(f)];
    if (static_cast<int>(tight.size()) < dim_) return false;
    if (dim_ == 1) return tight.size() >= 1;
    // affine rank of the tight set must be dim-1
    std::vector<Vec> diffs;
    diffs.reserve(tight.size() - 1);
    const Vec& p0 = verts_[static_cast<std::size_t>(tight[0])];
    for (std::size_t i = 1; i < tight.size(); ++i)
        diffs.push_back(verts_[static_cast<std::size_t>(tight[i])] - p0);
    return span_rank(diffs, tol_ * scale_) >= dim_ - 1;
}

double DdBuilder::support(const Vec& u) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& v : verts_) best = std::max(best, u.dot(v));
    return best;
}

void DdBuilder::compact(const std::vector<char>& vert_alive, const std::vector<char>& facet_alive) {
    std::vector<int> vmap(verts_.size(), -1), fmap(facets_.size(), -1);
    std::vector<Vec> nv;
    nv.reserve(verts_.size());
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        if (vert_alive[i]) {
            vmap[i] = static_cast<int>(nv.size());
            nv.push_back(std::move(verts_[i]));
        }
    }
    std::vector<Halfspace> nf;
    std::vector<std::vector<int>> nfi;
    for (std::size_t f = 0; f < facets_.size(); ++f) {
        if (!facet_alive[f]) continue;
        fmap[f] = static_cast<int>(nf.size());
        nf.push_back(std::move(facets_[f]));
        std::vector<int> inc;
        inc.reserve(finc_[f].size());
        for (int v : finc_[f])
            if (vert_alive[static_cast<std::size_t>(v)]) inc.push_back(vmap[static_cast<std::size_t>(v)]);
        std::sort(inc.begin(), inc.end());
        nfi.push_back(std::move(inc));
    }
    verts_ = std::move(nv);
    facets_ = std::move(nf);
    finc_ = std::move(nfi);
    vinc_.assign(verts_.size(), {});
    for (std::size_t f = 0; f < finc_.size(); ++f)
        for (int v : finc_[f]) vinc_[static_cast<std::size_t>(v)].push_back(static_cast<int>(f));
    for (auto& v : vinc_) std::sort(v.begin(), v.end());
}

DdBuilder::Outcome DdBuilder::insert(const Halfspace& h) {
    if (empty_ || collapsed_)
        throw std::logic_error("DdBuilder::insert after terminal state");
    const double eps = eps_on();
    const std::size_t nv = verts_.size();
    std::vector<double> res(nv);
    int n_above = 0, n_below = 0;
    for (std::size_t i = 0; i < nv; ++i) {
        res[i] = h.residual(verts_[i]);
        if (res[i] > eps) ++n_above;
        else if (res[i] < -eps) ++n_below;
    }
    if (n_above == 0) return Outcome::Unchanged;
    if (n_below == 0) {
        collapse_pts_.clear();
        for (std::size_t i = 0; i < nv; ++i)
            if (res[i] <= eps) collapse_pts_.push_back(verts_[i]);
        if (collapse_pts_.empty()) {
            empty_ = true;
            return Outcome::Empty;
        }
        collapsed_ = true;
        return Outcome::Collapsed;
    }

    // Crossing edges: (below, above) pairs sharing >= dim-1 facets. Candidates
    // come from the facet lists of the above vertices; a full pair scan is the
    // fallback if the prefilter finds nothing (defends against incidence
    // erosion from earlier tolerance merges).
    std::vector<std::pair<int, int>> pairs; // (min id, max id)
    auto consider = [&](int a, int b) {
        if (res[static_cast<std::size_t>(a)] <= eps || res[static_cast<std::size_t>(b)] >= -eps)
            return;
        pairs.emplace_back(std::min(a, b), std::max(a, b));
    };
    if (dim_ == 1) {
        for (std::size_t a = 0; a < nv; ++a)
            if (res[a] > eps)
                for (std::size_t b = 0; b < nv; ++b)
                    if (res[b] < -eps) consider(static_cast<int>(a), static_cast<int>(b));
    } else {
        for (std::size_t a = 0; a < nv; ++a) {
            if (res[a] <= eps) continue;
            for (int f : vinc_[a]) {
                for (int b : finc_[static_cast<std::size_t>(f)]) {
                    if (res[static_cast<std::size_t>(b)] >= -eps) continue;
                    if (shared_count(vinc_[a], vinc_[static_cast<std::size_t>(b)]) >= dim_ - 1)
                        consider(static_cast<int>(a), b);
                }
            }
        }
        if (pairs.empty()) {
            for (std::size_t a = 0; a < nv; ++a)
                if (res[a] > eps)
                    for (std::size_t b = 0; b < nv; ++b)
                        if (res[b] < -eps &&
                            shared_count(vinc_[a], vinc_[b]) >= dim_ - 1)
                            consider(static_cast<int>(a), static_cast<int>(b));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    const double eps_feas = eps * 16.0;
    std::vector<Vec> fresh;
    for (auto [i, j] : pairs) {
        const double ri = res[static_cast<std::size_t>(i)];
        const double rj = res[static_cast<std::size_t>(j)];
        const double t = ri / (ri - rj);
        Vec x = verts_[static_cast<std::size_t>(i)] +
                t * (verts_[static_cast<std::size_t>(j)] - verts_[static_cast<std::size_t>(i)]);
        bool ok = true;
        for (const Halfspace& f : facets_) {
            if (f.residual(x) > eps_feas) { ok = false; break; }
        }
        if (!ok) continue;
        bool dup = false;
        for (const Vec& y : fresh) {
            if ((x - y).lpNorm<Eigen::Infinity>() <= eps) { dup = true; break; }
        }
        // Coincidence with a kept on-plane vertex also counts as duplicate.
        if (!dup) {
            for (std::size_t v = 0; v < nv; ++v) {
                if (std::abs(res[v]) <= eps &&
                    (x - verts_[v]).lpNorm<Eigen::Infinity>() <= eps) { dup = true; break; }
            }
        }
        if (!dup) fresh.push_back(std::move(x));
    }

    bool has_on = false;
    for (std::size_t i = 0; i < nv; ++i)
        if (res[i] <= eps && res[i] >= -eps) { has_on = true; break; }
    if (fresh.empty() && !has_on)
        throw std::runtime_error("DdBuilder::insert: no crossing vertices found for a proper cut");

    // Commit: drop above vertices, append fresh ones, add the facet.
    std::vector<char> vert_alive(nv, 1);
    std::vector<int> touched_facets;
    for (std::size_t i = 0; i < nv; ++i) {
        if (res[i] > eps) {
            vert_alive[i] = 0;
            for (int f : vinc_[i]) touched_facets.push_back(f);
        }
    }
    const int new_facet = static_cast<int>(facets_.size());
    facets_.push_back(h);
    finc_.emplace_back();
    for (std::size_t i = 0; i < nv; ++i) {
        if (vert_alive[i] && std::abs(res[i]) <= eps)
            finc_[static_cast<std::size_t>(new_facet)].push_back(static_cast<int>(i));
    }
    for (Vec& x : fresh) {
        const int id = static_cast<int>(verts_.size());
        // Tight set recomputed against all facets; keeps incidence exact for
        // later adjacency queries.
        std::vector<int> tf;
        for (std::size_t f = 0; f < facets_.size(); ++f)
            if (std::abs(facets_[f].residual(x)) <= eps) tf.push_back(static_cast<int>(f));
        verts_.push_back(std::move(x));
        vert_alive.push_back(1);
        vinc_.push_back(tf);
        for (int f : tf) finc_[static_cast<std::size_t>(f)].push_back(id);
    }
    for (auto& fi : finc_) std::sort(fi.begin(), fi.end());

    // Facets that lost vertices (plus the new one) may have degenerated.
    touched_facets.push_back(new_facet);
    std::sort(touched_facets.begin(), touched_facets.end());
    touched_facets.erase(std::unique(touched_facets.begin(), touched_facets.end()),
                         touched_facets.end());
    std::vector<char> facet_alive(facets_.size(), 1);
    // Apply vertex removals to incidence before validity checks; only the
    // touched facets reference removed vertices.
    for (int f : touched_facets) {
        auto& inc = finc_[static_cast<std::size_t>(f)];
        inc.erase(std::remove_if(inc.begin(), inc.end(),
                                 [&](int v) { return !vert_alive[static_cast<std::size_t>(v)]; }),
                  inc.end());
    }
    for (int f : touched_facets)
        if (!facet_valid(f)) facet_alive[static_cast<std::size_t>(f)] = 0;

    compact(vert_alive, facet_alive);
    refresh_scale();
    return Outcome::Cut;
}

Polytope DdBuilder::snapshot(const AffineHull& hull, double tol) const {
    if (empty_ || collapsed_)
        throw std::logic_error("DdBuilder::snapshot in terminal state");
    Polytope P;
    P.hull = hull;
    P.verts = verts_;
    P.facets = facets_;
    P.incidence = finc_;
    P.tol = tol;
    P.canonicalize();
    return P;
}

} // namespace peelkit
