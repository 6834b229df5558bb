#include "peelkit/polytope.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "peelkit/dd.hpp"
#include "peelkit/linprog.hpp"

namespace peelkit {
namespace {

Halfspace hull_to_ambient(const Halfspace& h, const AffineHull& hull) {
    Vec n = hull.basis() * h.normal;
    const double b = h.offset + n.dot(hull.base());
    return {std::move(n), b};
}

struct MappedHalfspace {
    bool constant = false;  // normal vanished inside the hull
    bool satisfied = true;  // meaningful when constant
    Halfspace hs;
};

MappedHalfspace ambient_to_hull(const Halfspace& h, const AffineHull& hull, double eps) {
    MappedHalfspace out;
    Vec n2 = hull.basis().transpose() * h.normal;
    const double c = h.normal.dot(hull.base());
    const double nn = n2.norm();
    if (nn <= eps) {
        out.constant = true;
        out.satisfied = c <= h.offset + eps * (1.0 + std::abs(h.offset));
        return out;
    }
    out.hs = {n2 / nn, (h.offset - c) / nn};
    return out;
}

double max_abs_coord(std::span<const Vec> pts) {
    double s = 0.0;
    for (const Vec& p : pts)
        if (p.size() > 0) s = std::max(s, p.cwiseAbs().maxCoeff());
    return s;
}

void enumerate_subsets(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

} // namespace

bool lex_less(const Vec& a, const Vec& b) {
    const int n = static_cast<int>(std::min(a.size(), b.size()));
    for (int i = 0; i < n; ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

std::vector<Vec> Polytope::vertices_ambient() const {
    std::vector<Vec> out;
    out.reserve(verts.size());
    for (const Vec& v : verts) out.push_back(hull.embed(v));
    return out;
}

double Polytope::coord_scale() const { return 1.0 + max_abs_coord(verts); }

double Polytope::support_hull(const Vec& u) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& v : verts) best = std::max(best, u.dot(v));
    return best;
}

double Polytope::support_ambient(const Vec& u) const {
    if (dim() == 0) return u.dot(hull.base());
    return u.dot(hull.base()) + support_hull(hull.basis().transpose() * u);
}

bool Polytope::contains_hull_point(const Vec& y, double tau) const {
    if (dim() == 0) return true;
    const double eps = tau * (1.0 + std::max(coord_scale(), 1.0 + y.cwiseAbs().maxCoeff()));
    for (const Halfspace& f : facets)
        if (f.residual(y) > eps) return false;
    return true;
}

bool Polytope::contains_point(const Vec& x, double tau) const {
    const double eps = tau * (1.0 + x.cwiseAbs().maxCoeff());
    if (hull.distance(x) > eps) return false;
    if (dim() == 0) return true;
    return contains_hull_point(hull.project(x), tau);
}

bool Polytope::contains_ball_hull(const Ball& b, double tau) const {
    const double eps = tau * std::max(coord_scale(), 1.0 + b.radius);
    for (const Halfspace& f : facets)
        if (f.normal.dot(b.center) + b.radius > f.offset + eps) return false;
    return true;
}

bool Polytope::inside_ball(const Ball& b, double tau) const {
    const double eps = tau * (1.0 + b.radius);
    for (const Vec& v : verts)
        if ((hull.embed(v) - b.center).norm() > b.radius + eps) return false;
    return true;
}

bool Polytope::inside_ball_hull(const Ball& b, double tau) const {
    const double eps = tau * (1.0 + b.radius);
    for (const Vec& v : verts)
        if ((v - b.center).norm() > b.radius + eps) return false;
    return true;
}

void Polytope::hull_bbox(Vec& lo, Vec& hi) const {
    const int k = dim();
    lo = Vec::Constant(k, std::numeric_limits<double>::infinity());
    hi = Vec::Constant(k, -std::numeric_limits<double>::infinity());
    for (const Vec& v : verts) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
}

void Polytope::canonicalize() {
    std::vector<int> vperm(verts.size());
    std::iota(vperm.begin(), vperm.end(), 0);
    std::sort(vperm.begin(), vperm.end(), [&](int a, int b) {
        return lex_less(verts[static_cast<std::size_t>(a)], verts[static_cast<std::size_t>(b)]);
    });
    std::vector<int> vinv(verts.size());
    std::vector<Vec> nv(verts.size());
    for (std::size_t i = 0; i < vperm.size(); ++i) {
        nv[i] = std::move(verts[static_cast<std::size_t>(vperm[i])]);
        vinv[static_cast<std::size_t>(vperm[i])] = static_cast<int>(i);
    }
    verts = std::move(nv);

    std::vector<int> fperm(facets.size());
    std::iota(fperm.begin(), fperm.end(), 0);
    std::sort(fperm.begin(), fperm.end(), [&](int a, int b) {
        const Halfspace& fa = facets[static_cast<std::size_t>(a)];
        const Halfspace& fb = facets[static_cast<std::size_t>(b)];
        if (lex_less(fa.normal, fb.normal)) return true;
        if (lex_less(fb.normal, fa.normal)) return false;
        return fa.offset < fb.offset;
    });
    std::vector<Halfspace> nf(facets.size());
    std::vector<std::vector<int>> ni(facets.size());
    for (std::size_t i = 0; i < fperm.size(); ++i) {
        nf[i] = std::move(facets[static_cast<std::size_t>(fperm[i])]);
        auto inc = std::move(incidence[static_cast<std::size_t>(fperm[i])]);
        for (int& v : inc) v = vinv[static_cast<std::size_t>(v)];
        std::sort(inc.begin(), inc.end());
        ni[i] = std::move(inc);
    }
    facets = std::move(nf);
    incidence = std::move(ni);
}

void Polytope::validate(double tau) const {
    const int k = dim();
    if (verts.empty()) throw std::runtime_error("polytope: no vertices");
    for (const Vec& v : verts) {
        if (static_cast<int>(v.size()) != k) throw std::runtime_error("polytope: vertex dimension mismatch");
        if (!finite(v)) throw std::runtime_error("polytope: non-finite vertex");
    }
    if (k == 0) {
        if (verts.size() != 1 || !facets.empty())
            throw std::runtime_error("polytope: malformed 0-dimensional polytope");
        return;
    }
    const double eps = tau * coord_scale() * 100.0;
    if (facets.size() != incidence.size())
        throw std::runtime_error("polytope: incidence size mismatch");
    for (std::size_t f = 0; f < facets.size(); ++f) {
        if (std::abs(facets[f].normal.norm() - 1.0) > tau * 10.0)
            throw std::runtime_error("polytope: facet normal not unit");
        std::vector<Vec> tight;
        for (const Vec& v : verts) {
            const double r = facets[f].residual(v);
            if (r > eps) throw std::runtime_error("polytope: vertex outside facet");
            if (std::abs(r) <= eps) tight.push_back(v);
        }
        if (static_cast<int>(tight.size()) < k)
            throw std::runtime_error("polytope: facet not supported by enough vertices");
        std::vector<Vec> diffs;
        for (std::size_t i = 1; i < tight.size(); ++i) diffs.push_back(tight[i] - tight[0]);
        if (k >= 2 && span_rank(diffs, tau * coord_scale()) < k - 1)
            throw std::runtime_error("polytope: facet tight set is affinely degenerate");
    }
    for (const Vec& v : verts) {
        std::vector<Vec> normals;
        for (const Halfspace& f : facets)
            if (std::abs(f.residual(v)) <= eps) normals.push_back(f.normal);
        if (span_rank(normals, tau) < k)
            throw std::runtime_error("polytope: vertex is not a zero-dimensional face");
    }
}

Polytope from_vertices(std::span<const Vec> points, double tol) {
    if (points.empty()) throw std::invalid_argument("from_vertices: empty input");
    const int d = static_cast<int>(points[0].size());
    for (const Vec& p : points) {
        if (static_cast<int>(p.size()) != d)
            throw std::invalid_argument("from_vertices: inconsistent dimensions");
        if (!finite(p)) throw std::invalid_argument("from_vertices: non-finite point");
    }
    const double scale = 1.0 + max_abs_coord(points);
    const double eps = tol * scale * 4.0;

    std::vector<Vec> pts;
    for (const Vec& p : points) {
        bool dup = false;
        for (const Vec& q : pts)
            if ((p - q).lpNorm<Eigen::Infinity>() <= eps) { dup = true; break; }
        if (!dup) pts.push_back(p);
    }

    Polytope P;
    P.tol = tol;
    P.hull = affine_hull(pts, tol);
    const int k = P.hull.dim();
    if (k == 0) {
        P.verts = {Vec(0)};
        return P;
    }
    std::vector<Vec> hp;
    hp.reserve(pts.size());
    for (const Vec& p : pts) hp.push_back(P.hull.project(p));
    const int n = static_cast<int>(hp.size());

    if (k == 1) {
        int imin = 0, imax = 0;
        for (int i = 1; i < n; ++i) {
            if (hp[static_cast<std::size_t>(i)][0] < hp[static_cast<std::size_t>(imin)][0]) imin = i;
            if (hp[static_cast<std::size_t>(i)][0] > hp[static_cast<std::size_t>(imax)][0]) imax = i;
        }
        Vec e(1);
        e[0] = 1.0;
        P.verts = {hp[static_cast<std::size_t>(imin)], hp[static_cast<std::size_t>(imax)]};
        P.facets = {{e, hp[static_cast<std::size_t>(imax)][0]}, {-e, -hp[static_cast<std::size_t>(imin)][0]}};
        P.incidence = {{1}, {0}};
        P.canonicalize();
        return P;
    }

    // Brute-force facet enumeration over k-subsets; adequate at the point
    // counts this library works with.
    double combos = 1.0;
    for (int i = 0; i < k; ++i) combos = combos * (n - i) / (i + 1);
    if (combos > 3e6)
        throw std::invalid_argument("from_vertices: too many points for facet enumeration");

    std::vector<Halfspace> facets;
    enumerate_subsets(n, k, [&](const std::vector<int>& idx) {
        Mat edges(k, k - 1);
        const Vec& p0 = hp[static_cast<std::size_t>(idx[0])];
        for (int j = 1; j < k; ++j)
            edges.col(j - 1) = hp[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] - p0;
        Eigen::ColPivHouseholderQR<Mat> qr(edges);
        qr.setThreshold(eps);
        if (qr.rank() < k - 1) return;
        Mat q = qr.householderQ() * Mat::Identity(k, k);
        Vec normal = q.col(k - 1);
        double offset = normal.dot(p0);
        double maxr = -std::numeric_limits<double>::infinity();
        double minr = std::numeric_limits<double>::infinity();
        for (const Vec& p : hp) {
            const double r = normal.dot(p) - offset;
            maxr = std::max(maxr, r);
            minr = std::min(minr, r);
        }
        if (maxr <= eps) {
            // outward as-is
        } else if (minr >= -eps) {
            normal = -normal;
            offset = -offset;
        } else {
            return;
        }
        for (const Halfspace& f : facets) {
            if (f.normal.dot(normal) >= 1.0 - 1e-9 &&
                std::abs(f.offset - offset) <= eps)
                return; // duplicate
        }
        facets.push_back({std::move(normal), offset});
    });

    // Vertices: points tight on >= k facets spanning full rank.
    std::vector<int> keep;
    std::vector<std::vector<int>> tight_facets(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<Vec> normals;
        for (std::size_t f = 0; f < facets.size(); ++f) {
            if (std::abs(facets[f].residual(hp[static_cast<std::size_t>(i)])) <= eps) {
                tight_facets[static_cast<std::size_t>(i)].push_back(static_cast<int>(f));
                normals.push_back(facets[f].normal);
            }
        }
        if (static_cast<int>(normals.size()) >= k && span_rank(normals, tol) >= k)
            keep.push_back(i);
    }
    if (keep.empty()) throw std::runtime_error("from_vertices: no extreme points identified");

    P.verts.reserve(keep.size());
    P.incidence.assign(facets.size(), {});
    for (std::size_t newid = 0; newid < keep.size(); ++newid) {
        const int old = keep[newid];
        P.verts.push_back(hp[static_cast<std::size_t>(old)]);
        for (int f : tight_facets[static_cast<std::size_t>(old)])
            P.incidence[static_cast<std::size_t>(f)].push_back(static_cast<int>(newid));
    }
    P.facets = std::move(facets);

    // Drop facets that lost their supporting set when interior points were
    // discarded (cannot normally happen, kept as a guard).
    std::vector<Halfspace> ff;
    std::vector<std::vector<int>> fi;
    for (std::size_t f = 0; f < P.facets.size(); ++f) {
        if (static_cast<int>(P.incidence[f].size()) >= k) {
            ff.push_back(std::move(P.facets[f]));
            fi.push_back(std::move(P.incidence[f]));
        }
    }
    P.facets = std::move(ff);
    P.incidence = std::move(fi);
    P.canonicalize();
    return P;
}

std::optional<Polytope> intersect_with_halfspaces(const Polytope& P,
                                                  std::span<const Halfspace> hs) {
    const int k = P.dim();
    const double eps = P.tol * P.coord_scale() * 4.0;
    if (k == 0) {
        const Vec y = Vec::Zero(0);
        for (const Halfspace& h : hs) {
            (void)y;
            if (-h.offset > eps) return std::nullopt; // 0-dim residual is -offset
        }
        return P;
    }
    DdBuilder bld(P);
    for (std::size_t i = 0; i < hs.size(); ++i) {
        switch (bld.insert(hs[i])) {
            case DdBuilder::Outcome::Unchanged:
            case DdBuilder::Outcome::Cut:
                break;
            case DdBuilder::Outcome::Empty:
                return std::nullopt;
            case DdBuilder::Outcome::Collapsed: {
                std::vector<Vec> amb;
                for (const Vec& y : bld.collapse_points()) amb.push_back(P.hull.embed(y));
                Polytope low = from_vertices(amb, P.tol);
                std::vector<Halfspace> rest;
                for (std::size_t j = i + 1; j < hs.size(); ++j) {
                    MappedHalfspace m =
                        ambient_to_hull(hull_to_ambient(hs[j], P.hull), low.hull, P.tol * 10.0);
                    if (m.constant) {
                        if (!m.satisfied) return std::nullopt;
                        continue;
                    }
                    rest.push_back(std::move(m.hs));
                }
                return intersect_with_halfspaces(low, rest);
            }
        }
    }
    return bld.snapshot(P.hull, P.tol);
}

Polytope from_halfspaces(const std::vector<Halfspace>& halfspaces, const AffineHull& hull,
                         double tol) {
    const int k = hull.dim();
    std::vector<Halfspace> hs;
    for (const Halfspace& h : halfspaces) {
        if (static_cast<int>(h.normal.size()) != k)
            throw std::invalid_argument("from_halfspaces: halfspace dimension mismatch");
        const double nn = h.normal.norm();
        if (nn <= 1e-14) {
            if (h.offset < -tol) throw std::runtime_error("from_halfspaces: empty system");
            continue;
        }
        hs.push_back({h.normal / nn, h.offset / nn});
    }
    if (k == 0) {
        Polytope P;
        P.hull = hull;
        P.tol = tol;
        P.verts = {Vec(0)};
        return P;
    }
    const int m = static_cast<int>(hs.size());
    Mat A(m, k);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
        A.row(i) = hs[static_cast<std::size_t>(i)].normal.transpose();
        b[i] = hs[static_cast<std::size_t>(i)].offset;
    }
    if (!lp_feasible(A, b)) throw std::runtime_error("from_halfspaces: empty system");

    // Recession directions: nonzero y with Ay <= 0 makes the set unbounded.
    {
        Mat Ar(m + 2 * k, k);
        Vec br = Vec::Zero(m + 2 * k);
        Ar.topRows(m) = A;
        Ar.block(m, 0, k, k) = Mat::Identity(k, k);
        Ar.block(m + k, 0, k, k) = -Mat::Identity(k, k);
        br.segment(m, 2 * k).setConstant(1.0);
        for (int j = 0; j < k; ++j) {
            for (double sgn : {1.0, -1.0}) {
                Vec c = Vec::Zero(k);
                c[j] = sgn;
                LpResult r = lp_maximize(Ar, br, c);
                if (r.status != LpStatus::Optimal || r.value > 1e-7)
                    throw std::runtime_error("from_halfspaces: unbounded system");
            }
        }
    }

    Vec lo(k), hi(k);
    for (int j = 0; j < k; ++j) {
        Vec c = Vec::Zero(k);
        c[j] = 1.0;
        LpResult rmax = lp_maximize(A, b, c);
        LpResult rmin = lp_maximize(A, b, -c);
        if (rmax.status != LpStatus::Optimal || rmin.status != LpStatus::Optimal)
            throw std::runtime_error("from_halfspaces: unbounded system");
        hi[j] = rmax.value;
        lo[j] = -rmin.value;
    }
    const double margin = 0.125 * (1.0 + (hi - lo).maxCoeff());
    lo.array() -= margin;
    hi.array() += margin;

    Polytope box;
    box.hull = hull;
    box.tol = tol;
    {
        DdBuilder bb(lo, hi, tol);
        box = bb.snapshot(hull, tol);
    }
    std::optional<Polytope> out = intersect_with_halfspaces(box, hs);
    if (!out) throw std::runtime_error("from_halfspaces: empty system");
    return *out;
}

CutResult cut(const Polytope& P, const Hyperplane& h) {
    CutResult out;
    const int k = P.dim();
    const double eps = P.tol * P.coord_scale() * 4.0;
    if (k == 0) {
        const double r = -h.offset;
        if (r <= eps) out.near = P;
        if (r >= -eps) out.far = P;
        return out;
    }
    double maxr = -std::numeric_limits<double>::infinity();
    double minr = std::numeric_limits<double>::infinity();
    for (const Vec& v : P.verts) {
        const double r = h.residual(v);
        maxr = std::max(maxr, r);
        minr = std::min(minr, r);
    }
    auto tight_side = [&]() -> std::optional<Polytope> {
        std::vector<Vec> tight;
        for (const Vec& v : P.verts)
            if (std::abs(h.residual(v)) <= eps) tight.push_back(P.hull.embed(v));
        if (tight.empty()) return std::nullopt;
        return from_vertices(tight, P.tol);
    };
    if (maxr <= eps && minr >= -eps) {
        out.near = P;
        out.far = P;
        return out;
    }
    if (maxr <= eps) {
        out.near = P;
        out.far = tight_side();
        return out;
    }
    if (minr >= -eps) {
        out.far = P;
        out.near = tight_side();
        return out;
    }
    {
        DdBuilder bld(P);
        if (bld.insert(h.lower()) != DdBuilder::Outcome::Cut)
            throw std::runtime_error("cut: inconsistent near-side classification");
        out.near = bld.snapshot(P.hull, P.tol);
    }
    {
        DdBuilder bld(P);
        if (bld.insert(h.upper()) != DdBuilder::Outcome::Cut)
            throw std::runtime_error("cut: inconsistent far-side classification");
        out.far = bld.snapshot(P.hull, P.tol);
    }
    return out;
}

std::optional<Polytope> intersect(const Polytope& P, const Polytope& Q) {
    if (P.ambient_dim() != Q.ambient_dim())
        throw std::invalid_argument("intersect: ambient dimension mismatch");
    const double tol = std::max(P.tol, Q.tol);
    if (P.dim() == 0) {
        return Q.contains_point(P.hull.base(), tol * 10.0) ? std::optional<Polytope>(P)
                                                           : std::nullopt;
    }
    if (Q.dim() == 0) {
        return P.contains_point(Q.hull.base(), tol * 10.0) ? std::optional<Polytope>(Q)
                                                           : std::nullopt;
    }
    if (P.hull.same_subspace(Q.hull, tol * 100.0)) {
        std::vector<Halfspace> mapped;
        bool ok = true;
        for (const Halfspace& g : Q.facets) {
            MappedHalfspace m = ambient_to_hull(hull_to_ambient(g, Q.hull), P.hull, tol * 10.0);
            if (m.constant) {
                if (!m.satisfied) ok = false;
                continue;
            }
            mapped.push_back(std::move(m.hs));
        }
        if (!ok) return std::nullopt;
        return intersect_with_halfspaces(P, mapped);
    }

    // General case: intersect the affine hulls, then solve in the joint hull.
    const int d = P.ambient_dim();
    auto complement_rows = [&](const AffineHull& H) -> Mat {
        Mat B = H.basis();
        Eigen::HouseholderQR<Mat> qr(B);
        Mat q = qr.householderQ();
        return q.rightCols(d - H.dim()).transpose(); // (d-k) x d
    };
    Mat Ep = complement_rows(P.hull);
    Mat Eq = complement_rows(Q.hull);
    Mat E(Ep.rows() + Eq.rows(), d);
    Vec f(E.rows());
    E.topRows(Ep.rows()) = Ep;
    E.bottomRows(Eq.rows()) = Eq;
    f.head(Ep.rows()) = Ep * P.hull.base();
    f.tail(Eq.rows()) = Eq * Q.hull.base();
    Eigen::JacobiSVD<Mat> svd(E, Eigen::ComputeFullV | Eigen::ComputeThinU);
    const double sv_thresh = tol * 100.0 * (svd.singularValues().size() ? svd.singularValues()[0] + 1.0 : 1.0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > sv_thresh) ++rank;
    svd.setThreshold(sv_thresh);
    Vec x0 = svd.solve(f);
    const double scale = 1.0 + std::max(P.hull.base().cwiseAbs().maxCoeff(),
                                        Q.hull.base().cwiseAbs().maxCoeff());
    if ((E * x0 - f).lpNorm<Eigen::Infinity>() > tol * scale * 100.0)
        return std::nullopt; // hulls do not meet
    const int kn = d - rank;
    Mat kernel = svd.matrixV().rightCols(kn);
    AffineHull joint(x0, kernel);
    auto collect = [&](const Polytope& R, std::vector<Halfspace>& into) -> bool {
        for (const Halfspace& g : R.facets) {
            Halfspace amb = hull_to_ambient(g, R.hull);
            MappedHalfspace m = ambient_to_hull(amb, joint, tol * 10.0);
            if (m.constant) {
                if (!m.satisfied) return false;
                continue;
            }
            into.push_back(std::move(m.hs));
        }
        return true;
    };
    std::vector<Halfspace> hs;
    if (!collect(P, hs) || !collect(Q, hs)) return std::nullopt;
    if (joint.dim() == 0) {
        return (P.contains_point(x0, tol * 10.0) && Q.contains_point(x0, tol * 10.0))
                   ? std::optional<Polytope>(from_vertices(std::vector<Vec>{x0}, tol))
                   : std::nullopt;
    }
    try {
        return from_halfspaces(hs, joint, tol);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

Polytope scale(const Polytope& P, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale: factor must be positive");
    Polytope out = P;
    out.hull = AffineHull(lambda * P.hull.base(), P.hull.basis());
    for (Vec& v : out.verts) v *= lambda;
    for (Halfspace& f : out.facets) f.offset *= lambda;
    return out;
}

MinkowskiCheck minkowski_scaled_sum(const Polytope& P, int mu, int lambda,
                                    std::uint64_t seed, int samples) {
    if (mu < 1 || lambda < 1)
        throw std::invalid_argument("minkowski_scaled_sum: factors must be positive integers");
    MinkowskiCheck chk;
    chk.sum = scale(P, static_cast<double>(mu + lambda));
    chk.samples = samples;
    Polytope muP = scale(P, static_cast<double>(mu));
    Polytope laP = scale(P, static_cast<double>(lambda));
    Rng rng(Rng::mix(seed, 0x4D494E4Bull));
    std::vector<Vec> a = sample_points(muP, samples, rng);
    std::vector<Vec> w = sample_points(laP, samples, rng);
    chk.samples_inside = true;
    const double tau = P.tol * (mu + lambda) * 8.0;
    for (int i = 0; i < samples; ++i) {
        if (!chk.sum.contains_point(a[static_cast<std::size_t>(i)] + w[static_cast<std::size_t>(i)], tau)) {
            chk.samples_inside = false;
            break;
        }
    }
    chk.vertices_decompose = true;
    const double eps = P.tol * chk.sum.coord_scale() * 8.0;
    for (const Vec& u : chk.sum.verts) {
        const Vec cand = u / static_cast<double>(mu + lambda);
        bool found = false;
        for (const Vec& v : P.verts) {
            if ((cand - v).lpNorm<Eigen::Infinity>() <= eps) { found = true; break; }
        }
        if (!found) { chk.vertices_decompose = false; break; }
    }
    // support-function gap over sampled directions
    const int k = P.dim();
    if (k >= 1) {
        for (int t = 0; t < 64; ++t) {
            Vec u = rng.unit_direction(k);
            const double gap = std::abs(muP.support_hull(u) + laP.support_hull(u) -
                                        chk.sum.support_hull(u));
            chk.max_support_gap = std::max(chk.max_support_gap, gap);
        }
    }
    return chk;
}

std::vector<Vec> sample_points_hull(const Polytope& P, int count, Rng& rng) {
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    const int k = P.dim();
    if (k == 0) {
        out.assign(static_cast<std::size_t>(count), Vec(0));
        return out;
    }
    Vec lo, hi;
    P.hull_bbox(lo, hi);
    const double eps = P.tol * P.coord_scale() * 4.0;
    long long tries = 0;
    const long long max_tries = 20000LL * count + 100000LL;
    Vec y(k);
    while (static_cast<int>(out.size()) < count) {
        if (++tries > max_tries)
            throw std::runtime_error("sample_points: rejection acceptance too low");
        for (int i = 0; i < k; ++i) y[i] = rng.uniform(lo[i], hi[i]);
        bool inside = true;
        for (const Halfspace& f : P.facets) {
            if (f.residual(y) > eps) { inside = false; break; }
        }
        if (inside) out.push_back(y);
    }
    return out;
}

std::vector<Vec> sample_points(const Polytope& P, int count, Rng& rng) {
    std::vector<Vec> out = sample_points_hull(P, count, rng);
    for (Vec& y : out) y = P.hull.embed(y);
    return out;
}

} // namespace peelkit
