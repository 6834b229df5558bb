#include "peelkit/peeling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "peelkit/dd.hpp"
#include "peelkit/enclosing_ball.hpp"
#include "peelkit/sphere_net.hpp"

namespace peelkit {

double cap_gamma(double R, double rho) {
    if (!(R > 0.0) || !(rho > 0.0)) throw std::invalid_argument("cap_gamma: radii must be positive");
    if (rho > R) throw std::invalid_argument("cap_gamma: rho must not exceed R");
    return rho * rho / (16.0 * R * R);
}

namespace {

void check_params(const PeelParams& p) {
    if (!(p.rho > 0.0)) throw std::invalid_argument("peel: rho must be positive");
    if (!(p.tol > 0.0)) throw std::invalid_argument("peel: tol must be positive");
    if (p.max_stages < 1) throw std::invalid_argument("peel: max_stages must be >= 1");
}

// Shell-bucketed point location over the pieces of a decomposition: a
// stage-s piece lies between its cut radius and the previous outer radius,
// so |x - O| narrows the candidates before any facet test runs. Ambient
// coordinates throughout, so it works on deserialized decompositions whose
// pieces carry their own hull frames.
class PieceLocator {
public:
    PieceLocator(const PeelDecomposition& dec, double tau) : dec_(dec), tau_(tau) {
        const double R = dec.initial_radius;
        const double g = dec.gamma;
        radius_lo_.reserve(dec.pieces.size());
        radius_hi_.reserve(dec.pieces.size());
        for (const PeelPiece& pc : dec.pieces) {
            if (!pc.cut_plane) {
                radius_lo_.push_back(0.0);
                radius_hi_.push_back(dec.stage_radii.empty() ? R : dec.stage_radii.back());
                continue;
            }
            const int s = pc.stage;
            radius_lo_.push_back(std::max(0.0, (1.0 - (s + 1) * g) * R));
            radius_hi_.push_back((1.0 - (s - 2) * g) * R);
        }
    }

    // First piece (1-based order >= first_order) containing the ambient
    // point, or 0. First-wins semantics are preserved: a piece's shell is a
    // superset of the piece, so the filter never skips a containing piece.
    int locate(const Vec& amb, int first_order = 1) const {
        const double r = (amb - dec_.center).norm();
        const double slack = tau_ * (1.0 + dec_.initial_radius) * 100.0 + 1e-12;
        for (std::size_t i = static_cast<std::size_t>(first_order - 1); i < dec_.pieces.size(); ++i) {
            if (r < radius_lo_[i] - slack || r > radius_hi_[i] + slack) continue;
            if (dec_.pieces[i].body.contains_point(amb, tau_)) return static_cast<int>(i) + 1;
        }
        for (std::size_t i = static_cast<std::size_t>(first_order - 1); i < dec_.pieces.size(); ++i)
            if (dec_.pieces[i].body.contains_point(amb, tau_ * 16.0)) return static_cast<int>(i) + 1;
        return 0;
    }

private:
    const PeelDecomposition& dec_;
    double tau_;
    std::vector<double> radius_lo_, radius_hi_;
};

} // namespace

PeelDecomposition peel(const Polytope& P, const PeelParams& params) {
    check_params(params);
    PeelDecomposition dec;
    dec.params = params;
    const double rho = params.rho;
    const double tol = params.tol;

    SupportBall sb = min_enclosing_ball_support(P.verts, tol);
    const double R = sb.ball.radius;
    dec.initial_radius = R;
    const Vec O = sb.ball.center; // hull coordinates
    dec.center = P.hull.embed(O);

    if (R <= rho * (1.0 + tol)) {
        // Already bounded by a rho-ball; nothing to peel.
        dec.gamma = 0.0;
        dec.pieces.push_back({P, 1, std::nullopt, 1});
        dec.remainders.push_back(P);
        return dec;
    }

    const int k = P.dim();
    const double g = cap_gamma(R, rho);
    dec.gamma = g;
    const double radius_eps = rho * (1.0 + tol);
    // Pieces thinner than this along the cut normal are skipped, not emitted.
    const double eps_skip = std::max(tol * (1.0 + R) * 32.0, 1e-12);

    Polytope remainder = P;
    int order = 1;
    int s = 1;
    for (;; ++s) {
        if (s > params.max_stages) {
            std::ostringstream msg;
            msg << "peel: stage count exceeded max_stages=" << params.max_stages
                << " (gamma=" << g << ", R=" << R << ")";
            throw std::runtime_error(msg.str());
        }
        const double r_out = (1.0 - s * g) * R;
        const double r_in = (1.0 - (s + 1) * g) * R;

        Polytope D = sandwich_polytope(O, r_in, r_out, k, tol);
        if (!D.contains_ball_hull({O, r_in}, tol * 8.0) ||
            !D.inside_ball_hull({O, r_out}, tol * 8.0))
            throw CertificationError("peel: stage sandwich certification failed");

        // Facets arrive lex-sorted by normal from the canonical polytope.
        for (const Halfspace& f : D.facets) {
            if (remainder.support_hull(f.normal) <= f.offset + eps_skip) continue;
            Hyperplane plane{f.normal, f.offset};
            CutResult cr = cut(remainder, plane);
            if (!cr.far || cr.far->dim() < k) continue; // sliver stays in the remainder
            if (!cr.near)
                throw std::runtime_error("peel: cut removed the entire remainder");
            Ball piece_ball = min_enclosing_ball(cr.far->verts, tol);
            if (piece_ball.radius > radius_eps) {
                std::ostringstream msg;
                msg << "peel: emitted piece radius " << piece_ball.radius
                    << " exceeds rho*(1+tol)=" << radius_eps << " at stage " << s;
                throw CertificationError(msg.str());
            }
            Vec n_amb = P.hull.basis() * plane.normal;
            Hyperplane plane_amb{n_amb, plane.offset + n_amb.dot(P.hull.base())};
            dec.pieces.push_back({std::move(*cr.far), s, plane_amb, order++});
            remainder = std::move(*cr.near);
            dec.remainders.push_back(remainder);
        }
        dec.stage_radii.push_back(r_out);
        if (r_out < rho) break;
    }

    dec.pieces.push_back({remainder, s + 1, std::nullopt, order});
    if (dec.remainders.empty()) dec.remainders.push_back(remainder);
    return dec;
}

namespace {

// Batched test that every column of X (ambient points) lies in S within tau.
// Returns the index of the first violating column, or -1.
int first_outside(const Polytope& S, const Mat& X, double tau) {
    const int n = static_cast<int>(X.cols());
    if (n == 0) return -1;
    const double eps = tau * (1.0 + S.coord_scale());
    Mat C = X.colwise() - S.hull.base();
    Mat Y = S.hull.basis().transpose() * C; // hull coordinates
    // Distance to the hull subspace.
    Mat rec = C - S.hull.basis() * Y;
    for (int j = 0; j < n; ++j)
        if (rec.col(j).norm() > eps) return j;
    if (S.dim() == 0) return -1;
    Mat H(static_cast<int>(S.facets.size()), S.dim());
    Vec b(static_cast<int>(S.facets.size()));
    for (std::size_t f = 0; f < S.facets.size(); ++f) {
        H.row(static_cast<int>(f)) = S.facets[f].normal.transpose();
        b[static_cast<int>(f)] = S.facets[f].offset;
    }
    Mat res = (H * Y).colwise() - b;
    for (int j = 0; j < n; ++j)
        if (res.col(j).maxCoeff() > eps) return j;
    return -1;
}

} // namespace

PeelCertificate certify_peel(const Polytope& P, const PeelDecomposition& dec,
                             const PeelParams& params) {
    check_params(params);
    if (dec.pieces.empty()) throw std::invalid_argument("certify_peel: empty decomposition");
    if (dec.remainders.empty()) throw std::invalid_argument("certify_peel: no remainders recorded");
    for (const PeelPiece& pc : dec.pieces)
        if (pc.body.ambient_dim() != P.ambient_dim())
            throw std::invalid_argument("certify_peel: decomposition does not match the polytope");

    PeelCertificate cert;
    const double tol = params.tol;
    const double rho = params.rho;
    Rng base(params.seed);

    // (2) enclosing-ball radii per piece.
    cert.piece_radii.limit = rho * (1.0 + tol);
    cert.piece_radii.pass = true;
    for (const PeelPiece& pc : dec.pieces) {
        Ball b = min_enclosing_ball(pc.body.verts, tol);
        PieceReport rep;
        rep.order_index = pc.order_index;
        rep.stage = pc.stage;
        rep.radius = b.radius;
        rep.vertices = pc.body.vertex_count();
        rep.ok = b.radius <= cert.piece_radii.limit;
        if (b.radius > cert.piece_radii.max_radius) {
            cert.piece_radii.max_radius = b.radius;
            cert.piece_radii.worst_piece = pc.order_index;
        }
        if (!rep.ok) cert.piece_radii.pass = false;
        cert.per_piece.push_back(rep);
    }

    PieceLocator locator(dec, tol);

    // (1) coverage: seeded uniform samples of P, each must land in a piece.
    {
        Rng rng = base.fork(0xC0FFEEull);
        std::vector<Vec> pts = sample_points(P, params.coverage_samples, rng);
        cert.covers.samples = static_cast<int>(pts.size());
        for (const Vec& x : pts) {
            if (locator.locate(x) != 0) {
                ++cert.covers.hits;
            } else if (cert.covers.witnesses.size() < 10) {
                cert.covers.witnesses.push_back(x);
            }
        }
        cert.covers.pass = cert.covers.hits == cert.covers.samples;
    }

    // (3) suffix convexity: S_nu is P for nu=1, remainders[nu-2] afterwards.
    {
        cert.suffix_convex.pass = true;
        const std::size_t mu = dec.pieces.size();
        cert.suffix_convex.checked = static_cast<int>(mu);

        // All piece vertices (ambient) as columns, pieces contiguous in
        // order; the suffix nu is then a contiguous right block.
        std::vector<int> piece_start(mu + 1, 0);
        int total = 0;
        for (std::size_t i = 0; i < mu; ++i) {
            piece_start[i] = total;
            total += static_cast<int>(dec.pieces[i].body.vertex_count());
        }
        piece_start[mu] = total;
        Mat X(P.ambient_dim(), total);
        for (std::size_t i = 0; i < mu; ++i) {
            const Polytope& B = dec.pieces[i].body;
            for (std::size_t v = 0; v < B.verts.size(); ++v)
                X.col(piece_start[i] + static_cast<int>(v)) = B.hull.embed(B.verts[v]);
        }

        for (std::size_t nu = 1; nu <= mu && cert.suffix_convex.pass; ++nu) {
            const Polytope& S = (nu == 1) ? P : dec.remainders[nu - 2];
            const int from = piece_start[nu - 1];
            const Mat tail = X.rightCols(total - from);
            const int bad = first_outside(S, tail, tol * 64.0);
            if (bad >= 0) {
                cert.suffix_convex.pass = false;
                cert.suffix_convex.first_failure = static_cast<int>(nu);
                cert.suffix_convex.detail =
                    "suffix piece vertex escapes the recorded suffix polytope";
                cert.suffix_convex.witnesses.push_back(tail.col(bad));
                break;
            }
            Rng rng = base.fork(Rng::mix(0x5FF1Cull, nu));
            std::vector<Vec> pts = sample_points(S, params.suffix_samples, rng);
            for (const Vec& x : pts) {
                if (locator.locate(x, static_cast<int>(nu)) == 0) {
                    cert.suffix_convex.pass = false;
                    cert.suffix_convex.first_failure = static_cast<int>(nu);
                    cert.suffix_convex.detail =
                        "sample of the suffix polytope lies in no suffix piece";
                    cert.suffix_convex.witnesses.push_back(x);
                    break;
                }
            }
        }
    }

    cert.pass = cert.covers.pass && cert.piece_radii.pass && cert.suffix_convex.pass;
    return cert;
}

DiameterReport distance_diameter_check(const PeelPiece& piece, int ell, int n,
                                       double rho, double tol) {
    if (ell < 1) throw std::invalid_argument("distance_diameter_check: ell must be >= 1");
    DiameterReport rep;
    rep.bound_l2 = 2.0 * ell * rho * (1.0 + tol);
    rep.bound_l1 = 2.0 * n * ell * rho * (1.0 + tol);
    Polytope S = scale(piece.body, static_cast<double>(ell));
    std::vector<Vec> amb = S.vertices_ambient();
    for (std::size_t i = 0; i < amb.size(); ++i) {
        for (std::size_t j = i + 1; j < amb.size(); ++j) {
            rep.max_l2 = std::max(rep.max_l2, (amb[i] - amb[j]).norm());
            rep.max_l1 = std::max(rep.max_l1, (amb[i] - amb[j]).lpNorm<1>());
        }
    }
    rep.pass = rep.max_l2 <= rep.bound_l2 && rep.max_l1 <= rep.bound_l1;
    return rep;
}

} // namespace peelkit
