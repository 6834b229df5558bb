#include "peelkit/lattice_sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "peelkit/enclosing_ball.hpp"
#include "peelkit/json_io.hpp"
#include "peelkit/rng.hpp"

namespace peelkit::sim {

std::int64_t ExpVec::degree() const {
    std::int64_t s = 0;
    for (std::int64_t x : e) s += x;
    return s;
}

std::int64_t ExpVec::l1_distance(const ExpVec& other) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) s += std::abs(e[i] - other.e[i]);
    return s;
}

Vec ExpVec::to_point() const {
    Vec v(n());
    for (int i = 0; i < n(); ++i) v[i] = static_cast<double>(e[static_cast<std::size_t>(i)]);
    return v;
}

std::int64_t MonomialRep::deg() const {
    std::int64_t d = 0;
    for (const auto& [v, t] : terms) d = std::max(d, v.degree());
    return d;
}

std::int64_t MonomialRep::min_deg() const {
    std::int64_t d = std::numeric_limits<std::int64_t>::max();
    for (const auto& [v, t] : terms) d = std::min(d, v.degree());
    return d;
}

int NilOracle::index_for(const CoeffTag& tag) const {
    if (kind == Kind::Constant) return k;
    return 1 + static_cast<int>(Rng::mix(seed, tag.id) % static_cast<std::uint64_t>(max_index));
}

std::vector<ExpVec> simplex_lattice(int n, std::int64_t m) {
    if (n < 1 || m < 1) throw std::invalid_argument("simplex_lattice: need n >= 1 and m >= 1");
    double count = 1.0;
    for (int i = 1; i < n; ++i) count = count * (m + i) / i;
    if (count > 5e6) throw std::invalid_argument("simplex_lattice: lattice too large");
    std::vector<ExpVec> out;
    ExpVec cur;
    cur.e.assign(static_cast<std::size_t>(n), 0);
    // lex order, first coordinate most significant
    std::function<void(int, std::int64_t)> rec = [&](int pos, std::int64_t left) {
        if (pos == n - 1) {
            cur.e[static_cast<std::size_t>(pos)] = left;
            out.push_back(cur);
            return;
        }
        for (std::int64_t v = 0; v <= left; ++v) {
            cur.e[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, m);
    return out;
}

Polytope simplex_polytope(int n, std::int64_t m, double tol) {
    if (n < 1 || m < 1) throw std::invalid_argument("simplex_polytope: need n >= 1 and m >= 1");
    std::vector<Vec> pts;
    for (int j = 0; j < n; ++j) {
        Vec v = Vec::Zero(n);
        v[j] = static_cast<double>(m);
        pts.push_back(std::move(v));
    }
    return from_vertices(pts, tol);
}

std::vector<int> assign_pieces(const std::vector<ExpVec>& points, const PeelDecomposition& dec) {
    if (dec.pieces.empty()) throw std::invalid_argument("assign_pieces: empty decomposition");
    const double tau = dec.params.tol * 16.0;
    std::vector<int> out;
    out.reserve(points.size());
    for (const ExpVec& p : points) {
        const Vec x = p.to_point();
        int found = -1;
        for (std::size_t i = 0; i < dec.pieces.size(); ++i) {
            if (dec.pieces[i].body.contains_point(x, tau)) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found < 0) {
            std::ostringstream msg;
            msg << "assign_pieces: uncovered lattice point (coverage breach) at (";
            for (std::size_t i = 0; i < p.e.size(); ++i)
                msg << p.e[i] << (i + 1 < p.e.size() ? "," : ")");
            throw std::runtime_error(msg.str());
        }
        out.push_back(found);
    }
    return out;
}

Term rewrite_step(const Term& term, int i, int j, TagAllocator& alloc) {
    const auto& [vec, tag] = term;
    const int n = vec.n();
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw std::invalid_argument("rewrite_step: bad coordinate pair");
    if (vec.e[static_cast<std::size_t>(i)] < 1)
        throw std::invalid_argument("rewrite_step: source exponent is zero");
    if (tag.depth < 1) throw std::runtime_error("rewrite_step: no ideal depth to spend");
    ExpVec out = vec;
    --out.e[static_cast<std::size_t>(i)];
    ++out.e[static_cast<std::size_t>(j)];
    return {std::move(out), alloc.fresh(tag.depth - 1, {tag.id})};
}

Term rewrite_to(const Term& term, const ExpVec& target, TagAllocator& alloc,
                RewriteReport* report, const std::optional<BigInt>& ell) {
    const auto& [vec, tag] = term;
    if (vec.n() != target.n()) throw std::invalid_argument("rewrite_to: dimension mismatch");
    if (vec.degree() != target.degree())
        throw std::invalid_argument("rewrite_to: degree mismatch");
    const BigInt steps = BigInt(vec.l1_distance(target)) / 2;
    if (report) {
        report->steps = steps;
        report->ell = ell;
        if (ell) {
            report->paper_bound = BigInt(2) * vec.n() * *ell;
            report->paper_sufficient = tag.depth >= report->paper_bound;
        }
    }
    if (tag.depth < steps) {
        std::ostringstream msg;
        msg << "rewrite_to: insufficient depth (" << tag.depth << " < " << steps << " steps)";
        throw std::runtime_error(msg.str());
    }
    // Composite of `steps` exchange moves; each moves l1-distance by 2 and
    // spends one depth unit.
    return {target, alloc.fresh(tag.depth - steps, {tag.id})};
}

CollapseResult collapse_piece(const MonomialRep& rep, const std::vector<ExpVec>& region,
                              const ExpVec& anchor, const NilOracle& oracle,
                              TagAllocator& alloc) {
    if (region.empty()) throw std::invalid_argument("collapse_piece: empty region");
    if (std::find(region.begin(), region.end(), anchor) == region.end())
        throw std::invalid_argument("collapse_piece: anchor not in region");
    std::optional<BigInt> min_depth;
    std::vector<std::uint64_t> parents;
    for (const ExpVec& v : region) {
        auto it = rep.terms.find(v);
        if (it == rep.terms.end()) continue; // region point without a live term
        Term moved;
        try {
            moved = rewrite_to({it->first, it->second}, anchor, alloc);
        } catch (const std::runtime_error&) {
            std::ostringstream msg;
            msg << "collapse_piece: depth shortfall at (";
            for (std::size_t i = 0; i < v.e.size(); ++i)
                msg << v.e[i] << (i + 1 < v.e.size() ? "," : ")");
            throw std::runtime_error(msg.str());
        }
        parents.push_back(it->second.id);
        if (!min_depth || moved.second.depth < *min_depth) min_depth = moved.second.depth;
    }
    if (!min_depth) throw std::invalid_argument("collapse_piece: region has no live terms");
    CollapseResult out;
    out.anchor = anchor;
    out.tag = alloc.fresh(*min_depth, std::move(parents));
    out.nil_index = oracle.index_for(out.tag);
    return out;
}

GradedSupport star_op(const GradedSupport& s, const GradedSupport& w) {
    if (s.empty() || w.empty()) throw std::invalid_argument("star_op: empty support");
    if (w.min_deg() < 1) throw std::invalid_argument("star_op: min(w) must be >= 1");
    GradedSupport out;
    auto it = s.classes.begin();
    const auto [gamma, c0] = *it;
    ++it;
    for (; it != s.classes.end(); ++it) out.classes.insert(*it);
    for (const auto& [dw, cw] : w.classes) {
        const std::int64_t d = gamma + dw;
        const std::int64_t cls = c0 + cw;
        auto [pos, fresh] = out.classes.emplace(d, cls);
        if (!fresh) pos->second = std::min(pos->second, cls);
    }
    return out;
}

Lemma1Result lemma1_reduce(const GradedSupport& s, const GradedSupport& w) {
    if (s.empty() || w.empty()) throw std::invalid_argument("lemma1_reduce: empty support");
    if (w.min_deg() < 1) throw std::invalid_argument("lemma1_reduce: min(w) must be >= 1");
    if (s.min_deg() < w.deg())
        throw std::invalid_argument("lemma1_reduce: requires min(s) >= deg(w)");
    Lemma1Result res;
    res.t = s;
    const std::int64_t guard = s.length() + 2;
    while (res.t.length() > w.deg()) {
        if (res.t.length() <= 1) break;
        const std::int64_t before = res.t.length();
        res.t = star_op(res.t, w);
        ++res.iterations;
        if (res.t.length() >= before || res.iterations > guard)
            throw std::logic_error("lemma1_reduce: length failed to decrease");
    }
    return res;
}

MonomialRep homogenize(const MonomialRep& rep, std::int64_t d, TagAllocator& alloc) {
    if (rep.terms.empty()) throw std::invalid_argument("homogenize: empty representation");
    MonomialRep out;
    out.n = rep.n;
    const std::int64_t D = rep.deg();
    for (const auto& [vec, tag] : rep.terms) {
        const std::int64_t j = D - vec.degree();
        if (j > d) {
            std::ostringstream msg;
            msg << "homogenize: degree gap " << j << " exceeds d=" << d;
            throw std::invalid_argument(msg.str());
        }
        if (tag.depth < j) throw std::runtime_error("homogenize: depth shortfall");
        ExpVec target = vec;
        target.e[0] += j;
        CoeffTag moved = alloc.fresh(tag.depth - j, {tag.id});
        auto it = out.terms.find(target);
        if (it == out.terms.end()) {
            out.terms.emplace(std::move(target), std::move(moved));
        } else {
            // merging tags: the sum lies in the smaller ideal power
            std::vector<std::uint64_t> lineage = it->second.lineage;
            lineage.push_back(tag.id);
            BigInt depth = std::min(it->second.depth, moved.depth);
            it->second = alloc.fresh(std::move(depth), std::move(lineage));
        }
    }
    return out;
}

bool StageRecord::all_pass() const {
    for (const Claim& c : claims)
        if (!c.pass) return false;
    return true;
}

namespace {

// Vertices of `inner` all contained in `outer` (ambient, tolerance tau).
Claim containment_claim(const std::string& text, const Polytope& inner, const Polytope& outer,
                        double tau) {
    Claim c;
    c.text = text;
    c.pass = true;
    for (const Vec& v : inner.verts) {
        Vec amb = inner.hull.embed(v);
        if (!outer.contains_point(amb, tau)) {
            c.pass = false;
            std::ostringstream os;
            os << "vertex (";
            for (int i = 0; i < amb.size(); ++i) os << amb[i] << (i + 1 < amb.size() ? "," : ")");
            os << " escapes";
            c.witness = os.str();
            break;
        }
    }
    return c;
}

Claim bigint_claim(const std::string& text, bool pass, const BigInt& lhs, const BigInt& rhs) {
    Claim c;
    c.text = text;
    c.pass = pass;
    if (!pass) {
        std::ostringstream os;
        os << lhs.str() << " vs " << rhs.str();
        c.witness = os.str();
    }
    return c;
}

// Integer points of ell * piece (degree lam = ell * m layer of Z^n), or
// nullopt when the bounding box is too large to enumerate.
std::optional<std::vector<ExpVec>> enumerate_scaled_region(const Polytope& piece,
                                                           std::int64_t ell, std::int64_t lam,
                                                           double tol) {
    Polytope scaled = scale(piece, static_cast<double>(ell));
    std::vector<Vec> amb = scaled.vertices_ambient();
    const int n = static_cast<int>(amb[0].size());
    std::vector<std::int64_t> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    const double pad = tol * (1.0 + static_cast<double>(lam)) * 16.0 + 1e-9;
    for (int j = 0; j < n; ++j) {
        double a = std::numeric_limits<double>::infinity();
        double b = -a;
        for (const Vec& v : amb) {
            a = std::min(a, v[j]);
            b = std::max(b, v[j]);
        }
        lo[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::ceil(a - pad));
        hi[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::floor(b + pad));
        lo[static_cast<std::size_t>(j)] = std::max<std::int64_t>(lo[static_cast<std::size_t>(j)], 0);
    }
    double count = 1.0;
    for (int j = 0; j + 1 < n; ++j) {
        count *= static_cast<double>(hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)] + 1);
        if (count > 2e5) return std::nullopt;
    }
    const double tau = tol * 16.0;
    std::vector<ExpVec> out;
    ExpVec cur;
    cur.e.assign(static_cast<std::size_t>(n), 0);
    std::function<void(int, std::int64_t)> rec = [&](int pos, std::int64_t sum) {
        if (pos == n - 1) {
            const std::int64_t last = lam - sum;
            if (last < lo[static_cast<std::size_t>(pos)] || last > hi[static_cast<std::size_t>(pos)]) return;
            cur.e[static_cast<std::size_t>(pos)] = last;
            if (scaled.contains_point(cur.to_point(), tau)) out.push_back(cur);
            return;
        }
        for (std::int64_t v = lo[static_cast<std::size_t>(pos)]; v <= hi[static_cast<std::size_t>(pos)]; ++v) {
            if (sum + v > lam) break;
            cur.e[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, sum + v);
        }
    };
    rec(0, 0);
    return out;
}

} // namespace

ProofTrace run_main_proof(int n, std::int64_t m, const NilOracle& oracle,
                          const PeelParams& params) {
    if (n < 2)
        throw std::invalid_argument("run_main_proof: n must be >= 2 (the simplex is a point at n=1)");
    if (m < 1) throw std::invalid_argument("run_main_proof: m must be >= 1");
    if (std::abs(params.rho - 1.0) > 1e-12)
        throw std::invalid_argument("run_main_proof: the depth bookkeeping requires rho = 1");

    ProofTrace trace;
    trace.n = n;
    trace.m = m;
    trace.oracle = oracle;

    Polytope P = simplex_polytope(n, m, params.tol);
    PeelDecomposition dec = peel(P, params);
    {
        std::ostringstream os;
        os << std::hex << fnv1a64(decomposition_to_json(dec));
        trace.peel_ref = os.str();
    }

    std::vector<ExpVec> lattice = simplex_lattice(n, m);
    std::vector<int> assign = assign_pieces(lattice, dec);

    TagAllocator alloc;
    MonomialRep rep;
    rep.n = n;
    const BigInt depth0 = BigInt(2) * n + 1; // L_0 = J_0 I = I^{2n+1}
    for (const ExpVec& v : lattice) rep.terms.emplace(v, alloc.fresh(depth0));

    const std::size_t mu = dec.pieces.size();
    BigInt ell = 1; // l_1 ... l_{i-1}
    BigInt lam = m; // monomial degree scale
    BigInt J = BigInt(2) * n;
    BigInt L = J + 1;
    BigInt l_prev = 1;
    bool termwise = true; // representation still literal (no powering yet)
    const double tau = params.tol * 64.0;

    auto fail = [&](const Claim& c) {
        trace.contradiction = false;
        trace.failure = c.text + (c.witness.empty() ? "" : (": " + c.witness));
    };

    for (std::size_t i = 1; mu >= 2 && i <= mu - 1; ++i) {
        StageRecord rec;
        rec.i = static_cast<int>(i);
        rec.piece = static_cast<int>(i);
        rec.scale_ell = ell;

        const Polytope& Si = (i == 1) ? P : dec.remainders[i - 2];
        const Polytope& Si1 = dec.remainders[i - 1];
        const Polytope& Ki = dec.pieces[i - 1].body;

        rec.claims.push_back(
            containment_claim("piece region lies in the active suffix region", Ki, Si, tau));
        rec.claims.push_back(containment_claim(
            "power support stays in the scaled suffix (Fact-2 scaling of the recorded suffix)",
            Si1, Si, tau));
        rec.epsilon = L - BigInt(2) * n * ell;
        rec.claims.push_back(
            bigint_claim("depth budget covers rewrites in the scaled piece (L-exponent >= 2n*ell + 1)",
                         rec.epsilon >= 1, L, BigInt(2) * n * ell + 1));
        {
            Ball b = min_enclosing_ball(Ki.verts, params.tol);
            const bool radius_ok = b.radius <= params.rho * (1.0 + params.tol);
            const BigInt steps_bound = BigInt(n) * ell;
            const bool margin_ok = L - steps_bound >= 1;
            Claim c;
            c.text = "piece diameter chain: l1 <= sqrt(n)*(2 ell) <= 2n*ell, collapse steps fit the budget";
            c.pass = radius_ok && margin_ok;
            if (!c.pass) {
                std::ostringstream os;
                os << "radius=" << b.radius << " margin=" << BigInt(L - steps_bound).str();
                c.witness = os.str();
            }
            rec.claims.push_back(c);
        }

        bool skipped = false;
        BigInt depth_lb = 0;
        std::uint64_t tag_id = 0;
        int nil_index = 0;
        if (termwise) {
            // No powering has happened yet, so the literal representation is
            // intact and the sub-support is the first-wins assignment.
            rec.enumerated = true;
            std::vector<ExpVec> region;
            for (std::size_t t = 0; t < lattice.size(); ++t)
                if (assign[t] == static_cast<int>(i) - 1) region.push_back(lattice[t]);
            if (region.empty()) {
                skipped = true;
            } else {
                ExpVec anchor = *std::min_element(region.begin(), region.end());
                CollapseResult col = collapse_piece(rep, region, anchor, oracle, alloc);
                depth_lb = col.tag.depth;
                tag_id = col.tag.id;
                nil_index = col.nil_index;
                termwise = false;
            }
        } else {
            std::optional<std::vector<ExpVec>> region;
            if (ell <= BigInt(std::int64_t(1) << 40) && lam <= BigInt(std::int64_t(1) << 50)) {
                region = enumerate_scaled_region(Ki, ell.convert_to<std::int64_t>(),
                                                 lam.convert_to<std::int64_t>(), params.tol);
            }
            if (region) {
                rec.enumerated = true;
                if (region->empty()) {
                    skipped = true; // the paper's "if w is zero, proceed"
                } else {
                    const ExpVec anchor = *std::min_element(region->begin(), region->end());
                    std::int64_t max_steps = 0;
                    for (const ExpVec& v : *region)
                        max_steps = std::max(max_steps, v.l1_distance(anchor) / 2);
                    rec.claims.push_back(
                        bigint_claim("exact collapse steps within the enumerated region fit n*ell",
                                     BigInt(max_steps) <= BigInt(n) * ell, BigInt(max_steps),
                                     BigInt(n) * ell));
                    depth_lb = L - max_steps;
                    CoeffTag tag = alloc.fresh(depth_lb);
                    tag_id = tag.id;
                    nil_index = oracle.index_for(tag);
                }
            } else {
                // Symbolic collapse; steps bounded by n*ell via the diameter
                // chain. Treated as populated: collapsing an empty region is
                // vacuous, skipping a populated one would not be.
                depth_lb = L - BigInt(n) * ell;
                CoeffTag tag = alloc.fresh(depth_lb);
                tag_id = tag.id;
                nil_index = oracle.index_for(tag);
            }
        }

        rec.skipped = skipped;
        if (!skipped) {
            rec.collapsed_depth_lb = depth_lb;
            rec.tag_id = tag_id;
            rec.nil_index = nil_index;
            const BigInt l_i = l_prev * m * nil_index; // paper: l_i = l_{i-1} m k_i, l_0 = 1
            rec.l_i = l_i;
            ell *= l_i;
            lam *= l_i;
            J *= l_i;
            L = J + 1;
            l_prev = l_i;
            rec.claims.push_back(bigint_claim(
                "exponent recurrences: J = 2n*l1...li and lambda = m*l1...li as exact integers",
                J == BigInt(2) * n * ell && lam == BigInt(m) * ell, J, BigInt(2) * n * ell));
        } else {
            rec.l_i = 1;
        }
        rec.lambda = lam;
        rec.J_exp = J;
        rec.L_exp = L;

        const bool ok = rec.all_pass();
        if (!ok) {
            for (const Claim& c : rec.claims)
                if (!c.pass) { fail(c); break; }
        }
        trace.stages.push_back(std::move(rec));
        if (!ok) return trace;
    }

    // Final collapse: all remaining support sits in the scaled last piece and
    // the oracle declares the single coefficient nilpotent.
    FinalRecord fin;
    fin.piece = static_cast<int>(mu);
    fin.scale_ell = ell;
    fin.claims.push_back(bigint_claim("final depth budget covers the single-piece collapse",
                                      L - BigInt(n) * ell >= 1, L, BigInt(n) * ell + 1));
    if (termwise) {
        fin.enumerated = true;
        std::vector<ExpVec> region;
        for (std::size_t t = 0; t < lattice.size(); ++t)
            if (assign[t] == static_cast<int>(mu) - 1) region.push_back(lattice[t]);
        if (region.empty()) {
            Claim c;
            c.text = "final region populated";
            c.pass = false;
            c.witness = "no lattice points assigned to the final piece";
            fin.claims.push_back(c);
        } else {
            ExpVec anchor = *std::min_element(region.begin(), region.end());
            CollapseResult col = collapse_piece(rep, region, anchor, oracle, alloc);
            fin.depth_lb = col.tag.depth;
            fin.tag_id = col.tag.id;
            fin.nil_index = col.nil_index;
        }
    } else {
        fin.depth_lb = L - BigInt(n) * ell;
        CoeffTag tag = alloc.fresh(fin.depth_lb);
        fin.tag_id = tag.id;
        fin.nil_index = oracle.index_for(tag);
    }
    for (const Claim& c : fin.claims) {
        if (!c.pass) { fail(c); break; }
    }
    const bool final_ok = [&] {
        for (const Claim& c : fin.claims)
            if (!c.pass) return false;
        return true;
    }();
    trace.final_collapse = std::move(fin);
    trace.contradiction =
        final_ok && trace.failure.empty() && trace.final_collapse.nil_index >= 1;
    return trace;
}

// ---- brute force ----------------------------------------------------------

namespace {

using TermKey = std::pair<ExpVec, std::int64_t>; // (vector, w-factor count)

void insert_min(std::map<TermKey, std::int64_t>& acc, TermKey key, std::int64_t depth) {
    auto [it, fresh] = acc.emplace(std::move(key), depth);
    if (!fresh) it->second = std::min(it->second, depth);
}

// One full power expansion with a nilpotency cutoff: products containing
// >= cutoff w-factors vanish (w^k = 0). Homogeneous base assumed.
std::vector<ExpandedTerm> convolve_power(const std::vector<ExpandedTerm>& base, std::int64_t l,
                                         std::int64_t cutoff, std::size_t term_cap) {
    std::map<TermKey, std::int64_t> acc;
    for (const ExpandedTerm& t : base)
        if (t.w_factors < cutoff) insert_min(acc, {t.vec, t.w_factors}, t.depth);
    for (std::int64_t step = 1; step < l; ++step) {
        std::map<TermKey, std::int64_t> next;
        for (const auto& [key, depth] : acc) {
            for (const ExpandedTerm& b : base) {
                const std::int64_t w = key.second + b.w_factors;
                if (w >= cutoff) continue;
                ExpVec v = key.first;
                for (std::size_t c = 0; c < v.e.size(); ++c) v.e[c] += b.vec.e[c];
                insert_min(next, {std::move(v), w}, depth + b.depth);
            }
            if (next.size() > term_cap)
                throw std::runtime_error("brute_force_expand: term cap exceeded");
        }
        acc = std::move(next);
    }
    std::vector<ExpandedTerm> out;
    out.reserve(acc.size());
    for (const auto& [key, depth] : acc) out.push_back({key.first, depth, key.second});
    return out;
}

} // namespace

std::vector<ExpandedTerm> expand_power(const std::vector<ExpandedTerm>& base, std::int64_t l,
                                       std::size_t term_cap) {
    if (l < 1) throw std::invalid_argument("expand_power: l must be >= 1");
    return convolve_power(base, l, std::numeric_limits<std::int64_t>::max(), term_cap);
}

Expansion brute_force_expand(int n, std::int64_t m, int k, int stage_limit,
                             const PeelParams& params, std::size_t term_cap) {
    if (n < 2 || n > 3 || m < 1 || m > 8 || k < 1 || k > 4 || stage_limit < 1 || stage_limit > 2)
        throw std::invalid_argument(
            "brute_force_expand: parameters out of the tiny range the expansion supports");

    Expansion exp;
    exp.n = n;
    exp.m = m;
    exp.k = k;

    NilOracle oracle;
    oracle.kind = NilOracle::Kind::Constant;
    oracle.k = k;
    ProofTrace trace = run_main_proof(n, m, oracle, params);

    Polytope P = simplex_polytope(n, m, params.tol);
    PeelDecomposition dec = peel(P, params);
    std::vector<ExpVec> lattice = simplex_lattice(n, m);
    std::vector<int> assign = assign_pieces(lattice, dec);
    const std::size_t mu = dec.pieces.size();
    exp.mu = mu;

    if (mu == 1) {
        exp.agrees_with_trace = trace.contradiction && trace.stages.empty();
        exp.detail = "single piece; the final collapse is immediate";
        return exp;
    }

    const std::int64_t depth0 = 2 * n + 1;
    TagAllocator alloc;

    // Current literal terms (vec, depth, is-w marker folded into w_factors).
    std::vector<ExpandedTerm> current;
    for (const ExpVec& v : lattice) current.push_back({v, depth0, 0});
    std::int64_t ell = 1; // l_1 ... l_{s-1}

    exp.agrees_with_trace = true;
    const int max_stage = std::min<int>(stage_limit, static_cast<int>(mu) - 1);
    for (int s = 1; s <= max_stage; ++s) {
        const StageRecord& rec = trace.stages[static_cast<std::size_t>(s - 1)];
        ExpansionStage st;
        st.stage = s;
        st.k = k;

        // Split current terms into the piece-s region (w) and the rest (q).
        Polytope scaled_piece = scale(dec.pieces[static_cast<std::size_t>(s - 1)].body,
                                      static_cast<double>(ell));
        std::vector<ExpandedTerm> region, rest;
        for (const ExpandedTerm& t : current) {
            bool in_region;
            if (s == 1) {
                // match the first-wins assignment exactly at scale 1
                const auto it = std::find(lattice.begin(), lattice.end(), t.vec);
                in_region = it != lattice.end() &&
                            assign[static_cast<std::size_t>(it - lattice.begin())] == s - 1;
            } else {
                in_region = scaled_piece.contains_point(t.vec.to_point(), params.tol * 16.0);
            }
            (in_region ? region : rest).push_back(t);
        }

        if (region.empty()) {
            st.l = 1;
            st.terms = current;
            st.claimed_budget = 2 * n * ell + 1;
            st.min_depth = std::numeric_limits<std::int64_t>::max();
            for (const ExpandedTerm& t : current) st.min_depth = std::min(st.min_depth, t.depth);
            st.depth_sufficient = st.min_depth >= st.claimed_budget;
            Polytope SP = scale(dec.remainders[static_cast<std::size_t>(s - 1)],
                                static_cast<double>(ell));
            st.support_contained = true;
            for (const ExpandedTerm& t : current)
                if (!SP.contains_point(t.vec.to_point(), params.tol * 64.0)) {
                    st.support_contained = false;
                    break;
                }
            if (!rec.skipped) {
                exp.agrees_with_trace = false;
                exp.detail = "stage " + std::to_string(s) + ": expansion found w = 0 but the trace collapsed";
            }
            exp.stages.push_back(std::move(st));
            continue;
        }
        if (rec.skipped) {
            exp.agrees_with_trace = false;
            exp.detail = "stage " + std::to_string(s) + ": trace skipped but the expansion found support";
            exp.stages.push_back(std::move(st));
            break;
        }

        // Collapse w onto its lexicographically least vector; the collapse
        // cost per term is the rewrite_to step count.
        ExpVec anchor = region.front().vec;
        for (const ExpandedTerm& t : region) anchor = std::min(anchor, t.vec);
        std::int64_t w_depth = std::numeric_limits<std::int64_t>::max();
        for (const ExpandedTerm& t : region)
            w_depth = std::min(w_depth, t.depth - t.vec.l1_distance(anchor) / 2);
        if (w_depth < 0) {
            exp.agrees_with_trace = false;
            exp.detail = "stage " + std::to_string(s) + ": depth shortfall collapsing the region";
            exp.stages.push_back(std::move(st));
            break;
        }

        const std::int64_t l_s = ell * m * k;
        st.l = l_s;
        if (BigInt(l_s) != rec.l_i) {
            exp.agrees_with_trace = false;
            exp.detail = "stage " + std::to_string(s) + ": power l_i differs from the trace";
        }

        std::vector<ExpandedTerm> base = rest;
        base.push_back({anchor, w_depth, 1});
        std::vector<ExpandedTerm> powered = convolve_power(base, l_s, k, term_cap);

        // Support rewrite: w^t blocks move onto y0^t for a fixed q-monomial
        // y0; the ideal trade spends ell * t * m depth.
        if (rest.empty()) {
            // q = 0: every surviving product needs < k w-factors out of l_s
            // factors, impossible, so the power collapses to zero terms.
            st.terms.clear();
            st.support_contained = true;
            st.min_depth = std::numeric_limits<std::int64_t>::max();
            st.claimed_budget = 2 * n * l_s * ell + 1;
            st.depth_sufficient = true;
        } else {
            ExpVec y0 = rest.front().vec;
            for (const ExpandedTerm& t : rest) y0 = std::min(y0, t.vec);
            std::map<TermKey, std::int64_t> rewritten;
            for (const ExpandedTerm& t : powered) {
                ExpVec v = t.vec;
                for (std::size_t c = 0; c < v.e.size(); ++c)
                    v.e[c] += t.w_factors * (y0.e[c] - anchor.e[c]);
                insert_min(rewritten, {std::move(v), 0}, t.depth - ell * t.w_factors * m);
            }
            st.terms.clear();
            for (const auto& [key, depth] : rewritten) st.terms.push_back({key.first, depth, 0});

            // suffix polytope of stage s is remainders[s-1], scaled by l_1..l_s
            const std::int64_t ell_next = ell * l_s;
            Polytope SP = scale(dec.remainders[static_cast<std::size_t>(s - 1)],
                                static_cast<double>(ell_next));
            st.support_contained = true;
            for (const ExpandedTerm& t : st.terms) {
                if (!SP.contains_point(t.vec.to_point(), params.tol * 64.0)) {
                    st.support_contained = false;
                    break;
                }
            }
            st.min_depth = std::numeric_limits<std::int64_t>::max();
            for (const ExpandedTerm& t : st.terms) st.min_depth = std::min(st.min_depth, t.depth);
            st.claimed_budget = 2 * n * ell_next + 1;
            if (BigInt(st.claimed_budget) != rec.L_exp) {
                exp.agrees_with_trace = false;
                exp.detail = "stage " + std::to_string(s) + ": L-exponent differs from the trace";
            }
            st.depth_sufficient = st.min_depth >= st.claimed_budget;
        }
        if (!st.support_contained || !st.depth_sufficient) {
            exp.agrees_with_trace = false;
            exp.detail = "stage " + std::to_string(s) + ": expansion refutes a symbolic claim";
        }
        current = st.terms;
        ell *= l_s;
        exp.stages.push_back(std::move(st));
        if (current.empty()) break;
    }
    if (exp.detail.empty())
        exp.detail = exp.agrees_with_trace ? "expansion agrees with the symbolic claims"
                                           : "disagreement detected";
    return exp;
}

} // namespace peelkit::sim
