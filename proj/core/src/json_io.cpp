#include "peelkit/json_io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "peelkit/enclosing_ball.hpp"

namespace peelkit {
namespace {

using nlohmann::json;

constexpr int kIndent = 2;
constexpr std::size_t kBigIntDigitCap = 4096;

std::string dump(const json& j) { return j.dump(kIndent) + "\n"; }

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vec vec_from_json(const json& a, const char* field) {
    if (!a.is_array()) throw std::runtime_error(std::string("invalid field: ") + field);
    Vec v(static_cast<int>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) throw std::runtime_error(std::string("invalid field: ") + field);
        v[static_cast<int>(i)] = a[i].get<double>();
    }
    return v;
}

// Big exponents: exact decimal text while printable, a bit-length digest
// beyond (trace files grow quadratically with the stage count otherwise).
json bigint_to_json(const sim::BigInt& x) {
    if (x == 0) return "0";
    const auto bits = boost::multiprecision::msb(x) + 1;
    if (static_cast<double>(bits) * 0.30103 + 1 <= static_cast<double>(kBigIntDigitCap))
        return x.str();
    json j;
    j["bits"] = static_cast<std::uint64_t>(bits);
    std::ostringstream os;
    os << std::hex << (x & 0xFFFFFFFFFFFFFFFFull).convert_to<std::uint64_t>();
    j["tail64"] = os.str();
    return j;
}

json halfspace_to_json(const Vec& normal, double offset) {
    json j;
    j["normal"] = vec_to_json(normal);
    j["offset"] = offset;
    return j;
}

json polytope_to_json_obj(const Polytope& P) {
    json j;
    j["dim"] = P.ambient_dim();
    j["tol"] = P.tol;
    std::vector<Vec> amb = P.vertices_ambient();
    std::sort(amb.begin(), amb.end(), lex_less);
    json verts = json::array();
    for (const Vec& v : amb) verts.push_back(vec_to_json(v));
    j["vertices"] = std::move(verts);
    json hs = json::array();
    for (const Halfspace& f : P.facets) {
        Vec n = P.hull.basis() * f.normal;
        hs.push_back(halfspace_to_json(n, f.offset + n.dot(P.hull.base())));
    }
    j["halfspaces"] = std::move(hs);
    return j;
}

Polytope polytope_from_json_obj(const json& j) {
    if (!j.is_object()) throw std::runtime_error("polytope: not a JSON object");
    if (!j.contains("vertices")) throw std::runtime_error("polytope: missing field: vertices");
    double tol = kDefaultTol;
    if (j.contains("tol")) {
        if (!j["tol"].is_number()) throw std::runtime_error("polytope: invalid field: tol");
        tol = j["tol"].get<double>();
        if (!(tol > 0.0)) throw std::runtime_error("polytope: invalid field: tol");
    }
    std::vector<Vec> pts;
    for (const json& row : j["vertices"]) pts.push_back(vec_from_json(row, "vertices"));
    if (pts.empty()) throw std::runtime_error("polytope: invalid field: vertices (empty)");
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer() ||
            j["dim"].get<int>() != static_cast<int>(pts[0].size()))
            throw std::runtime_error("polytope: invalid field: dim");
    }
    for (const Vec& p : pts)
        if (!finite(p)) throw std::runtime_error("polytope: invalid field: vertices (non-finite)");
    Polytope P = from_vertices(pts, tol);
    if (j.contains("halfspaces")) {
        const double eps = tol * (1.0 + P.coord_scale()) * 100.0;
        for (const json& h : j["halfspaces"]) {
            if (!h.is_object() || !h.contains("normal") || !h.contains("offset"))
                throw std::runtime_error("polytope: invalid field: halfspaces");
            Vec n = vec_from_json(h["normal"], "halfspaces.normal");
            const double b = h["offset"].get<double>();
            for (const Vec& p : pts) {
                if (n.dot(p) - b > eps)
                    throw std::runtime_error(
                        "polytope: invalid field: halfspaces (vertex violates provided system)");
            }
        }
    }
    return P;
}

json params_to_json(const PeelParams& p) {
    json j;
    j["rho"] = p.rho;
    j["tol"] = p.tol;
    j["max_stages"] = p.max_stages;
    j["seed"] = p.seed;
    j["coverage_samples"] = p.coverage_samples;
    j["suffix_samples"] = p.suffix_samples;
    return j;
}

PeelParams params_from_json(const json& j) {
    PeelParams p;
    if (j.contains("rho")) p.rho = j["rho"].get<double>();
    if (j.contains("tol")) p.tol = j["tol"].get<double>();
    if (j.contains("max_stages")) p.max_stages = j["max_stages"].get<int>();
    if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("coverage_samples")) p.coverage_samples = j["coverage_samples"].get<int>();
    if (j.contains("suffix_samples")) p.suffix_samples = j["suffix_samples"].get<int>();
    return p;
}

json claim_to_json(const sim::Claim& c) {
    json j;
    j["text"] = c.text;
    j["pass"] = c.pass;
    j["witness"] = c.witness;
    return j;
}

} // namespace

std::string polytope_to_json(const Polytope& P) { return dump(polytope_to_json_obj(P)); }

Polytope polytope_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("polytope: malformed JSON: ") + e.what());
    }
    return polytope_from_json_obj(j);
}

std::string decomposition_to_json(const PeelDecomposition& dec) {
    json j;
    j["params"] = params_to_json(dec.params);
    j["gamma"] = dec.gamma;
    j["initial_radius"] = dec.initial_radius;
    j["center"] = vec_to_json(dec.center);
    j["stage_radii"] = dec.stage_radii;
    json pieces = json::array();
    for (const PeelPiece& pc : dec.pieces) {
        json p;
        p["stage"] = pc.stage;
        p["order"] = pc.order_index;
        p["cut_plane"] = pc.cut_plane
                             ? halfspace_to_json(pc.cut_plane->normal, pc.cut_plane->offset)
                             : json(nullptr);
        p["polytope"] = polytope_to_json_obj(pc.body);
        pieces.push_back(std::move(p));
    }
    j["pieces"] = std::move(pieces);
    json rem = json::array();
    for (const Polytope& r : dec.remainders) rem.push_back(polytope_to_json_obj(r));
    j["remainders"] = std::move(rem);
    return dump(j);
}

PeelDecomposition decomposition_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("decomposition: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("decomposition: not a JSON object");
    PeelDecomposition dec;
    if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
        throw std::runtime_error("decomposition: missing field: pieces");
    dec.params = j.contains("params") ? params_from_json(j["params"]) : PeelParams{};
    if (!j.contains("gamma")) throw std::runtime_error("decomposition: missing field: gamma");
    dec.gamma = j["gamma"].get<double>();
    if (j.contains("initial_radius")) dec.initial_radius = j["initial_radius"].get<double>();
    if (j.contains("center")) dec.center = vec_from_json(j["center"], "center");
    if (j.contains("stage_radii"))
        dec.stage_radii = j["stage_radii"].get<std::vector<double>>();
    for (const json& p : j["pieces"]) {
        PeelPiece pc;
        if (!p.contains("polytope")) throw std::runtime_error("decomposition: piece missing field: polytope");
        pc.body = polytope_from_json_obj(p["polytope"]);
        pc.stage = p.contains("stage") ? p["stage"].get<int>() : 1;
        pc.order_index = p.contains("order") ? p["order"].get<int>() : 0;
        if (p.contains("cut_plane") && !p["cut_plane"].is_null()) {
            Hyperplane h;
            h.normal = vec_from_json(p["cut_plane"]["normal"], "cut_plane.normal");
            h.offset = p["cut_plane"]["offset"].get<double>();
            pc.cut_plane = std::move(h);
        }
        dec.pieces.push_back(std::move(pc));
    }
    if (!j.contains("remainders") || !j["remainders"].is_array() || j["remainders"].empty())
        throw std::runtime_error("decomposition: missing field: remainders");
    for (const json& r : j["remainders"]) dec.remainders.push_back(polytope_from_json_obj(r));
    if (dec.center.size() == 0) {
        // Reconstructable: the union of the pieces is the original polytope.
        std::vector<Vec> all;
        for (const PeelPiece& pc : dec.pieces)
            for (const Vec& v : pc.body.verts) all.push_back(pc.body.hull.embed(v));
        Ball b = min_enclosing_ball(all, dec.params.tol);
        dec.center = b.center;
        dec.initial_radius = b.radius;
    }
    return dec;
}

std::string certificate_to_json(const PeelCertificate& cert) {
    json j;
    j["pass"] = cert.pass;
    {
        json c;
        c["pass"] = cert.covers.pass;
        c["samples"] = cert.covers.samples;
        c["hits"] = cert.covers.hits;
        json w = json::array();
        for (const Vec& x : cert.covers.witnesses) w.push_back(vec_to_json(x));
        c["witnesses"] = std::move(w);
        j["covers"] = std::move(c);
    }
    {
        json c;
        c["pass"] = cert.piece_radii.pass;
        c["max_radius"] = cert.piece_radii.max_radius;
        c["limit"] = cert.piece_radii.limit;
        c["worst_piece"] = cert.piece_radii.worst_piece;
        j["piece_radii"] = std::move(c);
    }
    {
        json c;
        c["pass"] = cert.suffix_convex.pass;
        c["checked"] = cert.suffix_convex.checked;
        c["first_failure"] = cert.suffix_convex.first_failure;
        c["detail"] = cert.suffix_convex.detail;
        json w = json::array();
        for (const Vec& x : cert.suffix_convex.witnesses) w.push_back(vec_to_json(x));
        c["witnesses"] = std::move(w);
        j["suffix_convex"] = std::move(c);
    }
    json per = json::array();
    for (const PieceReport& r : cert.per_piece) {
        json p;
        p["order"] = r.order_index;
        p["stage"] = r.stage;
        p["radius"] = r.radius;
        p["vertices"] = r.vertices;
        p["ok"] = r.ok;
        per.push_back(std::move(p));
    }
    j["per_piece"] = std::move(per);
    return dump(j);
}

std::string trace_to_json(const sim::ProofTrace& trace) {
    json j;
    j["n"] = trace.n;
    j["m"] = trace.m;
    {
        json o;
        o["kind"] = trace.oracle.kind == sim::NilOracle::Kind::Constant ? "const" : "random";
        o["k"] = trace.oracle.k;
        o["max_index"] = trace.oracle.max_index;
        o["seed"] = trace.oracle.seed;
        j["oracle"] = std::move(o);
    }
    j["peel_ref"] = trace.peel_ref;
    json stages = json::array();
    for (const sim::StageRecord& r : trace.stages) {
        json s;
        s["i"] = r.i;
        s["piece"] = r.piece;
        s["skipped"] = r.skipped;
        s["enumerated"] = r.enumerated;
        s["scale_ell"] = bigint_to_json(r.scale_ell);
        s["l_i"] = bigint_to_json(r.l_i);
        s["lambda"] = bigint_to_json(r.lambda);
        s["J_exp"] = bigint_to_json(r.J_exp);
        s["L_exp"] = bigint_to_json(r.L_exp);
        s["epsilon"] = bigint_to_json(r.epsilon);
        s["collapsed_depth_lb"] = bigint_to_json(r.collapsed_depth_lb);
        s["tag"] = r.tag_id;
        s["nil_index"] = r.nil_index;
        json cl = json::array();
        for (const sim::Claim& c : r.claims) cl.push_back(claim_to_json(c));
        s["claims"] = std::move(cl);
        stages.push_back(std::move(s));
    }
    j["stages"] = std::move(stages);
    {
        json f;
        f["piece"] = trace.final_collapse.piece;
        f["enumerated"] = trace.final_collapse.enumerated;
        f["scale_ell"] = bigint_to_json(trace.final_collapse.scale_ell);
        f["depth_lb"] = bigint_to_json(trace.final_collapse.depth_lb);
        f["tag"] = trace.final_collapse.tag_id;
        f["nil_index"] = trace.final_collapse.nil_index;
        json cl = json::array();
        for (const sim::Claim& c : trace.final_collapse.claims) cl.push_back(claim_to_json(c));
        f["claims"] = std::move(cl);
        j["final"] = std::move(f);
    }
    j["contradiction"] = trace.contradiction;
    j["failure"] = trace.failure;
    return dump(j);
}

std::string expansion_to_json(const sim::Expansion& expansion) {
    constexpr std::size_t kTermCap = 50000;
    json j;
    j["n"] = expansion.n;
    j["m"] = expansion.m;
    j["k"] = expansion.k;
    j["mu"] = expansion.mu;
    j["agrees_with_trace"] = expansion.agrees_with_trace;
    j["detail"] = expansion.detail;
    json stages = json::array();
    for (const sim::ExpansionStage& st : expansion.stages) {
        json s;
        s["stage"] = st.stage;
        s["l"] = st.l;
        s["k"] = st.k;
        s["support_contained"] = st.support_contained;
        s["min_depth"] = st.min_depth == std::numeric_limits<std::int64_t>::max()
                             ? json(nullptr)
                             : json(st.min_depth);
        s["claimed_budget"] = st.claimed_budget;
        s["depth_sufficient"] = st.depth_sufficient;
        s["term_count"] = st.terms.size();
        json terms = json::array();
        const std::size_t limit = std::min(st.terms.size(), kTermCap);
        for (std::size_t i = 0; i < limit; ++i) {
            json t;
            t["vec"] = st.terms[i].vec.e;
            t["depth"] = st.terms[i].depth;
            terms.push_back(std::move(t));
        }
        s["terms"] = std::move(terms);
        s["terms_truncated"] = st.terms.size() > kTermCap;
        stages.push_back(std::move(s));
    }
    j["stages"] = std::move(stages);
    return dump(j);
}

std::string reformat_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed JSON: ") + e.what());
    }
    return dump(j);
}

} // namespace peelkit
