#include "peelkit/svg_render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "peelkit/enclosing_ball.hpp"

namespace peelkit {
namespace {

// Locale-independent fixed formatting.
std::string fmt(double x, int precision = 4) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

std::string stage_fill(int stage, int max_stage) {
    const double f = max_stage <= 1 ? 0.0 : static_cast<double>(stage - 1) / (max_stage - 1);
    const int r = static_cast<int>(std::lround(232.0 + f * (42.0 - 232.0)));
    const int g = static_cast<int>(std::lround(240.0 + f * (80.0 - 240.0)));
    const int b = static_cast<int>(std::lround(252.0 + f * (140.0 - 252.0)));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace

std::string render_decomposition_svg(const PeelDecomposition& dec, int width, int height,
                                     double stroke_scale) {
    if (dec.pieces.empty()) throw std::invalid_argument("render: empty decomposition");
    if (width < 16 || height < 16 || !(stroke_scale > 0.0))
        throw std::invalid_argument("render: bad viewport parameters");

    // Common 2-d frame from the union of the piece vertices.
    std::vector<Vec> all;
    for (const PeelPiece& pc : dec.pieces)
        for (const Vec& v : pc.body.verts) all.push_back(pc.body.hull.embed(v));
    AffineHull frame = affine_hull(all, dec.params.tol);
    if (frame.dim() != 2)
        throw std::invalid_argument("render: SVG output requires a 2-dimensional hull");

    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    std::vector<std::vector<Vec>> polys; // projected, angle-ordered
    int max_stage = 1;
    for (const PeelPiece& pc : dec.pieces) {
        std::vector<Vec> pts;
        Vec centroid = Vec::Zero(2);
        for (const Vec& v : pc.body.verts) {
            Vec p = frame.project(pc.body.hull.embed(v));
            centroid += p;
            pts.push_back(std::move(p));
        }
        centroid /= static_cast<double>(pts.size());
        std::sort(pts.begin(), pts.end(), [&](const Vec& a, const Vec& b) {
            const double aa = std::atan2(a[1] - centroid[1], a[0] - centroid[0]);
            const double ab = std::atan2(b[1] - centroid[1], b[0] - centroid[0]);
            if (aa != ab) return aa < ab;
            return lex_less(a, b);
        });
        for (const Vec& p : pts) {
            lo_x = std::min(lo_x, p[0]);
            hi_x = std::max(hi_x, p[0]);
            lo_y = std::min(lo_y, p[1]);
            hi_y = std::max(hi_y, p[1]);
        }
        max_stage = std::max(max_stage, pc.stage);
        polys.push_back(std::move(pts));
    }
    const double margin = 12.0;
    const double sx = (width - 2 * margin) / std::max(hi_x - lo_x, 1e-12);
    const double sy = (height - 2 * margin) / std::max(hi_y - lo_y, 1e-12);
    const double sc = std::min(sx, sy);
    auto map_x = [&](double x) { return margin + (x - lo_x) * sc; };
    auto map_y = [&](double y) { return height - margin - (y - lo_y) * sc; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const PeelPiece& pc = dec.pieces[i];
        svg << "  <path d=\"";
        for (std::size_t v = 0; v < polys[i].size(); ++v) {
            svg << (v == 0 ? "M" : "L") << fmt(map_x(polys[i][v][0])) << ","
                << fmt(map_y(polys[i][v][1]));
        }
        svg << "Z\" fill=\"" << stage_fill(pc.stage, max_stage)
            << "\" stroke=\"#1a1a1a\" stroke-width=\"" << fmt(0.8 * stroke_scale, 3) << "\"/>\n";
    }
    // Cut hyperplanes clipped to the drawing box.
    for (const PeelPiece& pc : dec.pieces) {
        if (!pc.cut_plane) continue;
        Vec n2 = frame.basis().transpose() * pc.cut_plane->normal;
        const double nn = n2.norm();
        if (nn < 1e-12) continue;
        n2 /= nn;
        const double b2 = (pc.cut_plane->offset - pc.cut_plane->normal.dot(frame.base())) / nn;
        Vec p0 = n2 * b2;
        Vec dir(2);
        dir[0] = -n2[1];
        dir[1] = n2[0];
        double t_lo = -1e300, t_hi = 1e300;
        auto clip = [&](double d, double p, double lo, double hi) {
            if (std::abs(d) < 1e-15) return std::abs(p - lo) >= 0.0; // parallel, keep
            double t0 = (lo - p) / d, t1 = (hi - p) / d;
            if (t0 > t1) std::swap(t0, t1);
            t_lo = std::max(t_lo, t0);
            t_hi = std::min(t_hi, t1);
            return true;
        };
        clip(dir[0], p0[0], lo_x, hi_x);
        clip(dir[1], p0[1], lo_y, hi_y);
        if (t_lo > t_hi) continue;
        const Vec a = p0 + t_lo * dir;
        const Vec b = p0 + t_hi * dir;
        svg << "  <line x1=\"" << fmt(map_x(a[0])) << "\" y1=\"" << fmt(map_y(a[1]))
            << "\" x2=\"" << fmt(map_x(b[0])) << "\" y2=\"" << fmt(map_y(b[1]))
            << "\" stroke=\"#b03030\" stroke-width=\"" << fmt(0.5 * stroke_scale, 3)
            << "\" stroke-dasharray=\"3,3\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string decomposition_summary_json(const PeelDecomposition& dec) {
    nlohmann::json j;
    j["pieces"] = dec.pieces.size();
    j["gamma"] = dec.gamma;
    j["initial_radius"] = dec.initial_radius;
    j["stage_count"] = dec.stage_radii.size();
    int max_stage = 0;
    double max_radius = 0.0;
    std::map<int, int> per_stage;
    for (const PeelPiece& pc : dec.pieces) {
        max_stage = std::max(max_stage, pc.stage);
        ++per_stage[pc.stage];
        Ball b = min_enclosing_ball(pc.body.verts, dec.params.tol);
        max_radius = std::max(max_radius, b.radius);
    }
    j["max_piece_stage"] = max_stage;
    j["max_piece_radius"] = max_radius;
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& [stage, count] : per_stage) {
        nlohmann::json h;
        h["stage"] = stage;
        h["count"] = count;
        hist.push_back(std::move(h));
    }
    j["pieces_per_stage"] = std::move(hist);
    return j.dump(2) + "\n";
}

} // namespace peelkit
