#include "peelkit/sphere_net.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "peelkit/dd.hpp"

namespace peelkit {
namespace {

constexpr int kGridCap = 20000;
constexpr double kPi = 3.14159265358979323846;

std::vector<Vec> cube_face_grid(int dim, int m) {
    std::vector<Vec> dirs;
    if (dim == 1) {
        Vec a(1), b(1);
        a[0] = 1.0;
        b[0] = -1.0;
        return {a, b};
    }
    const int fdim = dim - 1;
    std::vector<int> counter(static_cast<std::size_t>(fdim), 0);
    for (int axis = 0; axis < dim; ++axis) {
        for (double sign : {1.0, -1.0}) {
            std::fill(counter.begin(), counter.end(), 0);
            while (true) {
                Vec v(dim);
                v[axis] = sign;
                int c = 0;
                for (int i = 0; i < dim; ++i) {
                    if (i == axis) continue;
                    v[i] = -1.0 + (2.0 * counter[static_cast<std::size_t>(c)] + 1.0) / m;
                    ++c;
                }
                dirs.push_back(v / v.norm());
                int pos = 0;
                while (pos < fdim && ++counter[static_cast<std::size_t>(pos)] == m) {
                    counter[static_cast<std::size_t>(pos)] = 0;
                    ++pos;
                }
                if (pos == fdim) break;
            }
        }
    }
    std::sort(dirs.begin(), dirs.end(), lex_less);
    return dirs;
}

// Exact worst gap of a 2-d net (angles on the circle).
double exact_gap_2d(const std::vector<Vec>& dirs) {
    std::vector<double> ang;
    ang.reserve(dirs.size());
    for (const Vec& d : dirs) ang.push_back(std::atan2(d[1], d[0]));
    std::sort(ang.begin(), ang.end());
    double worst = 2.0 * kPi + ang.front() - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i)
        worst = std::max(worst, ang[i] - ang[i - 1]);
    return worst / 2.0;
}

std::vector<Vec> greedy_net(int dim, double theta, std::uint64_t seed) {
    const double target = std::cos(theta * 0.97);
    double est = std::pow(3.0 / theta, dim - 1);
    const int pool_n = static_cast<int>(std::min(200000.0, std::max(30000.0, 30.0 * est)));
    Rng rng(seed);
    Mat pool(pool_n, dim);
    for (int i = 0; i < pool_n; ++i) pool.row(i) = rng.unit_direction(dim).transpose();

    std::vector<Vec> net;
    for (int axis = 0; axis < dim; ++axis) {
        for (double s : {1.0, -1.0}) {
            Vec v = Vec::Zero(dim);
            v[axis] = s;
            net.push_back(v);
        }
    }
    Vec best = Vec::Constant(pool_n, -2.0);
    for (const Vec& d : net) best = best.cwiseMax(pool * d);
    while (true) {
        int worst_i = 0;
        const double worst = best.minCoeff(&worst_i);
        if (worst >= target) break;
        Vec d = pool.row(worst_i).transpose();
        net.push_back(d);
        best = best.cwiseMax(pool * d);
        if (net.size() > 500000) throw std::runtime_error("sphere_net: greedy net failed to converge");
    }
    return net;
}

} // namespace

CoveringCheck covering_check(const std::vector<Vec>& dirs, int dim, double theta,
                             int samples, std::uint64_t seed) {
    CoveringCheck out;
    const double cos_theta = std::cos(theta);
    Rng rng(seed);
    double worst_cos = 2.0;
    for (int s = 0; s < samples; ++s) {
        Vec x = rng.unit_direction(dim);
        double bc = -2.0;
        for (const Vec& d : dirs) {
            const double c = d.dot(x);
            if (c > bc) {
                bc = c;
                if (bc >= cos_theta + 1e-12) break; // already covered
            }
        }
        if (bc < worst_cos) {
            worst_cos = bc;
            out.worst = x;
        }
    }
    out.max_min_angle = std::acos(std::clamp(worst_cos, -1.0, 1.0));
    out.pass = out.max_min_angle <= theta + 1e-12;
    return out;
}

SphereNet sphere_net(int dim, double theta, int cert_samples) {
    if (dim < 1) throw std::invalid_argument("sphere_net: dim must be >= 1");
    if (!(theta > 0.0) || !(theta < kPi / 2.0))
        throw std::invalid_argument("sphere_net: theta must lie in (0, pi/2)");
    SphereNet net;
    net.dim = dim;
    net.theta = theta;
    if (dim == 1) {
        net.dirs = cube_face_grid(1, 1);
        net.certified_max_angle = 0.0;
        return net;
    }
    const std::uint64_t seed =
        Rng::mix(0x5E77E7ull + static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(theta * 1e12));

    if (dim == 2) {
        // Smallest grid whose exact circular gap fits.
        for (int m = 1;; ++m) {
            std::vector<Vec> dirs = cube_face_grid(2, m);
            if (exact_gap_2d(dirs) <= theta + 1e-12) {
                net.dirs = std::move(dirs);
                net.grid_m = m;
                break;
            }
            if (static_cast<int>(dirs.size()) > kGridCap)
                throw std::runtime_error("sphere_net: net construction failure at requested theta");
        }
    } else {
        // Chord bound: a face-grid cell has half-diagonal sqrt(d-1)/m, and two
        // directions at chord distance r (norms >= 1) differ by <= 2 asin(r/2).
        const double half = 2.0 * std::sin(theta / 2.0);
        const int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(dim - 1)) / half));
        double count = 2.0 * dim * std::pow(static_cast<double>(m), dim - 1);
        if (count <= kGridCap) {
            net.dirs = cube_face_grid(dim, m);
            net.grid_m = m;
        } else {
            net.dirs = greedy_net(dim, theta, seed);
            net.randomized = true;
        }
    }

    for (int round = 0;; ++round) {
        CoveringCheck chk = covering_check(net.dirs, dim, theta, cert_samples, Rng::mix(seed, 17));
        net.certified_max_angle = chk.max_min_angle;
        if (chk.pass) break;
        if (round >= 32) throw std::runtime_error("sphere_net: net construction failure at requested theta");
        // Patch the sampled hole and re-certify.
        net.dirs.push_back(chk.worst);
        net.randomized = true;
    }
    std::sort(net.dirs.begin(), net.dirs.end(), lex_less);
    return net;
}

const SphereNet& cached_sphere_net(int dim, double theta) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, SphereNet> cache;
    // Quantize downward on a geometric grid so cached nets cover at least
    // as finely as requested.
    const double theta_max = 1.5;
    int bucket = 0;
    if (theta < theta_max)
        bucket = static_cast<int>(std::ceil(std::log(theta / theta_max) / std::log(0.97)));
    const double theta_q = theta_max * std::pow(0.97, bucket);
    std::scoped_lock lock(mu);
    auto key = std::make_pair(dim, bucket);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, sphere_net(dim, theta_q)).first;
    return it->second;
}

Polytope sandwich_polytope(const Vec& center, double r_inner, double r_outer, int dim,
                           double tol) {
    if (dim < 1) throw std::invalid_argument("sandwich_polytope: dim must be >= 1");
    if (!(r_inner > 0.0) || !(r_inner < r_outer))
        throw std::invalid_argument("sandwich_polytope: need 0 < r_inner < r_outer");
    if (static_cast<int>(center.size()) != dim)
        throw std::invalid_argument("sandwich_polytope: center dimension mismatch");

    double theta = std::acos(r_inner / r_outer);
    for (int attempt = 0; attempt < 3; ++attempt) {
        const SphereNet& net = cached_sphere_net(dim, theta);
        Vec lo = center.array() - 1.25 * r_outer;
        Vec hi = center.array() + 1.25 * r_outer;
        DdBuilder bld(lo, hi, tol);
        for (const Vec& u : net.dirs) {
            const Halfspace h{u, u.dot(center) + r_inner};
            auto outcome = bld.insert(h);
            if (outcome == DdBuilder::Outcome::Empty || outcome == DdBuilder::Outcome::Collapsed)
                throw std::runtime_error("sandwich_polytope: degenerate tangent system");
        }
        Polytope D = bld.snapshot(AffineHull::full(dim), tol);
        const double eps = tol * (1.0 + r_outer) * 4.0;
        bool ok = true;
        for (const Vec& v : D.verts) {
            if ((v - center).norm() > r_outer + eps) { ok = false; break; }
        }
        if (ok) {
            if (!D.contains_ball_hull({center, r_inner}, tol * 4.0))
                throw std::runtime_error("sandwich_polytope: inner tangency violated");
            return D;
        }
        theta *= 0.9; // tighten and retry (sampled nets can leak)
    }
    throw std::runtime_error("sandwich_polytope: net construction failure at requested theta");
}

} // namespace peelkit
