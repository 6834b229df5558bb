#ifndef PEELKIT_PEELING_HPP
#define PEELKIT_PEELING_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "peelkit/polytope.hpp"

namespace peelkit {

/// A verification step of the construction itself failed (tolerance breach),
/// as opposed to malformed input.
struct CertificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PeelParams {
    double rho = 1.0;  // target piece radius
    double tol = 1e-9;
    int max_stages = 1000000;
    std::uint64_t seed = 0;
    int coverage_samples = 10000;
    int suffix_samples = 1000;
};

struct PeelPiece {
    Polytope body;
    int stage = 1;
    // Generating hyperplane in ambient coordinates; absent only for the
    // final remainder.
    std::optional<Hyperplane> cut_plane;
    int order_index = 0; // 1-based position in the decomposition
};

/// Output of the peeling construction: ordered pieces K_1..K_mu, the running
/// remainder recorded after every cut (ending with the final remainder, which
/// equals the last piece), and the radius schedule.
struct PeelDecomposition {
    PeelParams params;
    std::vector<PeelPiece> pieces;
    std::vector<Polytope> remainders;
    double gamma = 0.0;          // 0 when the input already fits in a rho-ball
    double initial_radius = 0.0; // R, radius of the smallest bounding ball
    Vec center;                  // O in ambient coordinates
    std::vector<double> stage_radii; // (1 - s*gamma)*R for s = 1..S
};

struct PeelCoverageReport {
    bool pass = false;
    int samples = 0;
    int hits = 0;
    std::vector<Vec> witnesses; // ambient points not covered (capped)
};

struct PeelRadiiReport {
    bool pass = false;
    double max_radius = 0.0;
    double limit = 0.0;
    int worst_piece = -1; // 1-based order index
};

struct PeelSuffixReport {
    bool pass = false;
    int checked = 0;
    int first_failure = 0; // 1-based nu, 0 if none
    std::string detail;
    std::vector<Vec> witnesses;
};

struct PieceReport {
    int order_index = 0;
    int stage = 0;
    double radius = 0.0;
    std::size_t vertices = 0;
    bool ok = false;
};

struct PeelCertificate {
    PeelCoverageReport covers;
    PeelRadiiReport piece_radii;
    PeelSuffixReport suffix_convex;
    std::vector<PieceReport> per_piece;
    bool pass = false;
};

/// gamma with (1-2*gamma)*R the distance from the sphere center to the
/// radical hyperplane of the bounding sphere and a sphere of radius rho/2
/// centered on its boundary: gamma = rho^2 / (16 R^2).
double cap_gamma(double R, double rho);

/// Theorem-N construction: peel P into pieces bounded by balls of radius
/// rho, every suffix union convex. Deterministic given params.
PeelDecomposition peel(const Polytope& P, const PeelParams& params);

/// Independent certifier: coverage by sampling, per-piece enclosing-ball
/// radii, and suffix convexity against the recorded remainders.
PeelCertificate certify_peel(const Polytope& P, const PeelDecomposition& dec,
                             const PeelParams& params);

struct DiameterReport {
    double max_l2 = 0.0;
    double max_l1 = 0.0;
    double bound_l2 = 0.0; // 2 * ell * rho * (1+tol)
    double bound_l1 = 0.0; // 2 * n * ell * rho * (1+tol)
    bool pass = false;
};

/// Vertex-pair diameter check of the ell-scaled piece against the
/// l2 <= 2*ell*rho and l1 <= 2*n*ell*rho bounds (ambient norms).
DiameterReport distance_diameter_check(const PeelPiece& piece, int ell, int n,
                                       double rho = 1.0, double tol = 1e-9);

} // namespace peelkit

#endif
