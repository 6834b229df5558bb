#ifndef PEELKIT_LATTICE_SIM_HPP
#define PEELKIT_LATTICE_SIM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "peelkit/peeling.hpp"

namespace peelkit::sim {

// Stage exponents follow l_i = l_{i-1} * m * k_i and overflow machine words
// within a handful of stages; all budget arithmetic is exact big-integer.
using BigInt = boost::multiprecision::cpp_int;

/// Exponent vector of a monomial; lattice point in Z^n with entries >= 0.
struct ExpVec {
    std::vector<std::int64_t> e;

    int n() const { return static_cast<int>(e.size()); }
    std::int64_t degree() const;
    std::int64_t l1_distance(const ExpVec& other) const;
    Vec to_point() const;

    bool operator==(const ExpVec&) const = default;
    auto operator<=>(const ExpVec&) const = default; // lexicographic
};

/// Opaque coefficient: identity, ideal-depth budget (membership in I^depth;
/// 0 means only R-membership is known), and parent trail for audits.
struct CoeffTag {
    std::uint64_t id = 0;
    BigInt depth = 0;
    std::vector<std::uint64_t> lineage;
};

class TagAllocator {
public:
    CoeffTag fresh(BigInt depth, std::vector<std::uint64_t> lineage = {}) {
        return CoeffTag{next_++, std::move(depth), std::move(lineage)};
    }

private:
    std::uint64_t next_ = 1;
};

/// Formal polynomial representation of 1 as exponent vector -> tag.
struct MonomialRep {
    int n = 0;
    std::map<ExpVec, CoeffTag> terms;

    std::int64_t deg() const;
    std::int64_t min_deg() const;
    std::int64_t length() const { return deg() - min_deg() + 1; }
};

/// Degrees-only projection: degree -> ideal-power class of that graded part.
struct GradedSupport {
    std::map<std::int64_t, std::int64_t> classes;

    bool empty() const { return classes.empty(); }
    std::int64_t deg() const { return classes.rbegin()->first; }
    std::int64_t min_deg() const { return classes.begin()->first; }
    std::int64_t length() const { return deg() - min_deg() + 1; }
};

/// Injected nilpotency rule; the simulator never computes in a ring.
struct NilOracle {
    enum class Kind { Constant, Random };
    Kind kind = Kind::Constant;
    int k = 2;          // constant index
    int max_index = 2;  // Random: uniform in 1..max_index
    std::uint64_t seed = 0;

    int index_for(const CoeffTag& tag) const;
};

/// All multi-indices of degree m in n variables (lex order); count is
/// binom(m+n-1, n-1).
std::vector<ExpVec> simplex_lattice(int n, std::int64_t m);

/// conv{ m e_j : j = 1..n }, carried in the hyperplane sum(x) = m.
Polytope simplex_polytope(int n, std::int64_t m, double tol = 1e-9);

/// First-wins assignment of lattice points to decomposition pieces
/// (0-based piece indices). Throws on an uncovered point.
std::vector<int> assign_pieces(const std::vector<ExpVec>& points, const PeelDecomposition& dec);

using Term = std::pair<ExpVec, CoeffTag>;

/// Exchange move alpha -> alpha - e_i + e_j (0-based coordinates); spends
/// one depth unit. Requires depth >= 1 and alpha_i >= 1.
Term rewrite_step(const Term& term, int i, int j, TagAllocator& alloc);

struct RewriteReport {
    BigInt steps = 0;              // ||alpha - beta||_1 / 2
    std::optional<BigInt> ell;     // scale supplied by the caller
    BigInt paper_bound = 0;        // 2 n ell
    bool paper_sufficient = false; // depth >= 2 n ell
};

/// Move a term to `target` (same degree), spending ||alpha-beta||_1 / 2
/// depth units; optionally reports the coarser 2 n ell sufficiency bound.
Term rewrite_to(const Term& term, const ExpVec& target, TagAllocator& alloc,
                RewriteReport* report = nullptr,
                const std::optional<BigInt>& ell = std::nullopt);

struct CollapseResult {
    ExpVec anchor;
    CoeffTag tag; // depth = min over the rewritten region terms
    int nil_index = 0;
};

/// Rewrite every region term onto the anchor and sum the tags into one
/// fresh tag; the oracle assigns its nilpotency index.
CollapseResult collapse_piece(const MonomialRep& rep, const std::vector<ExpVec>& region,
                              const ExpVec& anchor, const NilOracle& oracle,
                              TagAllocator& alloc);

/// s* = w s_min + (rest of s); min strictly increases, and the length drops
/// whenever deg(w) + min(s) <= deg(s).
GradedSupport star_op(const GradedSupport& s, const GradedSupport& w);

struct Lemma1Result {
    GradedSupport t;
    int iterations = 0;
};

/// Iterate the *-operation until length <= deg(w). Requires min(w) >= 1 and
/// min(s) >= deg(w) (the preprocessing established in the source argument).
Lemma1Result lemma1_reduce(const GradedSupport& s, const GradedSupport& w);

/// Push every term up to the top degree by trading depth for first-coordinate
/// exponent; the result is homogeneous (length 1). Requires per-term depth
/// >= deg(rep) - |alpha| and deg(rep) - |alpha| <= d.
MonomialRep homogenize(const MonomialRep& rep, std::int64_t d, TagAllocator& alloc);

struct Claim {
    std::string text;
    bool pass = false;
    std::string witness; // empty when pass
};

struct StageRecord {
    int i = 0;                 // 1-based stage
    int piece = 0;             // 1-based piece collapsed at this stage
    bool skipped = false;      // empty sub-support ("w" vanished)
    bool enumerated = false;   // region resolved by exact lattice enumeration
    BigInt scale_ell = 1;      // l_1...l_{i-1} entering the stage
    BigInt l_i = 1;            // l_i = l_{i-1} m k_i (1 when skipped)
    BigInt lambda = 0;         // m l_1...l_i after the stage
    BigInt J_exp = 0;          // 2n l_1...l_i after the stage
    BigInt L_exp = 0;          // J_exp + 1
    BigInt epsilon = 0;        // pre-stage L-exponent minus 2n*ell
    BigInt collapsed_depth_lb = 0;
    std::uint64_t tag_id = 0;
    int nil_index = 0;
    std::vector<Claim> claims;

    bool all_pass() const;
};

struct FinalRecord {
    int piece = 0;
    bool enumerated = false;
    BigInt scale_ell = 1;
    BigInt depth_lb = 0;
    std::uint64_t tag_id = 0;
    int nil_index = 0;
    std::vector<Claim> claims;
};

struct ProofTrace {
    int n = 0;
    std::int64_t m = 0;
    NilOracle oracle;
    std::string peel_ref; // content hash of the decomposition artifact
    std::vector<StageRecord> stages;
    FinalRecord final_collapse;
    bool contradiction = false;
    std::string failure; // first failing claim, empty when none
};

/// Staged replay of the main argument: peel the degree-m simplex, seed every
/// coefficient at depth 2n+1, then per stage collapse the scaled piece
/// region, query the nilpotency oracle, raise the budget exponents by the
/// l_i recurrence, and verify the support-containment and depth-sufficiency
/// claims symbolically (integer inequalities plus polytope containment).
ProofTrace run_main_proof(int n, std::int64_t m, const NilOracle& oracle,
                          const PeelParams& params);

// ---- brute-force oracle -------------------------------------------------

struct ExpandedTerm {
    ExpVec vec;
    std::int64_t depth = 0;     // min word depth over merged products
    std::int64_t w_factors = 0; // collapsed-piece factors in the product
};

struct ExpansionStage {
    int stage = 0;
    std::int64_t l = 0;     // power taken at this stage
    std::int64_t k = 0;     // nilpotency cutoff applied
    std::vector<ExpandedTerm> terms; // after the support rewrite
    bool support_contained = false;  // every vector inside l * suffix polytope
    std::int64_t min_depth = 0;
    std::int64_t claimed_budget = 0; // symbolic L-exponent at this stage
    bool depth_sufficient = false;   // min_depth >= claimed_budget
};

struct Expansion {
    int n = 0;
    std::int64_t m = 0;
    int k = 0;
    std::size_t mu = 0;
    std::vector<ExpansionStage> stages;
    bool agrees_with_trace = false;
    std::string detail;
};

/// Literally expand p^{l} with nilpotency cutoffs, tracking depths term by
/// term, and confirm the symbolic claims of run_main_proof at the same
/// parameters. Exponential; intended for tiny n, m, k.
Expansion brute_force_expand(int n, std::int64_t m, int k, int stage_limit,
                             const PeelParams& params, std::size_t term_cap = 1000000);

/// p^l as a support/depth convolution without nilpotency drops; exposed for
/// the "w = 0" oracle path in tests.
std::vector<ExpandedTerm> expand_power(const std::vector<ExpandedTerm>& base, std::int64_t l,
                                       std::size_t term_cap = 1000000);

} // namespace peelkit::sim

#endif
