#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "umo/ffgeom.hpp"
#include "umo/gf.hpp"
#include "umo/linalg_k.hpp"
#include "umo/valued.hpp"

namespace umo {

// Extremal set sizes over the residue geometry of K^n.
//
//   delta    largest (k,l)-weakly-orthogonal subset of K^n \ {0}
//   omega    largest (k,l)-feebly-orthogonal family in Gr_{s,n}(K)
//   ind      largest (k,l)-independent subset of F_q^n \ {0}
//   ind_pro  largest (k,l)-pro-independent subset of P^{n-1}(F_q)
//   theta    largest (k,l)-orthogonal subset of K^n \ {0}
//   gamma    largest (k,l)-strongly-orthogonal subset of K^n \ {0}
//
// delta and omega reduce to a profile program over residue fibers, ind,
// ind_pro and theta reduce to cap-constrained searches over the residue
// geometry, and gamma coincides with ind_pro with witnesses lifted to K^n.
enum class Quantity { delta, omega, ind, ind_pro, theta, gamma };

// Wire names: "delta", "omega", "ind", "ind-pro", "theta", "gamma".
std::string_view quantity_name(Quantity x);
Quantity quantity_parse(std::string_view name);

// A single extremal question. s is meaningful for omega only and must be 0
// elsewhere. Parameter ranges:
//   all quantities   q a prime power, n >= 1, k >= l
//   delta, omega     l >= 2; omega additionally 1 <= s <= n
//   theta            2 <= l <= min(k, n)
//   ind              1 <= l <= min(k, n), k <= q^n - 1
//   ind_pro, gamma   1 <= l <= min(k, n), k <= (q^n - 1)/(q - 1); gamma l >= 2
struct ExtremalQuery {
    Quantity quantity = Quantity::delta;
    long long q = 2;
    int n = 1;
    int s = 0;
    int k = 2;
    int l = 2;
};

// Throws Errc::invalid_argument on any parameter outside the table above.
void validate_query(const ExtremalQuery& query);

// Canonical key "quantity,q,n,s,k,l", e.g. "delta,2,3,0,4,2".
std::string query_key(const ExtremalQuery& query);

// Witness payloads.
//
// ProfileWitness holds per-fiber multiplicities in non-increasing order; the
// i-th count applies to the i-th slot of the fiber enumeration (projective
// points for delta, residue subspaces for omega).
//
// PointSetWitness holds ascending point codes, affine for ind and projective
// representative codes for ind_pro and gamma.
//
// MultisetWitness holds (affine point code, multiplicity) pairs with codes
// ascending and multiplicities positive.
struct ProfileWitness {
    std::vector<long long> counts;
};
struct PointSetWitness {
    bool projective = false;
    std::vector<long long> codes;
};
struct MultisetWitness {
    std::vector<std::pair<long long, long long>> entries;
};
using Witness = std::variant<std::monostate, ProfileWitness, PointSetWitness, MultisetWitness>;

// Canonical witness text, the input of witness_hash:
//   none            "none"
//   profile         "profile:2,1,1"
//   affine set      "points:1,2,4"
//   projective set  "proj:1,2,4"
//   multiset        "multi:1*3,2*1"
std::string witness_serialize(const Witness& w);

// FNV-1a over the canonical witness text, as 16 lowercase hex digits.
uint64_t fnv1a64(std::string_view bytes);
std::string witness_hash(const Witness& w);

struct ExtremalResult {
    ExtremalQuery query;
    long long value = 0;
    std::string method;  // "closed-form", "profile-ip", "branch-and-bound", "brute-force"
    Witness witness;
    std::chrono::milliseconds elapsed{0};
    bool from_cache = false;
};

// Solver knobs. threads > 1 splits the branch-and-bound across top-level
// prefixes; values and witnesses do not depend on the thread count.
// fix_first_basis seeds the search with a canonical independent l-set; it
// speeds up ind/ind_pro/theta and never changes the value.
struct SolveOptions {
    int threads = 1;
    bool fix_first_basis = false;
};

// The slot program behind delta and omega: maximize sum(t_i) over m
// nonnegative integer slots subject to sum_{i in I} t_i <= cap for every
// nonempty index set I with |I| <= window. For m >= window this is the same
// optimum as with |I| = window exactly; for m < window the whole-set
// constraint keeps the program bounded and the optimum is cap.
struct ProfileIP {
    long long m = 1;
    long long cap = 1;
    int window = 1;
};
struct ProfileSolution {
    long long value = 0;
    std::vector<long long> profile;  // non-increasing, feasible, attaining
};

// Exact optimum via the sorted-head search; the witness profile is the
// lexicographically least non-increasing maximizer.
ProfileSolution profile_ip_solve(const ProfileIP& ip);

// Literal enumeration of all profiles in [0, cap]^m; Errc::budget when m or
// cap make that enumeration unreasonable. Cross-validates profile_ip_solve.
long long profile_ip_raw(const ProfileIP& ip);

ExtremalResult delta_weak(long long q, int n, int k, int l);
ExtremalResult omega_feeble(long long q, int s, int n, int k, int l);
ExtremalResult ind(long long q, int n, int k, int l, const SolveOptions& opts = {});
ExtremalResult ind_pro(long long q, int n, int k, int l, const SolveOptions& opts = {});
ExtremalResult theta(long long q, int n, int k, int l, const SolveOptions& opts = {});
ExtremalResult gamma_strong(long long q, int n, int k, int l, const SolveOptions& opts = {});

// Dispatch on query.quantity after validate_query.
ExtremalResult solve(const ExtremalQuery& query, const SolveOptions& opts = {});

// Splits a prime power q into (p, m) with q = p^m; Errc::invalid_argument
// when q is not a prime power.
std::pair<long long, int> prime_power_parts(long long q);

// Witness materialization. Fiber elements are generated from digit tails:
// the j-th tail perturbs delta_n lifts at depths 1..precision-1, so each
// fiber holds q^(n*(precision-1)) distinct sphere elements per scaling class.
// Errc::precision when a multiplicity exceeds the representable tails,
// Errc::domain when a fiber cannot hold distinct lifts at all (the s = n
// omega fiber is a single subspace).
std::vector<VecK> delta_witness_vectors(const Zk& K, int n, const ProfileWitness& w);
std::vector<SubspaceK> omega_witness_family(const Zk& K, int s, int n, const ProfileWitness& w);
std::vector<VecK> point_witness_vectors(const Zk& K, int n, const PointSetWitness& w);
std::vector<VecK> theta_witness_vectors(const Zk& K, int n, const MultisetWitness& w);

// Definitional predicates, evaluated literally: every size-k subset must
// contain a size-l subset with the stated property. Candidates smaller than
// k pass vacuously. The budget caps the worst-case number of inner subset
// checks; Errc::budget when C(|S|, k) * C(k, l) exceeds it.
inline constexpr long long kOracleBudgetDefault = 50'000'000;

// Pairwise-orthogonal l-subsets of distinct sphere vectors.
bool weakly_orthogonal_kl(const Zk& K, std::span<const VecK> s, int k, int l,
                          long long budget = kOracleBudgetDefault);
// Orthogonal l-subsets of distinct sphere vectors.
bool orthogonal_kl(const Zk& K, std::span<const VecK> s, int k, int l,
                   long long budget = kOracleBudgetDefault);
// weakly_orthogonal_kl plus the all-pairs orthogonality of the whole set.
bool strongly_orthogonal_kl(const Zk& K, std::span<const VecK> s, int k, int l,
                            long long budget = kOracleBudgetDefault);
// Pairwise-feebly-orthogonal l-subfamilies of distinct equidimensional subspaces.
bool feebly_orthogonal_kl(const Zk& K, std::span<const SubspaceK> fam, int k, int l,
                          long long budget = kOracleBudgetDefault);
// Rank >= l among l-subsets of distinct nonzero residue points.
bool independent_kl(const Gf& f, std::span<const PointFq> s, int k, int l,
                    long long budget = kOracleBudgetDefault);
// Same over distinct canonical projective representatives.
bool pro_independent_kl(const Gf& f, std::span<const PointFq> s, int k, int l,
                        long long budget = kOracleBudgetDefault);

// Materializes the result's witness and re-checks it against the literal
// predicate for its quantity; throws on any violation. Lifts use a laurent
// field over q at default precision.
void validate_witness(const ExtremalResult& result, long long budget = kOracleBudgetDefault);

// Exhaustive check that the subspace-cap rule used by the searches agrees
// with the literal definition on every subset of the ground set. Requires a
// ground set of at most 15 points (Errc::budget beyond). Returns true when
// the rule and the definition agree everywhere.
bool cap_matches_definition_ind(long long q, int n, int k, int l);
bool cap_matches_definition_ind_pro(long long q, int n, int k, int l);

// Independent maximum for theta: searches multiplicity profiles directly,
// accepting a profile only when its materialized lift passes orthogonal_kl.
// Consumes no cap reasoning, so it cross-validates theta().
long long theta_definitional_max(long long q, int n, int k, int l,
                                 long long budget = kOracleBudgetDefault);

// Brute-force probe of the full-space threshold for ind_pro at l >= 2:
// boundary_k = (q^(l-1) - 1)/(q - 1), full_value = (q^n - 1)/(q - 1).
// ge_holds reports value(boundary_k) == full_value; strict_holds reports
// value(boundary_k) < full_value together with value(boundary_k + 1) ==
// full_value whenever boundary_k + 1 is in range.
struct ProStabilizationReport {
    long long boundary_k = 0;
    long long value_at_boundary = 0;
    long long full_value = 0;
    bool ge_holds = false;
    bool strict_holds = false;
};
ProStabilizationReport pro_stabilization_probe(long long q, int n, int l);

// Append-only result cache. Records are lines
//   quantity,q,n,s,k,l,value,method,witness-hash
// keyed by the query_key prefix; on duplicate keys the last line wins.
// Errc::io on unreadable or malformed files.
struct CacheRecord {
    long long value = 0;
    std::string method;
    std::string witness_hash;
};
class ResultCache {
  public:
    explicit ResultCache(std::string path);

    const std::string& path() const { return path_; }
    std::size_t size() const { return records_.size(); }
    std::optional<CacheRecord> lookup(const ExtremalQuery& query) const;
    void append(const ExtremalQuery& query, const ExtremalResult& result);

  private:
    std::string path_;
    std::map<std::string, CacheRecord> records_;
};

// Cache-aware solve. A hit without want_witness returns the recorded value
// with from_cache set and no witness. A hit with want_witness recomputes and
// requires the recomputed value and witness hash to match the record
// (Errc::io otherwise). A miss solves and appends.
ExtremalResult solve_cached(const ExtremalQuery& query, ResultCache& cache, bool want_witness,
                            const SolveOptions& opts = {});

}  // namespace umo
