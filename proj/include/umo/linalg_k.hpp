#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "umo/ffgeom.hpp"
#include "umo/valued.hpp"

namespace umo {

// Vectors and subspaces over the valued field K, with the infinity norm,
// the residue maps gamma_n / delta_n, and the orthogonality predicates.

struct VecK {
    uint32_t kid = 0;
    std::vector<ZkElem> entries;

    int n() const { return static_cast<int>(entries.size()); }
    friend bool operator==(const VecK&, const VecK&) = default;
};

// Basis vectors lie on the unit sphere and are orthogonal as a set; the
// constructors below enforce this.
struct SubspaceK {
    uint32_t kid = 0;
    int n = 0;
    std::vector<VecK> basis;

    int dim() const { return static_cast<int>(basis.size()); }
};

VecK vec(const Zk& K, std::span<const ZkElem> entries);
VecK zero_vec(const Zk& K, int n);
VecK unit_vec(const Zk& K, int n, int i);
bool vec_is_zero(const VecK& v);

QPow inf_norm(const Zk& K, const VecK& v);
std::optional<long long> vec_nu(const Zk& K, const VecK& v);
bool on_unit_sphere(const Zk& K, const VecK& v);
VecK normalize_to_sphere(const Zk& K, const VecK& v);

VecK vec_add(const Zk& K, const VecK& a, const VecK& b);
VecK vec_scale(const Zk& K, const ZkElem& c, const VecK& a);
VecK lin_comb(const Zk& K, std::span<const ZkElem> coeffs, std::span<const VecK> vs);

PointFq gamma_n(const Zk& K, const VecK& v);
VecK delta_n(const Zk& K, const PointFq& w);

bool pair_orthogonal(const Zk& K, const VecK& u, const VecK& v);

// Maximum of |det| over all square minors formed from the rows; zero when
// the rows are K-dependent, and exactly one when the set is orthogonal.
QPow wedge_norm(const Zk& K, std::span<const VecK> vs);

bool set_orthogonal(const Zk& K, std::span<const VecK> vs);

// Sound search for a violating coefficient tuple: each coefficient ranges
// over zero and units with at most `depth` digits.  A returned tuple always
// witnesses ||sum lambda_i v_i|| < max ||lambda_i v_i||; absence of a return
// is not a proof of orthogonality.
std::optional<std::vector<ZkElem>> falsify_orthogonality(const Zk& K, std::span<const VecK> vs,
                                                         int depth);

std::vector<VecK> orthogonalize(const Zk& K, std::span<const VecK> vs);
SubspaceK subspace_k(const Zk& K, std::span<const VecK> generators);
// Wraps an already-orthogonal basis after verifying it; never reorthogonalizes.
SubspaceK subspace_k_from_orthogonal(const Zk& K, std::span<const VecK> basis);

SubspaceFq mu_n(const Zk& K, const SubspaceK& v);
bool feebly_orthogonal(const Zk& K, const SubspaceK& u, const SubspaceK& v);

// Gaussian elimination over K with largest-norm pivoting.  Exact for the
// series backend on exact inputs.  An eliminated entry that vanishes through
// its whole digit window counts as zero, so on the p-adic backend the rank is
// the rank at stored precision and can only underestimate the true rank.
int rank_k(const Zk& K, std::span<const VecK> vs);

// Membership and equality are decided at stored precision: a reduction that
// vanishes through its whole known window counts as contained.
bool subspace_k_contains(const Zk& K, const SubspaceK& w, const VecK& v);
bool subspace_k_equal(const Zk& K, const SubspaceK& u, const SubspaceK& v);

std::string vec_str(const Zk& K, const VecK& v);
VecK vec_parse(const Zk& K, std::string_view s);
std::string subspace_k_str(const Zk& K, const SubspaceK& w);
SubspaceK subspace_k_parse(const Zk& K, std::string_view s);

}  // namespace umo
