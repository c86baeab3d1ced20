#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "umo/gf.hpp"

namespace umo {

// Residue-side geometry: vectors over F_q, projective points, subspaces in
// reduced row echelon form, and the Gaussian binomial counts that size them.

struct PointFq {
    uint32_t fid = 0;
    boost::container::small_vector<uint16_t, 8> coords;  // element indices

    friend bool operator==(const PointFq&, const PointFq&) = default;
    friend bool operator<(const PointFq& a, const PointFq& b) {
        if (a.fid != b.fid) fail(Errc::field_mismatch, "comparing points over different fields");
        return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                            b.coords.end());
    }
};

// Canonical basis in reduced row echelon form; equality of encodings is
// equality of subspaces.
struct SubspaceFq {
    uint32_t fid = 0;
    int n = 0;
    std::vector<PointFq> rows;

    int dim() const { return static_cast<int>(rows.size()); }
    friend bool operator==(const SubspaceFq&, const SubspaceFq&) = default;
    friend bool operator<(const SubspaceFq& a, const SubspaceFq& b) {
        if (a.rows.size() != b.rows.size()) return a.rows.size() < b.rows.size();
        return a.rows < b.rows;
    }
};

inline constexpr long long kEnumCap = 1LL << 20;

PointFq point(const Gf& f, std::span<const long long> coord_indices);
PointFq zero_point(const Gf& f, int n);
bool is_zero_point(const PointFq& v);
std::vector<int> support(const PointFq& v);

PointFq point_add(const Gf& f, const PointFq& a, const PointFq& b);
PointFq point_scale(const Gf& f, GfElem c, const PointFq& a);
PointFq point_neg(const Gf& f, const PointFq& a);

// Big-endian base-q encoding: lexicographic coordinate order equals numeric
// order, and enumerate_points returns codes 1..q^n-1 in order.
long long point_code(const Gf& f, const PointFq& v);
PointFq point_from_code(const Gf& f, int n, long long code);

PointFq rho(const Gf& f, const PointFq& v);

int span_dim(const Gf& f, std::span<const PointFq> vs);

std::vector<PointFq> enumerate_points(const Gf& f, int n, long long cap = kEnumCap);
std::vector<PointFq> enumerate_proj_points(const Gf& f, int n, long long cap = kEnumCap);

SubspaceFq subspace_from(const Gf& f, int n, std::span<const PointFq> vs);
std::vector<SubspaceFq> enumerate_subspaces(const Gf& f, int s, int n, long long cap = kEnumCap);
bool subspace_contains(const Gf& f, const SubspaceFq& w, const PointFq& v);
std::vector<PointFq> subspace_points(const Gf& f, const SubspaceFq& w, long long cap = kEnumCap);

long long gaussian_binomial(int n, int s, long long q);

std::string point_str(const Gf& f, const PointFq& v);
PointFq point_parse(const Gf& f, std::string_view s);

}  // namespace umo
