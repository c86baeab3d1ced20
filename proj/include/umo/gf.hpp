#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "umo/errors.hpp"

namespace umo {

// An element of a finite field.  Carries the id of the field it belongs to so
// that mixing elements of different fields is caught instead of silently
// producing garbage.
struct GfElem {
    uint32_t fid = 0;
    uint32_t v = 0;  // index of the element in enumeration order

    friend bool operator==(const GfElem&, const GfElem&) = default;
    friend bool operator<(const GfElem& a, const GfElem& b) {
        return a.fid == b.fid ? a.v < b.v : a.fid < b.fid;
    }
};

// Exact arithmetic in F_q with q = p^m.  The modulus is the first monic
// irreducible polynomial of degree m in coefficient order, verified
// irreducible by trial division at construction, so a given (p, m) always
// yields the same field and make() returns a shared instance.
//
// Elements are indexed 0..q-1; index sum(c_i * p^i) encodes the coefficient
// vector (c_0, ..., c_{m-1}) of the residue class, with c_0 the constant
// term.  Index 0 is zero and index 1 is one.  For q <= 256 all operation
// tables are precomputed.
class Gf {
  public:
    static constexpr long long kDefaultOrderCap = 1LL << 16;

    static std::shared_ptr<const Gf> make(long long p, int m,
                                          long long order_cap = kDefaultOrderCap);

    long long p() const { return p_; }
    int m() const { return m_; }
    long long q() const { return q_; }
    uint32_t id() const { return id_; }

    GfElem zero() const { return GfElem{id_, 0}; }
    GfElem one() const { return GfElem{id_, 1}; }
    GfElem elem(long long index) const;
    long long index(GfElem a) const { return check(a); }
    bool is_zero(GfElem a) const { return check(a) == 0; }

    GfElem add(GfElem a, GfElem b) const;
    GfElem sub(GfElem a, GfElem b) const { return add(a, neg(b)); }
    GfElem neg(GfElem a) const;
    GfElem mul(GfElem a, GfElem b) const;
    GfElem inv(GfElem a) const;
    GfElem pow(GfElem a, long long e) const;

    // All q elements in index order; zero comes first.
    std::vector<GfElem> enumerate() const;

    // Coefficient vector (c_0, ..., c_{m-1}), every entry in [0, p).
    std::vector<int> coeffs(GfElem a) const;

    // Human names: plain integers for prime fields, polynomials in t
    // otherwise ("t+1", "2*t^2+1", ...).
    std::string name(GfElem a) const;
    GfElem parse_name(std::string_view s) const;

    std::string modulus_string() const;

  private:
    Gf(long long p, int m, long long q);
    long long check(GfElem a) const;
    long long add_idx(long long a, long long b) const;
    long long neg_idx(long long a) const;
    long long mul_idx(long long a, long long b) const;

    long long p_;
    int m_;
    long long q_;
    uint32_t id_;
    std::vector<int> modulus_;  // coefficients, degree m, monic
    // flat tables, built when q <= 256
    bool tables_ = false;
    std::vector<uint16_t> tadd_, tmul_, tneg_, tinv_;
};

}  // namespace umo
