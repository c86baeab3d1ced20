#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <boost/container/small_vector.hpp>

#include "umo/gf.hpp"
#include "umo/qpow.hpp"

namespace umo {

enum class Backend { laurent, padic };

// An element of a discretely valued field, stored as a window of digits
// anchored at the leading one: the value is sum(digits[j] * pi^(nu+j)) plus,
// when exact is false, an unknown tail in pi^(nu+len) * O.  Invariants:
//   - zero elements have nu = 0, no digits, exact = true;
//   - nonzero elements have digits[0] != 0 and 1 <= len <= precision;
//   - exact elements carry no trailing zero digits.
struct ZkElem {
    uint32_t fid = 0;  // id of the owning Zk
    int32_t nu = 0;
    bool zero = true;
    bool exact = true;
    boost::container::small_vector<uint16_t, 8> digits;  // residue field indices

    friend bool operator==(const ZkElem&, const ZkElem&) = default;
};

// A discretely valued field with finite residue field and fixed precision:
// either formal Laurent series in x^-1 over F_q (digitwise arithmetic, no
// carries, any prime power q) or the p-adic numbers (carry arithmetic,
// prime p).  Instances are shared per (backend, p, m, precision).
//
// Precision is the number of digits retained from the leading one.  A result
// whose leading digit cannot be certified within the window raises a
// precision error; nothing is silently rounded.
class Zk {
  public:
    static constexpr int kDefaultPrecision = 4;

    static std::shared_ptr<const Zk> make_laurent(long long p, int m,
                                                  int precision = kDefaultPrecision);
    static std::shared_ptr<const Zk> make_padic(long long p,
                                                int precision = kDefaultPrecision);

    Backend backend() const { return backend_; }
    const Gf& k() const { return *field_; }  // residue field
    std::shared_ptr<const Gf> field_ptr() const { return field_; }
    long long q() const { return field_->q(); }
    int precision() const { return precision_; }
    uint32_t id() const { return id_; }
    std::string uniformizer_name() const;

    // --- construction -----------------------------------------------------
    ZkElem zero() const;
    ZkElem one() const { return delta(field_->one()); }
    ZkElem pi_pow(long long j) const;  // exact pi^j
    ZkElem make(long long nu, std::span<const GfElem> digits, bool exact) const;
    // section of the residue map: delta(0) = 0, otherwise the one-digit unit
    ZkElem delta(GfElem c) const;
    // p-adic: the integer itself (negative values have infinite expansions
    // and come back inexact).  Laurent: defined for 0 <= v < q via delta.
    ZkElem from_integer(long long v) const;

    // --- inspection ---------------------------------------------------------
    bool is_zero(const ZkElem& a) const { return check(a).zero; }
    // nu(0) is +infinity, encoded as nullopt
    std::optional<long long> nu(const ZkElem& a) const;
    QPow abs(const ZkElem& a) const;
    // residue of a mod pi^(m+1), defined on pi^m * O: the digit at position m
    GfElem res(const ZkElem& a, long long m) const;
    // res_0, defined on the valuation ring
    GfElem gamma(const ZkElem& a) const;
    bool equal(const ZkElem& a, const ZkElem& b) const { return check(a) == check(b); }

    // --- arithmetic ---------------------------------------------------------
    ZkElem add(const ZkElem& a, const ZkElem& b) const;
    ZkElem sum(std::span<const ZkElem> xs) const;
    ZkElem neg(const ZkElem& a) const;
    ZkElem sub(const ZkElem& a, const ZkElem& b) const { return add(a, neg(b)); }
    ZkElem mul(const ZkElem& a, const ZkElem& b) const;
    ZkElem inv(const ZkElem& a) const;
    ZkElem pow(const ZkElem& a, long long e) const;
    ZkElem shift(const ZkElem& a, long long j) const;  // multiply by pi^j, exact

    // --- text ----------------------------------------------------------------
    // Canonical form is a sum of digit terms, leading digit first, with an
    // O(...) tail marker on inexact values: "1+x^-1", "2+2*3+O(3^2)".
    // parse(print(a)) == a bit for bit.
    std::string print(const ZkElem& a) const;
    ZkElem parse(std::string_view s) const;

  private:
    Zk(Backend b, std::shared_ptr<const Gf> f, int precision);
    const ZkElem& check(const ZkElem& a) const;
    ZkElem normalize(long long nu, std::vector<long long>&& work, bool exact) const;

    Backend backend_;
    std::shared_ptr<const Gf> field_;
    int precision_;
    uint32_t id_;
};

}  // namespace umo
