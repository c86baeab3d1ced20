#pragma once

#include <string>

#include "umo/errors.hpp"

namespace umo {

// An exact absolute value: either 0 or q^e with e an integer.  Kept symbolic
// so that norms never touch floating point.
struct QPow {
    long long q = 0;     // residue field size the value is measured against
    bool is_zero = true;
    long long e = 0;     // exponent, meaningful only when !is_zero

    static QPow zero_of(long long q) { return QPow{q, true, 0}; }
    static QPow one_of(long long q) { return QPow{q, false, 0}; }
    static QPow pow_of(long long q, long long e) { return QPow{q, false, e}; }

    friend bool operator==(const QPow& a, const QPow& b) {
        if (a.q != b.q) fail(Errc::field_mismatch, "comparing norms over different residue fields");
        if (a.is_zero || b.is_zero) return a.is_zero == b.is_zero;
        return a.e == b.e;
    }
    friend bool operator!=(const QPow& a, const QPow& b) { return !(a == b); }

    bool less(const QPow& o) const {
        if (q != o.q) fail(Errc::field_mismatch, "comparing norms over different residue fields");
        if (is_zero) return !o.is_zero;
        if (o.is_zero) return false;
        return e < o.e;
    }
    bool leq(const QPow& o) const { return less(o) || *this == o; }

    QPow times(const QPow& o) const {
        if (q != o.q) fail(Errc::field_mismatch, "multiplying norms over different residue fields");
        if (is_zero || o.is_zero) return zero_of(q);
        return pow_of(q, e + o.e);
    }

    std::string str() const {
        if (is_zero) return "0";
        if (e == 0) return "1";
        return std::to_string(q) + "^" + std::to_string(e);
    }
};

}  // namespace umo
