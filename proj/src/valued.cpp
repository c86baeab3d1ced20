#include "umo/valued.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace umo {

namespace {

constexpr long long kFar = std::numeric_limits<long long>::max() / 4;

std::mutex g_registry_mutex;
std::map<std::tuple<int, long long, int, int>, std::shared_ptr<const Zk>>& registry() {
    static std::map<std::tuple<int, long long, int, int>, std::shared_ptr<const Zk>> r;
    return r;
}
std::atomic<uint32_t> g_next_id{1};

using U128 = unsigned __int128;

U128 inv_mod_u128(U128 a, U128 m) {
    // extended Euclid; a is a unit mod m by construction
    __int128 t = 0, nt = 1;
    __int128 r = static_cast<__int128>(m), nr = static_cast<__int128>(a % m);
    while (nr != 0) {
        __int128 quo = r / nr;
        __int128 tmp = t - quo * nt;
        t = nt;
        nt = tmp;
        tmp = r - quo * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0) t += static_cast<__int128>(m);
    return static_cast<U128>(t);
}

}  // namespace

Zk::Zk(Backend b, std::shared_ptr<const Gf> f, int precision)
    : backend_(b), field_(std::move(f)), precision_(precision), id_(g_next_id++) {}

std::shared_ptr<const Zk> Zk::make_laurent(long long p, int m, int precision) {
    if (precision < 1) fail(Errc::invalid_argument, "precision must be >= 1");
    auto f = Gf::make(p, m);
    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto& slot = registry()[{0, p, m, precision}];
    if (!slot) slot = std::shared_ptr<const Zk>(new Zk(Backend::laurent, f, precision));
    return slot;
}

std::shared_ptr<const Zk> Zk::make_padic(long long p, int precision) {
    if (precision < 1) fail(Errc::invalid_argument, "precision must be >= 1");
    auto f = Gf::make(p, 1);  // also validates primality
    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto& slot = registry()[{1, p, 1, precision}];
    if (!slot) slot = std::shared_ptr<const Zk>(new Zk(Backend::padic, f, precision));
    return slot;
}

std::string Zk::uniformizer_name() const {
    return backend_ == Backend::laurent ? "x^-1" : std::to_string(field_->p());
}

const ZkElem& Zk::check(const ZkElem& a) const {
    if (a.fid != id_) fail(Errc::field_mismatch, "element does not belong to this valued field");
    return a;
}

ZkElem Zk::zero() const {
    ZkElem z;
    z.fid = id_;
    return z;
}

// Assembles an element from computed digit values at positions nu, nu+1, ...
// Strips leading zeros, detects exact zero, truncates to the precision
// window, and raises the precision error when an inexact result has no
// certifiable leading digit.
ZkElem Zk::normalize(long long nu, std::vector<long long>&& work, bool exact) const {
    size_t t0 = 0;
    while (t0 < work.size() && work[t0] == 0) ++t0;
    if (t0 == work.size()) {
        if (exact) return zero();
        fail(Errc::precision,
             "result vanishes to stored precision; leading digit not certifiable within " +
                 std::to_string(precision_) + " digits");
    }
    nu += static_cast<long long>(t0);
    size_t len = work.size() - t0;
    if (exact) {
        while (len > 1 && work[t0 + len - 1] == 0) --len;  // canonical: no trailing zeros
    }
    if (len > static_cast<size_t>(precision_)) {
        len = static_cast<size_t>(precision_);
        exact = false;
    }
    if (nu < std::numeric_limits<int32_t>::min() || nu > std::numeric_limits<int32_t>::max())
        fail(Errc::cap_exceeded, "valuation out of range");
    ZkElem r;
    r.fid = id_;
    r.zero = false;
    r.exact = exact;
    r.nu = static_cast<int32_t>(nu);
    r.digits.assign(work.begin() + t0, work.begin() + t0 + len);
    return r;
}

ZkElem Zk::pi_pow(long long j) const {
    std::vector<long long> w{1};
    return normalize(j, std::move(w), true);
}

ZkElem Zk::make(long long nu, std::span<const GfElem> digits, bool exact) const {
    std::vector<long long> w;
    w.reserve(digits.size());
    for (GfElem d : digits) w.push_back(field_->index(d));
    return normalize(nu, std::move(w), exact);
}

ZkElem Zk::delta(GfElem c) const {
    if (field_->is_zero(c)) return zero();
    std::vector<long long> w{field_->index(c)};
    return normalize(0, std::move(w), true);
}

ZkElem Zk::from_integer(long long v) const {
    if (backend_ == Backend::laurent) {
        if (v < 0 || v >= q())
            fail(Errc::invalid_argument,
                 "laurent integer literals must name a residue field element (0 <= v < q)");
        return delta(field_->elem(v));
    }
    if (v == 0) return zero();
    if (v < 0) return neg(from_integer(-v));
    long long p = field_->p();
    std::vector<long long> w;
    while (v > 0) {
        w.push_back(v % p);
        v /= p;
    }
    return normalize(0, std::move(w), true);
}

std::optional<long long> Zk::nu(const ZkElem& a) const {
    check(a);
    if (a.zero) return std::nullopt;
    return a.nu;
}

QPow Zk::abs(const ZkElem& a) const {
    check(a);
    if (a.zero) return QPow::zero_of(q());
    return QPow::pow_of(q(), -static_cast<long long>(a.nu));
}

GfElem Zk::res(const ZkElem& a, long long m) const {
    check(a);
    if (a.zero) return field_->zero();
    if (m < a.nu) return field_->zero();
    long long off = m - a.nu;
    if (off < static_cast<long long>(a.digits.size())) return field_->elem(a.digits[off]);
    if (a.exact) return field_->zero();
    fail(Errc::precision, "digit at position " + std::to_string(m) +
                              " lies beyond the stored window of an inexact element");
}

GfElem Zk::gamma(const ZkElem& a) const {
    check(a);
    if (!a.zero && a.nu < 0)
        fail(Errc::domain, "gamma is defined on the valuation ring only (nu >= 0)");
    return res(a, 0);
}

ZkElem Zk::sum(std::span<const ZkElem> xs) const {
    std::vector<const ZkElem*> ops;
    ops.reserve(xs.size());
    for (const ZkElem& x : xs) {
        check(x);
        if (!x.zero) ops.push_back(&x);
    }
    if (ops.empty()) return zero();
    if (ops.size() == 1) return *ops[0];

    long long vmin = kFar, full_end = -kFar, known_end = kFar;
    bool any_inexact = false;
    for (const ZkElem* x : ops) {
        long long lo = x->nu, hi = x->nu + static_cast<long long>(x->digits.size());
        vmin = std::min(vmin, lo);
        full_end = std::max(full_end, hi);
        if (!x->exact) {
            any_inexact = true;
            known_end = std::min(known_end, hi);
        }
    }
    long long end = any_inexact ? known_end : full_end;
    std::vector<long long> work(static_cast<size_t>(end - vmin), 0);
    for (const ZkElem* x : ops) {
        long long base = x->nu - vmin;
        for (size_t j = 0; j < x->digits.size(); ++j) {
            long long t = base + static_cast<long long>(j);
            if (t >= static_cast<long long>(work.size())) break;
            if (backend_ == Backend::laurent) {
                GfElem acc = field_->elem(work[t]);
                work[t] = field_->index(field_->add(acc, field_->elem(x->digits[j])));
            } else {
                work[t] += x->digits[j];
            }
        }
    }
    if (backend_ == Backend::padic) {
        long long p = field_->p(), carry = 0;
        for (size_t t = 0; t < work.size(); ++t) {
            long long tot = work[t] + carry;
            work[t] = tot % p;
            carry = tot / p;
        }
        // with exact operands the carry is part of the value; with an unknown
        // tail every position past the window is unknown anyway
        while (!any_inexact && carry > 0) {
            work.push_back(carry % p);
            carry /= p;
        }
    }
    return normalize(vmin, std::move(work), !any_inexact);
}

ZkElem Zk::add(const ZkElem& a, const ZkElem& b) const {
    ZkElem ops[2] = {a, b};
    return sum(std::span<const ZkElem>(ops, 2));
}

ZkElem Zk::neg(const ZkElem& a) const {
    check(a);
    if (a.zero) return zero();
    if (backend_ == Backend::laurent) {
        ZkElem r = a;
        for (auto& d : r.digits) d = static_cast<uint16_t>(field_->index(field_->neg(field_->elem(d))));
        return r;
    }
    // -1 has the infinite expansion (p-1) + (p-1)p + ..., so p-adic negation
    // of a nonzero value never stays exact
    long long p = field_->p();
    size_t len = a.exact ? static_cast<size_t>(precision_) : a.digits.size();
    std::vector<long long> work(len, 0);
    work[0] = p - a.digits[0];
    for (size_t j = 1; j < len; ++j) {
        long long d = j < a.digits.size() ? a.digits[j] : 0;
        work[j] = p - 1 - d;
    }
    return normalize(a.nu, std::move(work), false);
}

ZkElem Zk::mul(const ZkElem& a, const ZkElem& b) const {
    check(a);
    check(b);
    if (a.zero || b.zero) return zero();
    long long nu = static_cast<long long>(a.nu) + b.nu;
    bool exact = a.exact && b.exact;
    size_t la = a.digits.size(), lb = b.digits.size();
    // offsets at and past an unknown input tail are contaminated
    size_t limit = exact ? la + lb - 1 : std::min(a.exact ? kFar : la, b.exact ? kFar : lb);
    size_t conv_len = std::min(la + lb - 1, limit);
    std::vector<long long> work(conv_len, 0);
    if (backend_ == Backend::laurent) {
        for (size_t i = 0; i < la; ++i) {
            if (a.digits[i] == 0) continue;
            GfElem ai = field_->elem(a.digits[i]);
            for (size_t j = 0; j < lb && i + j < conv_len; ++j) {
                if (b.digits[j] == 0) continue;
                GfElem prod = field_->mul(ai, field_->elem(b.digits[j]));
                work[i + j] = field_->index(field_->add(field_->elem(work[i + j]), prod));
            }
        }
    } else {
        for (size_t i = 0; i < la; ++i)
            for (size_t j = 0; j < lb && i + j < conv_len; ++j)
                work[i + j] += static_cast<long long>(a.digits[i]) * b.digits[j];
        long long p = field_->p(), carry = 0;
        for (size_t t = 0; t < work.size(); ++t) {
            long long tot = work[t] + carry;
            work[t] = tot % p;
            carry = tot / p;
        }
        while (exact && carry > 0) {
            work.push_back(carry % p);
            carry /= p;
        }
        if (!exact) work.resize(std::min(work.size(), limit));
    }
    if (!exact && work.size() > limit) work.resize(limit);
    return normalize(nu, std::move(work), exact);
}

ZkElem Zk::inv(const ZkElem& a) const {
    check(a);
    if (a.zero) fail(Errc::domain, "inverse of zero");
    size_t target = a.exact ? static_cast<size_t>(precision_)
                            : std::min(a.digits.size(), static_cast<size_t>(precision_));
    if (backend_ == Backend::laurent) {
        // power series division: sum(d_i c_{j-i}) = [j == 0]
        GfElem d0inv = field_->inv(field_->elem(a.digits[0]));
        std::vector<GfElem> c(target, field_->zero());
        c[0] = d0inv;
        for (size_t j = 1; j < target; ++j) {
            GfElem s = field_->zero();
            for (size_t i = 1; i <= j && i < a.digits.size(); ++i)
                s = field_->add(s, field_->mul(field_->elem(a.digits[i]), c[j - i]));
            c[j] = field_->neg(field_->mul(d0inv, s));
        }
        bool exact = false;
        size_t len = target;
        if (a.exact) {
            // the inverse is exact iff multiplying back the stripped candidate
            // reproduces 1 on the nose
            size_t stripped = target;
            while (stripped > 1 && field_->is_zero(c[stripped - 1])) --stripped;
            std::vector<GfElem> back(a.digits.size() + stripped - 1, field_->zero());
            for (size_t i = 0; i < a.digits.size(); ++i)
                for (size_t j = 0; j < stripped; ++j)
                    back[i + j] = field_->add(back[i + j], field_->mul(field_->elem(a.digits[i]), c[j]));
            bool is_one = field_->index(back[0]) == 1;
            for (size_t t = 1; t < back.size() && is_one; ++t)
                if (!field_->is_zero(back[t])) is_one = false;
            if (is_one) {
                exact = true;
                len = stripped;
            }
        }
        std::vector<long long> work(len);
        for (size_t j = 0; j < len; ++j) work[j] = field_->index(c[j]);
        return normalize(-static_cast<long long>(a.nu), std::move(work), exact);
    }
    // p-adic: invert the known prefix as an integer mod p^target
    long long p = field_->p();
    double bits = static_cast<double>(target) * std::log2(static_cast<double>(p));
    if (bits > 120) fail(Errc::cap_exceeded, "p-adic inverse window exceeds integer range");
    U128 A = 0, P = 1;
    for (size_t j = a.digits.size(); j-- > 0;) A = A * static_cast<U128>(p) + a.digits[j];
    for (size_t t = 0; t < target; ++t) P *= static_cast<U128>(p);
    U128 B = inv_mod_u128(A % P, P);
    bool exact = a.exact && A == 1;
    std::vector<long long> work(target, 0);
    for (size_t j = 0; j < target; ++j) {
        work[j] = static_cast<long long>(B % static_cast<U128>(p));
        B /= static_cast<U128>(p);
    }
    if (exact) work.resize(1);
    return normalize(-static_cast<long long>(a.nu), std::move(work), exact);
}

ZkElem Zk::pow(const ZkElem& a, long long e) const {
    check(a);
    if (e < 0) return pow(inv(a), -e);
    ZkElem r = one(), base = a;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        if (e >>= 1) base = mul(base, base);
    }
    return r;
}

ZkElem Zk::shift(const ZkElem& a, long long j) const {
    check(a);
    if (a.zero) return a;
    long long nu = static_cast<long long>(a.nu) + j;
    if (nu < std::numeric_limits<int32_t>::min() || nu > std::numeric_limits<int32_t>::max())
        fail(Errc::cap_exceeded, "valuation out of range");
    ZkElem r = a;
    r.nu = static_cast<int32_t>(nu);
    return r;
}

}  // namespace umo
