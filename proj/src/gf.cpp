#include "umo/gf.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>

namespace umo {

namespace {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Dense polynomials over F_p, lowest coefficient first.
using Poly = std::vector<long long>;

int degree(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

Poly poly_mul(const Poly& a, const Poly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return r;
}

long long inv_mod(long long a, long long p) {
    long long t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        long long quo = r / nr;
        std::swap(t -= quo * nt, nt);
        std::swap(r -= quo * nr, nr);
    }
    return ((t % p) + p) % p;
}

// Remainder of a by b; b need not be monic.
Poly poly_rem(Poly a, const Poly& b, long long p) {
    int db = degree(b);
    long long lead_inv = inv_mod(b[db], p);
    for (int da = degree(a); da >= db; da = degree(a)) {
        long long c = (a[da] * lead_inv) % p;
        for (int i = 0; i <= db; ++i)
            a[da - db + i] = ((a[da - db + i] - c * b[i]) % p + p) % p;
    }
    a.resize(std::max(db, 0));
    return a;
}

bool divides(const Poly& d, const Poly& f, long long p) {
    return degree(poly_rem(f, d, p)) < 0;
}

// Trial division by every monic polynomial of degree 1..deg(f)/2.
bool is_irreducible(const Poly& f, long long p) {
    int m = degree(f);
    for (int d = 1; 2 * d <= m; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long c = 0; c < count; ++c) {
            Poly g(d + 1, 0);
            long long t = c;
            for (int i = 0; i < d; ++i) {
                g[i] = t % p;
                t /= p;
            }
            g[d] = 1;
            if (divides(g, f, p)) return false;
        }
    }
    return true;
}

// First monic irreducible of degree m over F_p in coefficient order: the
// non-leading coefficients (c_0, ..., c_{m-1}) are stepped through as the
// base-p digits of an increasing counter.
std::vector<int> find_modulus(long long p, int m) {
    long long count = 1;
    for (int i = 0; i < m; ++i) {
        if (count > (1LL << 40) / p) fail(Errc::cap_exceeded, "modulus search space too large");
        count *= p;
    }
    for (long long c = 0; c < count; ++c) {
        Poly f(m + 1, 0);
        long long t = c;
        for (int i = 0; i < m; ++i) {
            f[i] = t % p;
            t /= p;
        }
        f[m] = 1;
        if (is_irreducible(f, p)) {
            std::vector<int> out(m + 1);
            for (int i = 0; i <= m; ++i) out[i] = static_cast<int>(f[i]);
            return out;
        }
    }
    fail(Errc::invalid_argument, "no irreducible modulus found");  // unreachable
}

std::mutex g_registry_mutex;
std::map<std::pair<long long, int>, std::shared_ptr<const Gf>>& registry() {
    static std::map<std::pair<long long, int>, std::shared_ptr<const Gf>> r;
    return r;
}
std::atomic<uint32_t> g_next_id{1};

}  // namespace

Gf::Gf(long long p, int m, long long q) : p_(p), m_(m), q_(q), id_(g_next_id++) {}

std::shared_ptr<const Gf> Gf::make(long long p, int m, long long order_cap) {
    if (!is_prime(p)) fail(Errc::invalid_argument, "field characteristic must be prime, got " + std::to_string(p));
    if (m < 1) fail(Errc::invalid_argument, "field extension degree must be >= 1");
    long long q = 1;
    for (int i = 0; i < m; ++i) {
        if (q > order_cap / p) fail(Errc::cap_exceeded, "field order exceeds cap " + std::to_string(order_cap));
        q *= p;
    }
    if (q > order_cap) fail(Errc::cap_exceeded, "field order exceeds cap " + std::to_string(order_cap));

    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto& slot = registry()[{p, m}];
    if (slot) return slot;

    auto gf = std::shared_ptr<Gf>(new Gf(p, m, q));
    gf->modulus_ = find_modulus(p, m);
    if (q <= 256) {
        int n = static_cast<int>(q);
        gf->tneg_.resize(n);
        gf->tinv_.resize(n);
        gf->tadd_.resize(n * n);
        gf->tmul_.resize(n * n);
        for (int a = 0; a < n; ++a) {
            gf->tneg_[a] = static_cast<uint16_t>(gf->neg_idx(a));
            for (int b = 0; b < n; ++b) {
                gf->tadd_[a * n + b] = static_cast<uint16_t>(gf->add_idx(a, b));
                gf->tmul_[a * n + b] = static_cast<uint16_t>(gf->mul_idx(a, b));
            }
        }
        // inverse by scanning the multiplication row; q is tiny here
        for (int a = 1; a < n; ++a)
            for (int b = 1; b < n; ++b)
                if (gf->tmul_[a * n + b] == 1) {
                    gf->tinv_[a] = static_cast<uint16_t>(b);
                    break;
                }
        gf->tables_ = true;
    }
    slot = gf;
    return slot;
}

long long Gf::check(GfElem a) const {
    if (a.fid != id_) fail(Errc::field_mismatch, "element does not belong to this field");
    if (a.v >= q_) fail(Errc::invalid_argument, "element index out of range");
    return a.v;
}

GfElem Gf::elem(long long index) const {
    if (index < 0 || index >= q_) fail(Errc::invalid_argument, "element index out of range");
    return GfElem{id_, static_cast<uint32_t>(index)};
}

long long Gf::add_idx(long long a, long long b) const {
    long long r = 0, mult = 1;
    for (int i = 0; i < m_; ++i) {
        r += ((a % p_ + b % p_) % p_) * mult;
        a /= p_;
        b /= p_;
        mult *= p_;
    }
    return r;
}

long long Gf::neg_idx(long long a) const {
    long long r = 0, mult = 1;
    for (int i = 0; i < m_; ++i) {
        r += ((p_ - a % p_) % p_) * mult;
        a /= p_;
        mult *= p_;
    }
    return r;
}

long long Gf::mul_idx(long long a, long long b) const {
    Poly pa(m_), pb(m_);
    for (int i = 0; i < m_; ++i) {
        pa[i] = a % p_;
        a /= p_;
        pb[i] = b % p_;
        b /= p_;
    }
    Poly mod(modulus_.begin(), modulus_.end());
    Poly r = poly_rem(poly_mul(pa, pb, p_), mod, p_);
    long long idx = 0, mult = 1;
    for (int i = 0; i < m_; ++i) {
        idx += (i < static_cast<int>(r.size()) ? r[i] : 0) * mult;
        mult *= p_;
    }
    return idx;
}

GfElem Gf::add(GfElem a, GfElem b) const {
    long long ia = check(a), ib = check(b);
    if (tables_) return GfElem{id_, tadd_[ia * q_ + ib]};
    return GfElem{id_, static_cast<uint32_t>(add_idx(ia, ib))};
}

GfElem Gf::neg(GfElem a) const {
    long long ia = check(a);
    if (tables_) return GfElem{id_, tneg_[ia]};
    return GfElem{id_, static_cast<uint32_t>(neg_idx(ia))};
}

GfElem Gf::mul(GfElem a, GfElem b) const {
    long long ia = check(a), ib = check(b);
    if (tables_) return GfElem{id_, tmul_[ia * q_ + ib]};
    return GfElem{id_, static_cast<uint32_t>(mul_idx(ia, ib))};
}

GfElem Gf::inv(GfElem a) const {
    long long ia = check(a);
    if (ia == 0) fail(Errc::domain, "inverse of zero");
    if (tables_) return GfElem{id_, tinv_[ia]};
    return pow(a, q_ - 2);
}

GfElem Gf::pow(GfElem a, long long e) const {
    check(a);
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    GfElem r = one(), base = a;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

std::vector<GfElem> Gf::enumerate() const {
    std::vector<GfElem> out;
    out.reserve(q_);
    for (long long i = 0; i < q_; ++i) out.push_back(GfElem{id_, static_cast<uint32_t>(i)});
    return out;
}

std::vector<int> Gf::coeffs(GfElem a) const {
    long long ia = check(a);
    std::vector<int> c(m_);
    for (int i = 0; i < m_; ++i) {
        c[i] = static_cast<int>(ia % p_);
        ia /= p_;
    }
    return c;
}

namespace {

// Renders sum(c_i t^i) with the usual conventions: highest power first,
// zero terms skipped, unit coefficients implicit.
std::string poly_name(const std::vector<int>& c) {
    std::string out;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        if (c[i] == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(c[i]);
        } else {
            if (c[i] != 1) out += std::to_string(c[i]) + "*";
            out += (i == 1) ? "t" : "t^" + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::string Gf::name(GfElem a) const {
    long long ia = check(a);
    if (m_ == 1) return std::to_string(ia);
    return poly_name(coeffs(a));
}

GfElem Gf::parse_name(std::string_view s) const {
    size_t pos = 0;
    auto skip_ws = [&] { while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos; };
    auto parse_int = [&]() -> long long {
        size_t start = pos;
        long long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            if (v > q_) fail(Errc::parse, "number too large at position " + std::to_string(start));
            ++pos;
        }
        if (pos == start) fail(Errc::parse, "expected number at position " + std::to_string(start));
        return v;
    };

    std::vector<int> c(m_, 0);
    skip_ws();
    if (pos >= s.size()) fail(Errc::parse, "empty field element");
    while (true) {
        long long coeff = 1;
        int power = 0;
        bool saw_coeff = false;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            coeff = parse_int();
            saw_coeff = true;
            skip_ws();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                skip_ws();
            }
        }
        if (pos < s.size() && s[pos] == 't') {
            ++pos;
            power = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                power = static_cast<int>(parse_int());
            }
        } else if (!saw_coeff) {
            fail(Errc::parse, "expected field element term at position " + std::to_string(pos));
        }
        if (power >= m_) fail(Errc::parse, "power t^" + std::to_string(power) + " not in reduced form");
        if (coeff >= p_) {
            if (m_ > 1) fail(Errc::parse, "coefficient " + std::to_string(coeff) + " not reduced mod " + std::to_string(p_));
            fail(Errc::parse, "value " + std::to_string(coeff) + " not an element of F_" + std::to_string(p_));
        }
        c[power] = static_cast<int>((c[power] + coeff) % p_);
        skip_ws();
        if (pos >= s.size()) break;
        if (s[pos] != '+') fail(Errc::parse, std::string("unexpected '") + s[pos] + "' at position " + std::to_string(pos));
        ++pos;
        skip_ws();
    }
    long long idx = 0, mult = 1;
    for (int i = 0; i < m_; ++i) {
        idx += c[i] * mult;
        mult *= p_;
    }
    return GfElem{id_, static_cast<uint32_t>(idx)};
}

std::string Gf::modulus_string() const {
    return poly_name(std::vector<int>(modulus_.begin(), modulus_.end()));
}

}  // namespace umo
