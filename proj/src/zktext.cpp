#include <cctype>
#include <string>
#include <vector>

#include "umo/valued.hpp"

// Text form of valued field elements.  Canonical output is a sum of digit
// terms, leading digit first, each term "coeff*power" with the power written
// in the backend's uniformizer notation: powers of x for Laurent series in
// x^-1 ("1+x^-1", "(t+1)*x^2"), powers of p for p-adics ("2+2*3+2*3^2").
// Inexact values end with an explicit window marker "+O(x^-4)" / "+O(3^4)".
// The parser additionally evaluates general sums/products/powers, so factored
// spellings like "x^-2 * (1 + x^-1)" are accepted.

namespace umo {

namespace {

std::string power_str(const Zk& K, long long pos, bool explicit_exp) {
    if (K.backend() == Backend::laurent) {
        long long e = -pos;
        if (!explicit_exp) {
            if (e == 0) return "";
            if (e == 1) return "x";
        }
        return "x^" + std::to_string(e);
    }
    std::string p = std::to_string(K.k().p());
    if (!explicit_exp) {
        if (pos == 0) return "";
        if (pos == 1) return p;
    }
    return p + "^" + std::to_string(pos);
}

struct Parser {
    const Zk& K;
    std::string_view s;
    size_t pos = 0;
    int depth = 0;
    bool saw_o = false;
    long long o_pos = 0;

    [[noreturn]] void err(const std::string& msg) const {
        fail(Errc::parse, msg + " at position " + std::to_string(pos));
    }
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }
    void expect(char c) {
        if (!eat(c)) err(std::string("expected '") + c + "'");
    }

    long long parse_number() {
        skip_ws();
        size_t start = pos;
        long long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            if (v > (1LL << 50)) { pos = start; err("number too large"); }
            ++pos;
        }
        if (pos == start) err("expected number");
        return v;
    }

    long long parse_signed() {
        skip_ws();
        bool neg = eat('-');
        long long v = parse_number();
        return neg ? -v : v;
    }

    ZkElem parse_atom() {
        skip_ws();
        if (pos >= s.size()) err("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            ++depth;
            ZkElem v = parse_sum();
            --depth;
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            if (K.backend() == Backend::padic) return K.from_integer(parse_number());
            long long v = parse_number();
            if (v >= K.k().p())
                err("coefficient " + std::to_string(v) + " not reduced mod " +
                    std::to_string(K.k().p()));
            return K.delta(K.k().elem(v));
        }
        if (c == 't') {
            if (K.backend() != Backend::laurent || K.k().m() == 1)
                err("'t' names an extension field generator, none here");
            ++pos;
            return K.delta(K.k().elem(K.k().p()));  // index p encodes coefficients (0,1)
        }
        if (c == 'x') {
            if (K.backend() != Backend::laurent) err("'x' is a Laurent series symbol");
            ++pos;
            return K.pi_pow(-1);
        }
        err(std::string("unexpected character '") + c + "'");
    }

    ZkElem parse_factor() {
        ZkElem v = parse_atom();
        skip_ws();
        if (eat('^')) {
            long long e = parse_signed();
            if (e > 4096 || e < -4096) err("exponent out of range");
            return K.pow(v, e);
        }
        return v;
    }

    // Either a product of factors or the O(...) window marker.
    bool parse_term(ZkElem& out) {
        skip_ws();
        if (pos < s.size() && s[pos] == 'O') {
            if (depth > 0) err("O(...) is only allowed at the top level");
            if (saw_o) err("duplicate O(...) marker");
            ++pos;
            expect('(');
            ZkElem w = parse_factor();
            expect(')');
            if (w.zero || w.digits.size() != 1 || w.digits[0] != 1 || !w.exact)
                err("O(...) must contain a pure power of the uniformizer");
            saw_o = true;
            o_pos = w.nu;
            return false;
        }
        ZkElem v = parse_factor();
        while (peek('*')) {
            ++pos;
            v = K.mul(v, parse_factor());
        }
        out = v;
        return true;
    }

    ZkElem parse_sum() {
        std::vector<ZkElem> terms;
        bool negate = eat('-');
        while (true) {
            ZkElem t;
            bool is_value = parse_term(t);
            if (is_value) {
                terms.push_back(negate ? K.neg(t) : t);
            } else if (negate) {
                err("O(...) cannot be negated");
            }
            skip_ws();
            if (eat('+')) {
                negate = false;
            } else if (eat('-')) {
                negate = true;
            } else {
                break;
            }
        }
        return K.sum(terms);
    }

    ZkElem run() {
        ZkElem v = parse_sum();
        skip_ws();
        if (pos != s.size()) err("trailing input");
        if (!saw_o) return v;
        // O(pi^P) declares every digit from position P on unknown
        if (v.zero) err("O(...) needs a certified leading digit before it");
        if (o_pos <= v.nu) err("O(...) position must lie past the leading digit");
        long long last_nonzero_end = v.nu;
        for (size_t j = 0; j < v.digits.size(); ++j)
            if (v.digits[j] != 0) last_nonzero_end = v.nu + static_cast<long long>(j) + 1;
        if (o_pos < last_nonzero_end) err("digit terms reach past the O(...) marker");
        if (!v.exact && o_pos > v.nu + static_cast<long long>(v.digits.size()))
            err("O(...) claims digits beyond the known window");
        long long len = o_pos - v.nu;
        if (len > K.precision()) err("window wider than the configured precision");
        ZkElem r = v;
        r.exact = false;
        r.digits.resize(static_cast<size_t>(len), 0);
        return r;
    }
};

}  // namespace

std::string Zk::print(const ZkElem& a) const {
    if (a.fid != id_) fail(Errc::field_mismatch, "element does not belong to this valued field");
    if (a.zero) return "0";
    std::string out;
    for (size_t j = 0; j < a.digits.size(); ++j) {
        if (a.digits[j] == 0) continue;
        long long position = static_cast<long long>(a.nu) + static_cast<long long>(j);
        std::string coeff = field_->name(field_->elem(a.digits[j]));
        std::string pw = power_str(*this, position, false);
        if (!out.empty()) out += "+";
        if (pw.empty()) {
            out += coeff.find('+') != std::string::npos ? "(" + coeff + ")" : coeff;
        } else if (coeff == "1") {
            out += pw;
        } else if (coeff.find('+') != std::string::npos) {
            out += "(" + coeff + ")*" + pw;
        } else {
            out += coeff + "*" + pw;
        }
    }
    if (!a.exact) {
        long long end = static_cast<long long>(a.nu) + static_cast<long long>(a.digits.size());
        out += "+O(" + power_str(*this, end, true) + ")";
    }
    return out;
}

ZkElem Zk::parse(std::string_view s) const {
    Parser p{*this, s};
    return p.run();
}

}  // namespace umo
