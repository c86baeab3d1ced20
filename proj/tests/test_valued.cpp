#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "umo/valued.hpp"

using umo::Backend;
using umo::Errc;
using umo::Error;
using umo::Gf;
using umo::GfElem;
using umo::QPow;
using umo::Zk;
using umo::ZkElem;

namespace {

bool throws_with(Errc want, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == want;
    }
    return false;
}

// Random nonzero exact element with valuation in [-3, 3] and up to `len` digits.
ZkElem random_exact(const Zk& K, std::mt19937& rng, int len) {
    std::uniform_int_distribution<long long> dnu(-3, 3);
    std::uniform_int_distribution<long long> dd(0, K.q() - 1);
    std::uniform_int_distribution<int> dl(1, len);
    int n = dl(rng);
    std::vector<GfElem> digits;
    digits.push_back(K.k().elem(1 + dd(rng) % (K.q() - 1)));
    for (int i = 1; i < n; ++i) digits.push_back(K.k().elem(dd(rng)));
    return K.make(dnu(rng), digits, true);
}

}  // namespace

TEST_CASE("laurent sum keeps non-interacting digits") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem a = K->one();
    ZkElem b = K->pi_pow(1);
    ZkElem s = K->add(a, b);
    CHECK(K->nu(s) == 0);
    REQUIRE(s.digits.size() == 2);
    CHECK(s.digits[0] == 1);
    CHECK(s.digits[1] == 1);
    CHECK(s.exact);
    CHECK(K->print(s) == "1+x^-1");
}

TEST_CASE("leading digits cancel in characteristic two") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem a = K->parse("1+x^-1");
    ZkElem s = K->add(a, K->one());
    CHECK(K->nu(s) == 1);
    CHECK(K->print(s) == "x^-1");
}

TEST_CASE("dyadic one plus one carries into the uniformizer") {
    auto K = Zk::make_padic(2);
    ZkElem s = K->add(K->one(), K->one());
    CHECK(K->nu(s) == 1);
    REQUIRE(s.digits.size() == 1);
    CHECK(s.digits[0] == 1);
    CHECK(s.exact);
    CHECK(s == K->from_integer(2));
    CHECK(K->print(s) == "2");
}

TEST_CASE("monomial inverses are exact") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem inv = K->inv(K->pi_pow(1));
    CHECK(K->nu(inv) == -1);
    CHECK(inv.exact);
    CHECK(K->print(inv) == "x");
}

TEST_CASE("geometric series inverse is truncated and flagged") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem a = K->parse("1+x^-1");
    ZkElem inv = K->inv(a);
    CHECK(K->nu(inv) == 0);
    CHECK_FALSE(inv.exact);
    REQUIRE(inv.digits.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(inv.digits[i] == 1);
    CHECK(K->print(inv) == "1+x^-1+x^-2+x^-3+O(x^-4)");

    ZkElem prod = K->mul(a, inv);
    CHECK(K->nu(prod) == 0);
    CHECK(K->k().index(K->res(prod, 0)) == 1);
    for (int m = 1; m < 4; ++m) CHECK(K->k().is_zero(K->res(prod, m)));
}

TEST_CASE("inverse of two in the triadic integers") {
    auto K = Zk::make_padic(3);
    ZkElem inv = K->inv(K->from_integer(2));
    CHECK(K->nu(inv) == 0);
    CHECK_FALSE(inv.exact);
    REQUIRE(inv.digits.size() == 4);
    // 2·(2 + 1·3 + 1·3² + 1·3³) = 82 ≡ 1 mod 3⁴
    CHECK(inv.digits[0] == 2);
    CHECK(inv.digits[1] == 1);
    CHECK(inv.digits[2] == 1);
    CHECK(inv.digits[3] == 1);
    ZkElem prod = K->mul(K->from_integer(2), inv);
    CHECK(K->k().index(K->res(prod, 0)) == 1);
    for (int m = 1; m < 4; ++m) CHECK(K->k().is_zero(K->res(prod, m)));
}

TEST_CASE("valuation of zero is infinite and its norm is zero") {
    auto K = Zk::make_laurent(3, 1);
    CHECK_FALSE(K->nu(K->zero()).has_value());
    CHECK(K->abs(K->zero()) == QPow::zero_of(3));
    CHECK(K->abs(K->one()) == QPow::one_of(3));
    CHECK(K->abs(K->pi_pow(2)) == QPow::pow_of(3, -2));
}

TEST_CASE("residue digits extract and the window guards the tail") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem a = K->parse("1+x^-1");
    CHECK(K->k().index(K->res(a, 0)) == 1);
    CHECK(K->k().index(K->res(a, 1)) == 1);
    CHECK(K->k().is_zero(K->res(a, -3)));
    CHECK(K->k().is_zero(K->res(a, 7)));  // exact: the tail is known zero

    ZkElem b = K->parse("1+x^-1+O(x^-2)");
    CHECK(K->k().index(K->res(b, 1)) == 1);
    CHECK(throws_with(Errc::precision, [&] { K->res(b, 2); }));
}

TEST_CASE("gamma lives on the valuation ring") {
    auto K = Zk::make_padic(5);
    CHECK(K->k().index(K->gamma(K->from_integer(7))) == 2);
    CHECK(K->k().is_zero(K->gamma(K->zero())));
    CHECK(K->k().is_zero(K->gamma(K->from_integer(10))));
    CHECK(throws_with(Errc::domain, [&] { K->gamma(K->pi_pow(-1)); }));
}

TEST_CASE("delta sections gamma") {
    auto K = Zk::make_laurent(2, 2);
    for (GfElem c : K->k().enumerate()) {
        ZkElem lift = K->delta(c);
        CHECK(K->gamma(lift) == c);
        if (!K->k().is_zero(c)) {
            CHECK(K->nu(lift) == 0);
            CHECK(lift.exact);
        } else {
            CHECK(K->is_zero(lift));
        }
    }
}

TEST_CASE("integer embedding matches integer arithmetic modulo the window") {
    auto K = Zk::make_padic(3);
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<long long> d(0, 80);
    for (int it = 0; it < 300; ++it) {
        long long a = d(rng), b = d(rng);
        CHECK(K->add(K->from_integer(a), K->from_integer(b)) == K->from_integer(a + b));
        CHECK(K->mul(K->from_integer(a), K->from_integer(b)) == K->from_integer(a * b));
    }
}

TEST_CASE("negation is exact digitwise for series and inexact for p-adics") {
    auto L = Zk::make_laurent(3, 1);
    ZkElem a = L->parse("1+2*x^-1");
    ZkElem na = L->neg(a);
    CHECK(na.exact);
    CHECK(L->print(na) == "2+x^-1");
    CHECK(L->is_zero(L->add(a, na)));

    auto P = Zk::make_padic(3);
    ZkElem b = P->from_integer(5);
    ZkElem nb = P->neg(b);
    CHECK_FALSE(nb.exact);
    REQUIRE(nb.digits.size() == 4);
    // -5 = 1 + 1·3 + 2·3² + 2·3³ + ... (digit complement)
    CHECK(nb.digits[0] == 1);
    CHECK(nb.digits[1] == 1);
    CHECK(nb.digits[2] == 2);
    CHECK(nb.digits[3] == 2);
    // the sum 5 + (-5) vanishes through the whole known window, so the
    // leading digit of the true result (zero) is not certifiable
    CHECK(throws_with(Errc::precision, [&] { P->add(b, nb); }));
}

TEST_CASE("full cancellation of inexact series raises the precision error") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem a = K->parse("1+x^-1+O(x^-2)");
    ZkElem b = K->parse("1+x^-1");
    CHECK(throws_with(Errc::precision, [&] { K->add(a, b); }));
}

TEST_CASE("sums truncate to the narrowest inexact window") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem a = K->parse("1+O(x^-3)");
    ZkElem b = K->parse("x^-3");
    ZkElem s = K->add(a, b);
    // b's digit lies past a's known window and must not appear
    CHECK_FALSE(s.exact);
    CHECK(K->nu(s) == 0);
    CHECK(s.digits.size() == 3);
    CHECK(K->print(s) == "1+O(x^-3)");
}

TEST_CASE("products add valuations and contaminate past unknown tails") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem a = K->parse("x^-1+O(x^-3)");  // two known digits from nu=1
    ZkElem b = K->parse("1+x^-1");
    ZkElem p = K->mul(a, b);
    CHECK(K->nu(p) == 1);
    CHECK_FALSE(p.exact);
    CHECK(p.digits.size() == 2);

    ZkElem e = K->mul(K->parse("1+x^-1"), K->parse("1+x^-1"));
    CHECK(e.exact);
    CHECK(K->print(e) == "1+x^-2");
}

TEST_CASE("exact products wider than the precision window truncate loudly") {
    auto K = Zk::make_laurent(2, 1);
    ZkElem a = K->parse("1+x^-3");
    ZkElem b = K->parse("1+x^-1");
    ZkElem p = K->mul(a, b);  // true support reaches x^-4, one past the window
    CHECK_FALSE(p.exact);
    CHECK(p.digits.size() == 4);
    CHECK(K->print(p) == "1+x^-1+x^-3+O(x^-4)");
}

TEST_CASE("powers square and multiply") {
    auto K = Zk::make_laurent(2, 1);
    CHECK(K->print(K->pow(K->parse("1+x^-1"), 2)) == "1+x^-2");
    CHECK(K->pow(K->parse("1+x^-1"), 0) == K->one());
    ZkElem w = K->pow(K->pi_pow(2), -3);
    CHECK(K->nu(w) == -6);
    CHECK(w.exact);
}

TEST_CASE("shift is exact multiplication by a uniformizer power") {
    auto K = Zk::make_padic(5);
    std::mt19937 rng(7);
    for (int it = 0; it < 50; ++it) {
        ZkElem a = random_exact(*K, rng, 4);
        for (long long j : {-2LL, 1LL, 3LL}) {
            CHECK(K->shift(a, j) == K->mul(a, K->pi_pow(j)));
        }
    }
}

TEST_CASE("ultrametric inequality with equality off the diagonal") {
    std::mt19937 rng(20240818);
    for (auto K : {Zk::make_laurent(2, 1), Zk::make_laurent(3, 1), Zk::make_laurent(2, 2),
                   Zk::make_padic(2), Zk::make_padic(5)}) {
        for (int it = 0; it < 400; ++it) {
            ZkElem a = random_exact(*K, rng, 3);
            ZkElem b = random_exact(*K, rng, 3);
            QPow na = K->abs(a), nb = K->abs(b);
            QPow bound = na.less(nb) ? nb : na;
            QPow ns = K->abs(K->add(a, b));
            CHECK(ns.leq(bound));
            if (na != nb) CHECK(ns == bound);
            CHECK(K->abs(K->mul(a, b)) == na.times(nb));
        }
    }
}

TEST_CASE("addition is commutative and associative inside the window") {
    std::mt19937 rng(11);
    auto K = Zk::make_padic(3);
    std::uniform_int_distribution<long long> dd(0, 2);
    auto narrow = [&] {
        // nu 0, two digits: three-way sums stay inside the four digit window
        std::vector<GfElem> digits{K->k().elem(1 + dd(rng) % 2), K->k().elem(dd(rng))};
        return K->make(0, digits, true);
    };
    for (int it = 0; it < 200; ++it) {
        ZkElem a = narrow(), b = narrow(), c = narrow();
        CHECK(K->add(a, b) == K->add(b, a));
        CHECK(K->add(K->add(a, b), c) == K->add(a, K->add(b, c)));
        CHECK(K->mul(a, b) == K->mul(b, a));
    }
}

TEST_CASE("multi-operand sums are order independent even across truncation") {
    std::mt19937 rng(12);
    for (auto K : {Zk::make_laurent(2, 1), Zk::make_padic(3)}) {
        for (int it = 0; it < 200; ++it) {
            std::vector<ZkElem> xs{random_exact(*K, rng, 4), random_exact(*K, rng, 4),
                                   random_exact(*K, rng, 4)};
            std::vector<ZkElem> perm{xs[2], xs[0], xs[1]};
            auto run = [&](const std::vector<ZkElem>& v) -> std::optional<ZkElem> {
                try {
                    return K->sum(v);
                } catch (const Error&) {
                    return std::nullopt;
                }
            };
            CHECK(run(xs) == run(perm));
        }
    }
}

TEST_CASE("inverse composed with multiplication is the identity to window depth") {
    std::mt19937 rng(13);
    for (auto K : {Zk::make_laurent(3, 1), Zk::make_padic(7)}) {
        for (int it = 0; it < 200; ++it) {
            ZkElem a = random_exact(*K, rng, 4);
            ZkElem inv = K->inv(a);
            ZkElem prod = K->mul(a, inv);
            CHECK(K->nu(prod) == 0);
            CHECK(K->k().index(K->res(prod, 0)) == 1);
            size_t window = prod.exact ? size_t(4) : prod.digits.size();
            for (size_t m = 1; m < window; ++m) CHECK(K->k().is_zero(K->res(prod, m)));
        }
    }
}

TEST_CASE("printing inexact p-adics keeps the explicit window") {
    auto K = Zk::make_padic(3);
    ZkElem a = K->parse("2+2*3+2*3^2+O(3^3)");
    CHECK_FALSE(a.exact);
    CHECK(K->nu(a) == 0);
    CHECK(a.digits.size() == 3);
    CHECK(K->print(a) == "2+2*3+2*3^2+O(3^3)");
    CHECK(K->print(K->from_integer(18)) == "2*3^2");
    CHECK(K->print(K->from_integer(6)) == "2*3");
    CHECK(K->print(K->zero()) == "0");
}

TEST_CASE("extension coefficients print with parentheses as needed") {
    auto K = Zk::make_laurent(2, 2);
    GfElem t = K->k().elem(2), t1 = K->k().elem(3);
    ZkElem a = K->add(K->mul(K->delta(t1), K->pi_pow(2)), K->delta(t));
    CHECK(K->print(a) == "t+(t+1)*x^-2");
    CHECK(K->parse(K->print(a)) == a);
    ZkElem b = K->delta(t1);
    CHECK(K->print(b) == "(t+1)");
    CHECK(K->parse("t+1") == b);
}

TEST_CASE("parser accepts factored spellings") {
    auto K = Zk::make_laurent(3, 1);
    CHECK(K->parse("x^-2*(1+x^-1)") == K->parse("x^-2+x^-3"));
    CHECK(K->parse(" 2 * x ^ 2 + 1 ") == K->parse("2*x^2+1"));
    CHECK(K->parse("x*x") == K->pi_pow(-2));
    CHECK(K->parse("(1+x^-1)^2") == K->parse("1+2*x^-1+x^-2"));
    auto P = Zk::make_padic(3);
    CHECK(P->parse("3^-1") == P->pi_pow(-1));
    CHECK(P->parse("9") == P->pi_pow(2));
    CHECK(P->parse("2-1") == P->parse("1+O(3^4)"));
}

TEST_CASE("parse rejects malformed element text") {
    auto K = Zk::make_laurent(3, 1);
    CHECK(throws_with(Errc::parse, [&] { K->parse(""); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("3"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("1+"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("t"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("1+x^-1+"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("x^"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("1)"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("1+O(x^-9)"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("1+O(x^0)"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("O(x^-1)"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("1+O(2*x^-1)"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("1+O(x^-2)+O(x^-3)"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("1+x^-2+O(x^-1)"); }));
    CHECK(throws_with(Errc::parse, [&] { K->parse("(1+O(x^-2))"); }));
    auto P = Zk::make_padic(2);
    CHECK(throws_with(Errc::parse, [&] { P->parse("x"); }));
}

TEST_CASE("text round-trips bit for bit") {
    std::mt19937 rng(20240819);
    for (auto K : {Zk::make_laurent(2, 1), Zk::make_laurent(3, 1), Zk::make_laurent(2, 2),
                   Zk::make_padic(2), Zk::make_padic(3), Zk::make_padic(5)}) {
        std::uniform_int_distribution<int> coin(0, 1);
        for (int it = 0; it < 300; ++it) {
            ZkElem a = random_exact(*K, rng, 4);
            if (coin(rng) && a.digits.size() == 4) a.exact = false;
            ZkElem back = K->parse(K->print(a));
            CHECK(back == a);
        }
        CHECK(K->parse(K->print(K->zero())) == K->zero());
    }
}

TEST_CASE("elements of different valued fields do not mix") {
    auto K4 = Zk::make_laurent(2, 1, 4);
    auto K6 = Zk::make_laurent(2, 1, 6);
    CHECK(K4.get() != K6.get());
    CHECK(throws_with(Errc::field_mismatch, [&] { K4->add(K4->one(), K6->one()); }));
    CHECK(Zk::make_laurent(2, 1, 4).get() == K4.get());
    CHECK(Zk::make_padic(2, 4).get() != static_cast<const void*>(K4.get()));
}

TEST_CASE("laurent integer literals stay inside the residue field") {
    auto K = Zk::make_laurent(3, 1);
    CHECK(K->from_integer(2) == K->delta(K->k().elem(2)));
    CHECK(throws_with(Errc::invalid_argument, [&] { K->from_integer(3); }));
    CHECK(throws_with(Errc::invalid_argument, [&] { K->from_integer(-1); }));
}

TEST_CASE("zero handling in arithmetic") {
    auto K = Zk::make_padic(3);
    ZkElem z = K->zero();
    ZkElem a = K->from_integer(7);
    CHECK(K->add(a, z) == a);
    CHECK(K->is_zero(K->mul(a, z)));
    CHECK(K->is_zero(K->neg(z)));
    CHECK(K->is_zero(K->shift(z, 5)));
    CHECK(throws_with(Errc::domain, [&] { K->inv(z); }));
    CHECK(K->pow(z, 0) == K->one());
}
