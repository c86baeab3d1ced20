#include <functional>
#include <set>
#include <vector>

#include "doctest.h"
#include "umo/gf.hpp"

using umo::Errc;
using umo::Error;
using umo::Gf;
using umo::GfElem;

namespace {

bool throws_with(Errc want, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == want;
    }
    return false;
}

}  // namespace

TEST_CASE("prime fields use the degree-one modulus") {
    auto f2 = Gf::make(2, 1);
    CHECK(f2->p() == 2);
    CHECK(f2->m() == 1);
    CHECK(f2->q() == 2);
    CHECK(f2->modulus_string() == "t");
    auto f3 = Gf::make(3, 1);
    CHECK(f3->q() == 3);
    CHECK(f3->modulus_string() == "t");
}

TEST_CASE("extension moduli are the least monic irreducibles") {
    CHECK(Gf::make(2, 2)->modulus_string() == "t^2+t+1");
    CHECK(Gf::make(3, 2)->modulus_string() == "t^2+1");
    CHECK(Gf::make(2, 3)->modulus_string() == "t^3+t+1");
}

TEST_CASE("construction rejects bad parameters") {
    CHECK(throws_with(Errc::invalid_argument, [] { Gf::make(4, 1); }));
    CHECK(throws_with(Errc::invalid_argument, [] { Gf::make(1, 1); }));
    CHECK(throws_with(Errc::invalid_argument, [] { Gf::make(2, 0); }));
    CHECK(throws_with(Errc::cap_exceeded, [] { Gf::make(2, 17); }));
    CHECK(Gf::make(2, 17, 1LL << 20)->q() == 131072);
}

TEST_CASE("equal parameters yield the shared instance") {
    auto a = Gf::make(2, 2);
    auto b = Gf::make(2, 2);
    CHECK(a.get() == b.get());
    CHECK(a->id() == b->id());
    CHECK(Gf::make(3, 1)->id() != a->id());
}

TEST_CASE("characteristic two addition") {
    auto f = Gf::make(2, 1);
    CHECK(f->add(f->one(), f->one()) == f->zero());
}

TEST_CASE("inverse of two in the three element field") {
    auto f = Gf::make(3, 1);
    CHECK(f->inv(f->elem(2)) == f->elem(2));
}

TEST_CASE("the quartic field generator squares to its conjugate") {
    auto f = Gf::make(2, 2);
    GfElem t = f->elem(2);  // coefficient vector (0,1)
    CHECK(f->name(t) == "t");
    CHECK(f->mul(t, t) == f->elem(3));
    CHECK(f->name(f->elem(3)) == "t+1");
}

TEST_CASE("enumeration is zero-first in coefficient order") {
    auto f2 = Gf::make(2, 1);
    auto e2 = f2->enumerate();
    REQUIRE(e2.size() == 2);
    CHECK(e2[0] == f2->zero());
    CHECK(e2[1] == f2->one());

    auto f3 = Gf::make(3, 1);
    auto e3 = f3->enumerate();
    REQUIRE(e3.size() == 3);
    for (size_t i = 0; i < 3; ++i) CHECK(f3->index(e3[i]) == static_cast<long long>(i));

    auto f4 = Gf::make(2, 2);
    auto e4 = f4->enumerate();
    REQUIRE(e4.size() == 4);
    std::set<GfElem> distinct(e4.begin(), e4.end());
    CHECK(distinct.size() == 4);
    CHECK(f4->name(e4[0]) == "0");
    CHECK(f4->name(e4[1]) == "1");
    CHECK(f4->name(e4[2]) == "t");
    CHECK(f4->name(e4[3]) == "t+1");
}

TEST_CASE("field axioms hold exhaustively on small fields") {
    for (auto [p, m] : std::vector<std::pair<long long, int>>{
             {2, 1}, {3, 1}, {2, 2}, {5, 1}, {2, 3}, {3, 2}}) {
        auto f = Gf::make(p, m);
        auto all = f->enumerate();
        for (GfElem a : all) {
            CHECK(f->add(a, f->zero()) == a);
            CHECK(f->mul(a, f->one()) == a);
            CHECK(f->add(a, f->neg(a)) == f->zero());
            if (!f->is_zero(a)) {
                CHECK(f->mul(a, f->inv(a)) == f->one());
                CHECK(f->pow(a, f->q() - 1) == f->one());
            }
            for (GfElem b : all) {
                CHECK(f->add(a, b) == f->add(b, a));
                CHECK(f->mul(a, b) == f->mul(b, a));
                // Frobenius is additive
                CHECK(f->pow(f->add(a, b), p) == f->add(f->pow(a, p), f->pow(b, p)));
                for (GfElem c : all) {
                    CHECK(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
                    CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
                    CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("element names round-trip through the parser") {
    for (auto [p, m] : std::vector<std::pair<long long, int>>{{2, 1}, {5, 1}, {2, 2}, {3, 2}, {2, 3}}) {
        auto f = Gf::make(p, m);
        for (GfElem a : f->enumerate()) {
            CHECK(f->parse_name(f->name(a)) == a);
        }
    }
}

TEST_CASE("name parsing rejects malformed input") {
    auto f9 = Gf::make(3, 2);
    CHECK(f9->parse_name("2*t+1") == f9->elem(2 * 3 + 1));
    CHECK(throws_with(Errc::parse, [&] { f9->parse_name("5*t"); }));
    CHECK(throws_with(Errc::parse, [&] { f9->parse_name("t^2"); }));
    CHECK(throws_with(Errc::parse, [&] { f9->parse_name(""); }));
    CHECK(throws_with(Errc::parse, [&] { f9->parse_name("1+"); }));
    auto f3 = Gf::make(3, 1);
    CHECK(throws_with(Errc::parse, [&] { f3->parse_name("t"); }));
    CHECK(throws_with(Errc::parse, [&] { f3->parse_name("3"); }));
}

TEST_CASE("coefficient vectors expose the canonical representation") {
    auto f8 = Gf::make(2, 3);
    GfElem a = f8->elem(5);  // coefficients (1,0,1)
    auto c = f8->coeffs(a);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 1);
    CHECK(c[1] == 0);
    CHECK(c[2] == 1);
    CHECK(f8->name(a) == "t^2+1");
}

TEST_CASE("cross-field operands are rejected") {
    auto f2 = Gf::make(2, 1);
    auto f3 = Gf::make(3, 1);
    CHECK(throws_with(Errc::field_mismatch, [&] { f2->add(f2->one(), f3->one()); }));
}

TEST_CASE("inversion of zero is a domain error") {
    auto f = Gf::make(5, 1);
    CHECK(throws_with(Errc::domain, [&] { f->inv(f->zero()); }));
}
