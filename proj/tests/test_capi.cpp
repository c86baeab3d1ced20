#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "umo.h"

namespace {

// Owns a char* handed out by the library.
struct COut {
    char* s = nullptr;
    ~COut() { umo_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

struct FieldOut {
    umo_field* f = nullptr;
    ~FieldOut() { umo_field_free(f); }
};

}  // namespace

TEST_CASE("error names and version") {
    CHECK(std::string(umo_errc_name(UMO_OK)) == "ok");
    CHECK(std::string(umo_errc_name(UMO_ERR_PRECISION)) == "precision");
    CHECK(std::string(umo_errc_name(UMO_ERR_INTERNAL)) == "internal");
    CHECK(umo_version() != nullptr);
}

TEST_CASE("field lifecycle and description") {
    FieldOut laurent;
    REQUIRE(umo_field_make_laurent(2, 2, 4, &laurent.f) == UMO_OK);
    CHECK(umo_field_backend(laurent.f) == UMO_BACKEND_LAURENT);
    CHECK(umo_field_q(laurent.f) == 4);
    CHECK(umo_field_precision(laurent.f) == 4);

    FieldOut padic;
    REQUIRE(umo_field_make_padic(5, 6, &padic.f) == UMO_OK);
    CHECK(umo_field_backend(padic.f) == UMO_BACKEND_PADIC);
    CHECK(umo_field_q(padic.f) == 5);
    CHECK(umo_field_precision(padic.f) == 6);

    COut text;
    REQUIRE(umo_field_describe(padic.f, &text.s) == UMO_OK);
    CHECK(text.str().find("padic") != std::string::npos);
    CHECK(text.str().find("F_5") != std::string::npos);

    umo_field* bad = nullptr;
    CHECK(umo_field_make_laurent(6, 1, 4, &bad) == UMO_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
    CHECK(std::string(umo_last_error()).find("prime") != std::string::npos);
}

TEST_CASE("scalar evaluation and error reporting") {
    FieldOut f;
    REQUIRE(umo_field_make_laurent(2, 1, 4, &f.f) == UMO_OK);

    COut sum;
    REQUIRE(umo_scalar_eval(f.f, "add", "1 + x^-1", "x^-1", &sum.s) == UMO_OK);
    CHECK(sum.str() == "1");

    COut nu;
    REQUIRE(umo_scalar_eval(f.f, "nu", "x^-2", nullptr, &nu.s) == UMO_OK);
    CHECK(nu.str() == "2");

    COut zero_nu;
    REQUIRE(umo_scalar_eval(f.f, "nu", "0", nullptr, &zero_nu.s) == UMO_OK);
    CHECK(zero_nu.str() == "inf");

    COut abs;
    REQUIRE(umo_scalar_eval(f.f, "abs", "x^-3", nullptr, &abs.s) == UMO_OK);
    CHECK(abs.str() == "2^-3");

    COut pow;
    REQUIRE(umo_scalar_eval(f.f, "pow", "x^-1", "3", &pow.s) == UMO_OK);
    CHECK(pow.str() == "x^-3");

    char* out = nullptr;
    CHECK(umo_scalar_eval(f.f, "div", "1", "0", &out) == UMO_ERR_DOMAIN);
    CHECK(out == nullptr);
    CHECK(umo_scalar_eval(f.f, "add", "1 + +", "1", &out) == UMO_ERR_PARSE);
    CHECK(umo_scalar_eval(f.f, "frobnicate", "1", "1", &out) == UMO_ERR_INVALID_ARGUMENT);
    CHECK(umo_scalar_eval(nullptr, "add", "1", "1", &out) == UMO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("orthogonality round trip") {
    FieldOut f;
    REQUIRE(umo_field_make_laurent(2, 1, 4, &f.f) == UMO_OK);

    int orth = -1;
    REQUIRE(umo_ortho_pair(f.f, "(1, 1 + x^-1)", "(x^-1, 1)", &orth) == UMO_OK);
    CHECK(orth == 1);
    REQUIRE(umo_ortho_pair(f.f, "(1, 0)", "(1, x^-1)", &orth) == UMO_OK);
    CHECK(orth == 0);

    const char* dependent[] = {"(1, 0)", "(1, x^-1)"};
    COut norm;
    REQUIRE(umo_ortho_wedge(f.f, dependent, 2, &norm.s, &orth) == UMO_OK);
    CHECK(norm.str() == "2^-1");
    CHECK(orth == 0);

    REQUIRE(umo_ortho_set(f.f, dependent, 2, &orth) == UMO_OK);
    CHECK(orth == 0);

    int found = -1;
    COut tuple;
    REQUIRE(umo_ortho_falsify(f.f, dependent, 2, 2, &found, &tuple.s) == UMO_OK);
    CHECK(found == 1);
    CHECK(tuple.str() == "(1,1)");

    const char* mixed[] = {"(1, 0)", "(1, x^-1, 0)"};
    char* out = nullptr;
    CHECK(umo_ortho_wedge(f.f, mixed, 2, &out, &orth) == UMO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("extremal solve with witness and cache") {
    long long value = 0;
    COut method, witness, hash;
    int from_cache = -1;
    REQUIRE(umo_extremal_solve("ind", 2, 3, 0, 3, 3, 1, 1, nullptr, &value, &method.s, &witness.s,
                               &hash.s, &from_cache) == UMO_OK);
    CHECK(value == 4);
    CHECK(witness.str() == "points:1,2,4,7");
    CHECK(hash.str().size() == 16);
    CHECK(from_cache == 0);

    long long bad = 0;
    CHECK(umo_extremal_solve("ind", 2, 3, 0, 3, 9, 1, 0, nullptr, &bad, nullptr, nullptr, nullptr,
                             nullptr) == UMO_ERR_INVALID_ARGUMENT);
    CHECK(umo_extremal_solve("nonsense", 2, 3, 0, 3, 3, 1, 0, nullptr, &bad, nullptr, nullptr,
                             nullptr, nullptr) == UMO_ERR_PARSE);

    long long count = 0;
    REQUIRE(umo_gaussian_binomial(4, 2, 2, &count) == UMO_OK);
    CHECK(count == 35);
}

TEST_CASE("verify harness through the C surface") {
    COut ids;
    REQUIRE(umo_verify_ids(&ids.s) == UMO_OK);
    CHECK(ids.str().find("grassmannian-counts") != std::string::npos);

    COut summary;
    REQUIRE(umo_verify_summary("grassmannian-counts", &summary.s) == UMO_OK);
    CHECK_FALSE(summary.str().empty());
    char* out = nullptr;
    CHECK(umo_verify_summary("no-such-check", &out) == UMO_ERR_INVALID_ARGUMENT);

    COut line;
    REQUIRE(umo_verify_run_one("grassmannian-counts", "tiny", nullptr, &line.s) == UMO_OK);
    CHECK(line.str().find("check\tgrassmannian-counts\tpass") == 0);

    COut lines, table;
    int exit_code = -1;
    REQUIRE(umo_verify_run("tiny", nullptr, 1, &lines.s, &table.s, &exit_code) == UMO_OK);
    CHECK(exit_code == 0);
    CHECK(table.str().find("42 checks: 42 passed") != std::string::npos);
}
