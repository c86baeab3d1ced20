#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "umo/errors.hpp"
#include "umo/verify.hpp"

using namespace umo;

namespace {

bool throws_with(Errc want, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == want;
    }
    return false;
}

// The full registry, spelled out. A check added or renamed in src/verify.cpp
// must be added here too, so the list of what gets verified stays reviewed.
const std::vector<std::string> kExpectedIds = {
    "delta-pairwise-closed-form",
    "delta-profile-program",
    "delta-sandwich",
    "delta-vacuous-regime",
    "feeble-orthogonality-mu",
    "feeble-orthogonality-profile",
    "gamma-equals-pro",
    "grassmannian-counts",
    "hadamard-orthogonality",
    "ind-binary-values",
    "ind-dmm-threshold",
    "ind-monotonicity",
    "ind-pairwise-closed-form",
    "ind-program-definitional",
    "ind-stabilization",
    "ind-theta-lower",
    "lift-span-dimension",
    "ll-implies-22",
    "mu-preserves-dimension",
    "omega-grassmann-sandwich",
    "omega-vacuous-regime",
    "orthogonality-residue-rank",
    "pair-orthogonality-residues",
    "pro-affine-bridge",
    "pro-affine-q2-coincidence",
    "pro-ll-threshold",
    "pro-monotonicity",
    "pro-program-definitional",
    "pro-stabilization",
    "rho-fiber-counts",
    "rho-image-pro-independent",
    "theta-basis-family",
    "theta-binary-values",
    "theta-delta-upper",
    "theta-ll-threshold",
    "theta-pairwise-formula",
    "theta-program-definitional",
    "theta-ratio-bounds",
    "theta-strict-below-delta",
    "weak-orthogonality-profile",
    "wedge-norm-formula",
    "witness-oracle-roundtrip",
};

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& text) {
        path = "verify_profile_test.cfg";
        std::ofstream out(path);
        out << text;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("the check registry is exactly the reviewed list") {
    std::vector<std::string> ids = check_ids();
    CHECK(ids == kExpectedIds);
    for (const std::string& id : ids) {
        CHECK(has_check(id));
        CHECK(!check_summary(id).empty());
    }
    CHECK(!has_check("no-such-check"));
}

TEST_CASE("unknown check ids are rejected") {
    CHECK(throws_with(Errc::invalid_argument, [] { check_summary("no-such-check"); }));
    CHECK(throws_with(Errc::invalid_argument,
                      [] { run_check("no-such-check", builtin_profile("tiny")); }));
}

TEST_CASE("built-in profiles carry the documented grids") {
    VerifyProfile tiny = builtin_profile("tiny");
    CHECK(tiny.fields == std::vector<long long>{2});
    CHECK(tiny.max_n == 2);
    CHECK(tiny.max_k == 4);
    CHECK(tiny.max_l == 4);
    CHECK(tiny.threads == 1);

    VerifyProfile def = builtin_profile("default");
    CHECK(def.fields == std::vector<long long>{2, 3});
    CHECK(def.max_n == 3);
    CHECK(def.max_k == 5);

    VerifyProfile ext = builtin_profile("extended");
    CHECK(ext.fields == std::vector<long long>{2, 3, 4});
    CHECK(ext.max_n == 4);

    CHECK(throws_with(Errc::invalid_argument, [] { builtin_profile("huge"); }));
}

TEST_CASE("profile files override built-ins and reject malformed lines") {
    SUBCASE("overrides and fallbacks") {
        TempFile f(
            "# comment\n"
            "tiny.max_n=3\n"
            "tiny.fields=2,3\n"
            "custom.fields=5\n"
            "custom.max_k=3\n");
        VerifyProfile tiny = load_profile(f.path, "tiny");
        CHECK(tiny.name == "tiny");
        CHECK(tiny.max_n == 3);
        CHECK(tiny.fields == std::vector<long long>{2, 3});
        CHECK(tiny.max_k == 4);

        VerifyProfile custom = load_profile(f.path, "custom");
        CHECK(custom.fields == std::vector<long long>{5});
        CHECK(custom.max_k == 3);
        CHECK(custom.max_n == 3);
    }
    SUBCASE("unknown name with no entries") {
        TempFile f("tiny.max_n=2\n");
        CHECK(throws_with(Errc::invalid_argument, [&] { load_profile(f.path, "nowhere"); }));
    }
    SUBCASE("malformed lines") {
        TempFile f("tiny max_n=2\n");
        CHECK(throws_with(Errc::parse, [&] { load_profile(f.path, "tiny"); }));
        TempFile g("tiny.max_n=two\n");
        CHECK(throws_with(Errc::parse, [&] { load_profile(g.path, "tiny"); }));
        TempFile h("tiny.max_q=2\n");
        CHECK(throws_with(Errc::parse, [&] { load_profile(h.path, "tiny"); }));
    }
    SUBCASE("unreadable file") {
        CHECK(throws_with(Errc::io, [] { load_profile("no/such/file.cfg", "tiny"); }));
    }
    SUBCASE("repository config matches the built-ins") {
        const char* candidates[] = {"../config/profiles.cfg", "config/profiles.cfg",
                                    "../../config/profiles.cfg"};
        std::string found;
        for (const char* c : candidates)
            if (std::ifstream(c).good()) {
                found = c;
                break;
            }
        if (!found.empty())
            for (const char* name : {"tiny", "default", "extended"}) {
                VerifyProfile file = load_profile(found, name);
                VerifyProfile built = builtin_profile(name);
                CHECK(file.fields == built.fields);
                CHECK(file.max_n == built.max_n);
                CHECK(file.max_k == built.max_k);
                CHECK(file.max_l == built.max_l);
                CHECK(file.threads == built.threads);
            }
    }
}

TEST_CASE("the tiny profile passes every check and is thread-invariant") {
    VerifyProfile tiny = builtin_profile("tiny");
    std::vector<CheckOutcome> one = run_all(tiny);
    REQUIRE(one.size() == kExpectedIds.size());
    for (size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].id == kExpectedIds[i]);
        INFO(one[i].id, ": ", one[i].detail);
        CHECK(one[i].status == CheckStatus::pass);
    }
    CHECK(report_exit_code(one) == 0);

    tiny.threads = 2;
    std::vector<CheckOutcome> two = run_all(tiny);
    REQUIRE(two.size() == one.size());
    for (size_t i = 0; i < one.size(); ++i) {
        CHECK(two[i].id == one[i].id);
        CHECK(two[i].status == one[i].status);
        CHECK(two[i].cases == one[i].cases);
    }
}

TEST_CASE("single checks run by id") {
    CheckOutcome o = run_check("grassmannian-counts", builtin_profile("tiny"));
    CHECK(o.id == "grassmannian-counts");
    CHECK(o.status == CheckStatus::pass);
    CHECK(o.cases > 0);
}

TEST_CASE("outcome lines are tab-separated machine rows") {
    CheckOutcome o;
    o.id = "delta-sandwich";
    o.status = CheckStatus::fail;
    o.millis = 12;
    o.cases = 34;
    o.detail = "q=2 n=2 k=5 l=5: delta=4 lo=3 hi=3";
    CHECK(outcome_line(o) ==
          "check\tdelta-sandwich\tfail\t12\t34\tq=2 n=2 k=5 l=5: delta=4 lo=3 hi=3");
}

TEST_CASE("reports summarize and set the exit code") {
    CheckOutcome pass;
    pass.id = "a-check";
    CheckOutcome skip;
    skip.id = "b-check";
    skip.status = CheckStatus::skipped;
    skip.detail = "budget: wall clock exhausted after 3 cells";
    CheckOutcome fail;
    fail.id = "c-check";
    fail.status = CheckStatus::fail;
    fail.detail = "q=2 n=2: boom";

    std::vector<CheckOutcome> all = {pass, skip, fail};
    std::string report = render_report(all);
    CHECK(report.find("a-check") != std::string::npos);
    CHECK(report.find("3 checks: 1 passed, 1 failed, 1 skipped") != std::string::npos);
    CHECK(report_exit_code(all) == 1);

    std::vector<CheckOutcome> ok = {pass};
    CHECK(render_report(ok).find("1 checks: 1 passed, 0 failed, 0 skipped") != std::string::npos);
    CHECK(report_exit_code(ok) == 0);

    std::vector<CheckOutcome> skipped = {pass, skip};
    CHECK(report_exit_code(skipped) == 2);
}
