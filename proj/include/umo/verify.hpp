#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace umo {

// Self-checks for the library: every closed formula, bound, threshold, and
// predicate equivalence the solvers rely on, re-validated over a parameter
// grid by independent means (definitional oracles, literal enumeration,
// explicit constructions). Checks consume only the public headers.

enum class CheckStatus { pass, fail, skipped };

std::string_view check_status_name(CheckStatus s);

// The parameter grid and budget a run sweeps. Fields are prime powers q;
// each check derives its own feasible cells from these ranges and the
// documented limits of the exhaustive validators. check_ms is the wall-clock
// budget per check; a check that runs out marks itself skipped.
struct VerifyProfile {
    std::string name = "default";
    std::vector<long long> fields = {2, 3};
    int max_n = 3;
    int max_k = 5;
    int max_l = 5;
    long long check_ms = 60'000;
    int threads = 1;
};

// Built-in profiles: "tiny" (q=2, n<=2), "default" (q in {2,3}, n<=3),
// "extended" (adds q=4 and n=4). Errc::invalid_argument on other names.
VerifyProfile builtin_profile(std::string_view name);

// Loads a profile from a key=value file with lines "<name>.<key>=<value>",
// where key is one of fields (comma-separated), max_n, max_k, max_l,
// check_ms, threads. '#' starts a comment. Keys absent from the file fall
// back to the built-in profile of the same name, or to "default" for names
// with no built-in. Errc::io on an unreadable file, Errc::parse on a
// malformed line, Errc::invalid_argument when the file has no line for the
// name and no built-in exists.
VerifyProfile load_profile(const std::string& path, std::string_view name);

struct CheckOutcome {
    std::string id;
    CheckStatus status = CheckStatus::pass;
    long long cases = 0;   // parameter cells exercised
    long long millis = 0;  // wall clock for this check
    std::string detail;    // first counterexample, or the reason skipped
};

// Registry ids in their fixed (sorted) order.
std::vector<std::string> check_ids();
bool has_check(std::string_view id);
// One-line statement of what the check asserts. Errc::invalid_argument on
// unknown ids, same as run_check.
std::string_view check_summary(std::string_view id);

CheckOutcome run_check(std::string_view id, const VerifyProfile& profile);

// Runs every registered check. profile.threads > 1 runs checks in worker
// threads; the returned order is always the check_ids() order.
std::vector<CheckOutcome> run_all(const VerifyProfile& profile);

// One machine-readable line per outcome:
//   check\t<id>\t<status>\t<ms>\t<cases>\t<detail>
std::string outcome_line(const CheckOutcome& o);

// Aligned human table with a trailing summary line.
std::string render_report(std::span<const CheckOutcome> outcomes);

// 0 when everything passed, 1 when any check failed, 2 when nothing failed
// but at least one check was skipped.
int report_exit_code(std::span<const CheckOutcome> outcomes);

}  // namespace umo
