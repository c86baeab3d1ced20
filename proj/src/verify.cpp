#include "umo/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "umo/errors.hpp"
#include "umo/extremal.hpp"

namespace umo {

namespace {

using Clock = std::chrono::steady_clock;

// Cell filters. Branch-and-bound ground sets beyond these sizes are not
// explored by the checks; the exhaustive validators carry their own hard
// limits and the filters keep every profile inside them.
constexpr long long kAffineGroundMax = 63;
constexpr long long kProjGroundMax = 40;
constexpr long long kThetaGroundMax = 15;
constexpr long long kDefinitionGroundMax = 15;

long long ipow(long long q, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= q;
    return r;
}

long long affine_ground(long long q, int n) { return ipow(q, n) - 1; }
long long proj_ground(long long q, int n) { return (ipow(q, n) - 1) / (q - 1); }

long long floor_div(long long a, long long b) { return a / b; }
long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

int floor_log(long long q, long long x) {
    int e = 0;
    for (long long v = q; v <= x; v *= q) ++e;
    return e;
}

std::string cell_tag(long long q, int n, int k = -1, int l = -1, int s = -1) {
    std::string t = "q=" + std::to_string(q) + " n=" + std::to_string(n);
    if (s >= 0) t += " s=" + std::to_string(s);
    if (k >= 0) t += " k=" + std::to_string(k);
    if (l >= 0) t += " l=" + std::to_string(l);
    return t;
}

// Shared state of one running check: the grid ranges, the wall-clock
// deadline, and the first failure seen. Checks return as soon as done()
// turns true.
struct Ctx {
    const VerifyProfile& prof;
    Clock::time_point deadline;
    long long cases = 0;
    CheckStatus status = CheckStatus::pass;
    std::string detail;

    explicit Ctx(const VerifyProfile& p)
        : prof(p), deadline(Clock::now() + std::chrono::milliseconds(p.check_ms)) {}

    bool done() const { return status != CheckStatus::pass; }

    // Call at the top of every cell; marks the check skipped on timeout.
    bool expired() {
        if (done()) return true;
        if (Clock::now() <= deadline) return false;
        status = CheckStatus::skipped;
        detail = "budget: wall clock exhausted after " + std::to_string(cases) + " cells";
        return true;
    }

    void tally() { ++cases; }

    void fail_cell(const std::string& d) {
        if (status == CheckStatus::pass) {
            status = CheckStatus::fail;
            detail = d;
        }
    }

    void require(bool cond, const std::string& d) {
        if (!cond) fail_cell(d);
    }

    int max_n() const { return prof.max_n; }
    int max_k() const { return prof.max_k; }
    int max_l() const { return prof.max_l; }
};

std::shared_ptr<const Gf> gf_of(long long q) {
    auto [p, m] = prime_power_parts(q);
    return Gf::make(p, m);
}

std::shared_ptr<const Zk> zk_of(long long q) {
    auto [p, m] = prime_power_parts(q);
    return Zk::make_laurent(p, m);
}

const SolveOptions kSeeded{1, true};

long long v_delta(long long q, int n, int k, int l) { return delta_weak(q, n, k, l).value; }
long long v_omega(long long q, int s, int n, int k, int l) {
    return omega_feeble(q, s, n, k, l).value;
}
long long v_ind(long long q, int n, int k, int l) { return ind(q, n, k, l, kSeeded).value; }
long long v_pro(long long q, int n, int k, int l) { return ind_pro(q, n, k, l, kSeeded).value; }
long long v_theta(long long q, int n, int k, int l) { return theta(q, n, k, l, kSeeded).value; }

// Lift of a residue point with an order-1 perturbation taken from another
// point; stays on the sphere and keeps the residue.
VecK lifted(const Zk& K, const PointFq& p, const PointFq& bump) {
    VecK base = delta_n(K, p);
    if (is_zero_point(bump)) return base;
    return vec_add(K, base, vec_scale(K, K.pi_pow(1), delta_n(K, bump)));
}

// Random vector whose entries are exact monomials pi^e * delta(c); sums and
// products of such entries never leave the digit window, so determinant
// arithmetic on them stays exact.
VecK random_monomial_vec(const Zk& K, std::mt19937_64& rng, int n) {
    const Gf& f = K.k();
    std::vector<ZkElem> es;
    es.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (rng() % 6 == 0) {
            es.push_back(K.zero());
            continue;
        }
        long long e = static_cast<long long>(rng() % 3);
        GfElem c = f.elem(1 + static_cast<long long>(rng() % (f.q() - 1)));
        es.push_back(K.shift(K.delta(c), e));
    }
    return vec(K, es);
}

// Every multiplicity assignment over the first `slots` affine codes with
// entries in [0, max_mult] and positive total at most `max_total`, delivered
// as a MultisetWitness.
template <class Fn>
void for_each_multiset(long long ground, int slots, int max_mult, int max_total, Fn&& fn) {
    int m = static_cast<int>(std::min<long long>(slots, ground));
    std::vector<int> mult(static_cast<size_t>(m), 0);
    while (true) {
        int i = 0;
        while (i < m) {
            if (mult[static_cast<size_t>(i)] < max_mult) {
                ++mult[static_cast<size_t>(i)];
                break;
            }
            mult[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == m) return;
        int total = 0;
        for (int v : mult) total += v;
        if (total > max_total) continue;
        MultisetWitness w;
        for (int j = 0; j < m; ++j)
            if (mult[static_cast<size_t>(j)] > 0)
                w.entries.push_back({j + 1, mult[static_cast<size_t>(j)]});
        fn(w);
    }
}

// Non-increasing profiles over m slots with entries at most max_mult and
// total at most max_total.
template <class Fn>
void for_each_profile(int m, int max_mult, int max_total, Fn&& fn) {
    std::vector<long long> counts(static_cast<size_t>(m), 0);
    std::function<void(int, int, int)> rec = [&](int i, int hi, int left) {
        if (i == m) {
            fn(counts);
            return;
        }
        for (int v = std::min(hi, left); v >= 0; --v) {
            counts[static_cast<size_t>(i)] = v;
            rec(i + 1, v, left - v);
        }
    };
    rec(0, max_mult, max_total);
    std::fill(counts.begin(), counts.end(), 0);
}

// Largest window sum of a multiplicity profile: the top (l-1) entries.
long long window_sum(std::vector<long long> counts, int l) {
    std::sort(counts.begin(), counts.end(), std::greater<>());
    long long s = 0;
    for (size_t i = 0; i < counts.size() && i + 1 < static_cast<size_t>(l); ++i) s += counts[i];
    return s;
}

// ---------------------------------------------------------------------------
// delta and omega: the slot program and its closed bounds
// ---------------------------------------------------------------------------

void chk_delta_pairwise_closed_form(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n)
            for (int k = 2; k <= c.max_k(); ++k) {
                if (c.expired()) return;
                long long m = proj_ground(q, n);
                long long got = v_delta(q, n, k, 2);
                c.tally();
                c.require(got == (k - 1) * m, cell_tag(q, n, k, 2) + ": delta=" +
                                                  std::to_string(got) + " expected=" +
                                                  std::to_string((k - 1) * m));
                if (c.done()) return;
            }
}

void chk_delta_sandwich(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            for (int l = 2; l <= c.max_l(); ++l)
                for (int k = l; k <= c.max_k(); ++k) {
                    if (m < l - 1) continue;
                    if (c.expired()) return;
                    long long lo = floor_div(k - 1, l - 1) * m;
                    long long hi = floor_div(static_cast<long long>(k - 1) * m, l - 1);
                    long long got = v_delta(q, n, k, l);
                    c.tally();
                    std::string tag = cell_tag(q, n, k, l) + ": delta=" + std::to_string(got) +
                                      " lo=" + std::to_string(lo) + " hi=" + std::to_string(hi);
                    c.require(lo <= got && got <= hi, tag);
                    if ((k - 1) % (l - 1) == 0) c.require(got == lo, tag + " (divisible case)");
                    if (c.done()) return;
                }
        }
}

void chk_delta_vacuous_regime(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            for (int l = 2; l <= c.max_l(); ++l)
                for (int k = l; k <= c.max_k(); ++k) {
                    if (m >= l - 1) continue;
                    if (c.expired()) return;
                    long long got = v_delta(q, n, k, l);
                    c.tally();
                    c.require(got == k - 1, cell_tag(q, n, k, l) + ": delta=" +
                                                std::to_string(got) + " expected=" +
                                                std::to_string(k - 1));
                    if (c.done()) return;
                }
        }
}

void chk_delta_profile_program(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            if (m > 7) continue;
            for (int l = 2; l <= c.max_l(); ++l)
                for (int k = l; k <= c.max_k(); ++k) {
                    if (c.expired()) return;
                    ExtremalResult r = delta_weak(q, n, k, l);
                    long long raw = profile_ip_raw({m, k - 1, l - 1});
                    c.tally();
                    c.require(r.value == raw, cell_tag(q, n, k, l) + ": solver=" +
                                                  std::to_string(r.value) + " enumeration=" +
                                                  std::to_string(raw));
                    if (c.done()) return;
                    if (r.value <= 12) {
                        try {
                            validate_witness(r);
                        } catch (const Error& e) {
                            c.fail_cell(cell_tag(q, n, k, l) + ": witness rejected: " + e.what());
                            return;
                        }
                    }
                }
        }
}

void chk_omega_grassmann_sandwich(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n)
            for (int s = 1; s <= n; ++s) {
                long long m = gaussian_binomial(n, s, q);
                for (int l = 2; l <= c.max_l(); ++l)
                    for (int k = l; k <= c.max_k(); ++k) {
                        if (m < l - 1) continue;
                        if (c.expired()) return;
                        long long lo = floor_div(k - 1, l - 1) * m;
                        long long hi = floor_div(static_cast<long long>(k - 1) * m, l - 1);
                        long long got = v_omega(q, s, n, k, l);
                        c.tally();
                        std::string tag = cell_tag(q, n, k, l, s) + ": omega=" +
                                          std::to_string(got) + " lo=" + std::to_string(lo) +
                                          " hi=" + std::to_string(hi);
                        c.require(lo <= got && got <= hi, tag);
                        if ((k - 1) % (l - 1) == 0) c.require(got == lo, tag + " (divisible case)");
                        if (c.done()) return;
                    }
            }
}

void chk_omega_vacuous_regime(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n)
            for (int s = 1; s <= n; ++s) {
                long long m = gaussian_binomial(n, s, q);
                for (int l = 2; l <= c.max_l(); ++l)
                    for (int k = l; k <= c.max_k(); ++k) {
                        if (m >= l - 1) continue;
                        if (c.expired()) return;
                        long long got = v_omega(q, s, n, k, l);
                        c.tally();
                        c.require(got == k - 1, cell_tag(q, n, k, l, s) + ": omega=" +
                                                    std::to_string(got) + " expected=" +
                                                    std::to_string(k - 1));
                        if (c.done()) return;
                    }
            }
}

void chk_grassmannian_counts(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n)
            for (int s = 1; s <= n; ++s) {
                if (c.expired()) return;
                auto f = gf_of(q);
                long long want = gaussian_binomial(n, s, q);
                long long got = static_cast<long long>(enumerate_subspaces(*f, s, n).size());
                c.tally();
                c.require(got == want, cell_tag(q, n, -1, -1, s) + ": enumerated=" +
                                           std::to_string(got) + " formula=" +
                                           std::to_string(want));
                if (c.done()) return;
            }
}

void chk_weak_orthogonality_profile(Ctx& c) {
    const std::pair<int, int> kl[] = {{2, 2}, {3, 2}, {3, 3}, {4, 3}};
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(q == 2 ? 3 : 2, c.max_n()); ++n) {
            auto K = zk_of(q);
            auto f = gf_of(q);
            long long ground = affine_ground(q, n);
            bool bad = false;
            for_each_multiset(ground, 5, 3, 6, [&](const MultisetWitness& w) {
                if (bad || c.expired()) {
                    bad = true;
                    return;
                }
                std::vector<VecK> vs = theta_witness_vectors(*K, n, w);
                std::map<long long, long long> fiber;
                for (const auto& [code, mult] : w.entries) {
                    PointFq p = point_from_code(*f, n, code);
                    fiber[point_code(*f, rho(*f, p))] += mult;
                }
                std::vector<long long> counts;
                for (const auto& [z, t] : fiber) counts.push_back(t);
                for (auto [k, l] : kl) {
                    if (k > c.max_k() || l > c.max_l()) continue;
                    bool oracle = weakly_orthogonal_kl(*K, vs, k, l);
                    bool window = window_sum(counts, l) <= k - 1;
                    c.tally();
                    if (oracle != window) {
                        c.fail_cell(cell_tag(q, n, k, l) + " witness " + witness_serialize(w) +
                                    ": oracle=" + (oracle ? "true" : "false") + " window=" +
                                    (window ? "true" : "false"));
                        bad = true;
                        return;
                    }
                }
            });
            if (c.done()) return;
        }
}

void chk_feeble_orthogonality_profile(Ctx& c) {
    const std::pair<int, int> kl[] = {{2, 2}, {3, 2}, {3, 3}, {4, 3}};
    for (long long q : c.prof.fields) {
        if (c.max_n() < 2) continue;
        int n = 2, s = 1;
        auto K = zk_of(q);
        int m = static_cast<int>(gaussian_binomial(n, s, q));
        bool bad = false;
        for_each_profile(m, 3, 6, [&](const std::vector<long long>& counts) {
            if (bad || c.expired()) {
                bad = true;
                return;
            }
            ProfileWitness w{counts};
            std::vector<SubspaceK> fam = omega_witness_family(*K, s, n, w);
            for (auto [k, l] : kl) {
                if (k > c.max_k() || l > c.max_l()) continue;
                bool oracle = feebly_orthogonal_kl(*K, fam, k, l);
                bool window = window_sum(counts, l) <= k - 1;
                c.tally();
                if (oracle != window) {
                    c.fail_cell(cell_tag(q, n, k, l, s) + " witness " + witness_serialize(w) +
                                ": oracle=" + (oracle ? "true" : "false") + " window=" +
                                (window ? "true" : "false"));
                    bad = true;
                    return;
                }
            }
        });
        if (c.done()) return;
    }
}

// ---------------------------------------------------------------------------
// residue bridges: orthogonality seen on the residue side
// ---------------------------------------------------------------------------

void chk_pair_orthogonality_residues(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(q == 2 ? 3 : 2, c.max_n()); ++n) {
            auto K = zk_of(q);
            auto f = gf_of(q);
            std::vector<PointFq> pts = enumerate_points(*f, n);
            PointFq none = zero_point(*f, n);
            for (size_t i = 0; i < pts.size(); ++i)
                for (size_t j = 0; j < pts.size(); ++j) {
                    if (c.expired()) return;
                    const PointFq& bump = pts[(i + j + 1) % pts.size()];
                    VecK u = lifted(*K, pts[i], j % 2 == 0 ? none : bump);
                    VecK v = lifted(*K, pts[j], i % 2 == 0 ? none : bump);
                    bool want = point_code(*f, rho(*f, pts[i])) != point_code(*f, rho(*f, pts[j]));
                    bool got = pair_orthogonal(*K, u, v);
                    c.tally();
                    if (got != want) {
                        c.fail_cell(cell_tag(q, n) + " codes " + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ": orthogonal=" +
                                    (got ? "true" : "false") + " residues-differ=" +
                                    (want ? "true" : "false"));
                        return;
                    }
                }
        }
}

void chk_wedge_norm_formula(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(3, c.max_n()); ++n)
            for (int l = 2; l <= n; ++l) {
                auto K = zk_of(q);
                std::mt19937_64 rng(0x5eedULL + static_cast<unsigned long long>(q * 100 + n * 10 + l));
                for (int trial = 0; trial < 40; ++trial) {
                    if (c.expired()) return;
                    std::vector<VecK> rows;
                    for (int i = 0; i < l; ++i) rows.push_back(random_monomial_vec(*K, rng, n));
                    bool zero_row = false;
                    for (const VecK& r : rows) zero_row = zero_row || vec_is_zero(r);
                    if (zero_row) continue;
                    QPow best = QPow::zero_of(q);
                    std::vector<int> pick(static_cast<size_t>(l));
                    std::function<void(int, int)> minors = [&](int from, int d) {
                        if (d == l) {
                            std::vector<int> perm(static_cast<size_t>(l));
                            for (int i = 0; i < l; ++i) perm[static_cast<size_t>(i)] = i;
                            ZkElem det = K->zero();
                            do {
                                ZkElem term = K->one();
                                int inversions = 0;
                                for (int i = 0; i < l; ++i) {
                                    for (int j = i + 1; j < l; ++j)
                                        if (perm[static_cast<size_t>(i)] >
                                            perm[static_cast<size_t>(j)])
                                            ++inversions;
                                    term = K->mul(term,
                                                  rows[static_cast<size_t>(i)]
                                                      .entries[static_cast<size_t>(
                                                          pick[static_cast<size_t>(
                                                              perm[static_cast<size_t>(i)])])]);
                                }
                                if (inversions % 2 == 1) term = K->neg(term);
                                det = K->add(det, term);
                            } while (std::next_permutation(perm.begin(), perm.end()));
                            QPow a = K->abs(det);
                            if (best.less(a)) best = a;
                            return;
                        }
                        for (int j = from; j <= n - (l - d); ++j) {
                            pick[static_cast<size_t>(d)] = j;
                            minors(j + 1, d + 1);
                        }
                    };
                    minors(0, 0);
                    QPow got = wedge_norm(*K, rows);
                    c.tally();
                    if (!(got == best)) {
                        c.fail_cell(cell_tag(q, n, -1, l) + ": wedge=" + got.str() +
                                    " minor-max=" + best.str());
                        return;
                    }
                }
            }
}

void chk_hadamard_orthogonality(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(3, c.max_n()); ++n)
            for (int l = 2; l <= n; ++l) {
                auto K = zk_of(q);
                auto f = gf_of(q);
                std::vector<PointFq> pts = enumerate_points(*f, n);
                PointFq none = zero_point(*f, n);
                QPow one = QPow::one_of(q);
                long long seen = 0;
                std::vector<size_t> idx(static_cast<size_t>(l));
                std::function<void(size_t, int)> walk = [&](size_t from, int d) {
                    if (c.done() || seen > 1500) return;
                    if (d == l) {
                        if (c.expired()) return;
                        ++seen;
                        std::vector<VecK> vs;
                        std::vector<PointFq> res;
                        for (int i = 0; i < l; ++i) {
                            const PointFq& p = pts[idx[static_cast<size_t>(i)]];
                            vs.push_back(lifted(*K, p, i % 2 == 0 ? none : pts[idx[0]]));
                            res.push_back(p);
                        }
                        QPow w = wedge_norm(*K, vs);
                        bool orth = set_orthogonal(*K, vs);
                        bool rank_full = span_dim(*f, res) == l;
                        c.tally();
                        if (!w.leq(one) || (w == one) != orth || orth != rank_full) {
                            c.fail_cell(cell_tag(q, n, -1, l) + ": wedge=" + w.str() +
                                        " orthogonal=" + (orth ? "true" : "false") +
                                        " residue-rank-full=" + (rank_full ? "true" : "false"));
                            return;
                        }
                        return;
                    }
                    for (size_t j = from; j < pts.size(); ++j) {
                        idx[static_cast<size_t>(d)] = j;
                        walk(j + 1, d + 1);
                    }
                };
                walk(0, 0);
                if (c.done()) return;
            }
}

void chk_orthogonality_residue_rank(Ctx& c) {
    const std::pair<int, int> kl[] = {{2, 2}, {3, 2}, {3, 3}, {4, 3}};
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(q == 2 ? 3 : 2, c.max_n()); ++n) {
            auto K = zk_of(q);
            auto f = gf_of(q);
            long long ground = affine_ground(q, n);
            bool bad = false;
            for_each_multiset(ground, 5, 2, 6, [&](const MultisetWitness& w) {
                if (bad || c.expired()) {
                    bad = true;
                    return;
                }
                std::vector<VecK> vs = theta_witness_vectors(*K, n, w);
                std::vector<PointFq> res;
                for (const auto& [code, mult] : w.entries)
                    for (long long i = 0; i < mult; ++i)
                        res.push_back(point_from_code(*f, n, code));
                size_t sz = vs.size();
                for (auto [k, l] : kl) {
                    if (k > c.max_k() || l > c.max_l()) continue;
                    bool oracle = orthogonal_kl(*K, vs, k, l);
                    bool residue = true;
                    if (sz >= static_cast<size_t>(k)) {
                        std::vector<size_t> idx(static_cast<size_t>(k));
                        std::function<bool(size_t, int)> all = [&](size_t from, int d) -> bool {
                            if (d == k) {
                                std::vector<PointFq> sub;
                                for (int i = 0; i < k; ++i)
                                    sub.push_back(res[idx[static_cast<size_t>(i)]]);
                                return span_dim(*f, sub) >= l;
                            }
                            for (size_t j = from; j < sz; ++j) {
                                idx[static_cast<size_t>(d)] = j;
                                if (!all(j + 1, d + 1)) return false;
                            }
                            return true;
                        };
                        residue = all(0, 0);
                    }
                    c.tally();
                    if (oracle != residue) {
                        c.fail_cell(cell_tag(q, n, k, l) + " witness " + witness_serialize(w) +
                                    ": oracle=" + (oracle ? "true" : "false") +
                                    " residue-rank=" + (residue ? "true" : "false"));
                        bad = true;
                        return;
                    }
                }
            });
            if (c.done()) return;
        }
}

void chk_lift_span_dimension(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n)
            for (int s = 1; s <= n; ++s) {
                auto K = zk_of(q);
                auto f = gf_of(q);
                std::vector<SubspaceFq> subs = enumerate_subspaces(*f, s, n);
                long long seen = 0;
                for (const SubspaceFq& w : subs) {
                    if (c.expired()) return;
                    if (++seen > 200) break;
                    std::vector<VecK> lifts;
                    for (const PointFq& row : w.rows) lifts.push_back(delta_n(*K, row));
                    int rk = rank_k(*K, lifts);
                    SubspaceK V = subspace_k_from_orthogonal(*K, lifts);
                    SubspaceFq back = mu_n(*K, V);
                    c.tally();
                    if (rk != s || !(back == w)) {
                        c.fail_cell(cell_tag(q, n, -1, -1, s) + ": rank=" + std::to_string(rk) +
                                    " mu-matches=" + (back == w ? "true" : "false"));
                        return;
                    }
                }
            }
}

void chk_mu_preserves_dimension(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= std::min(3, c.max_n()); ++n)
            for (int s = 1; s <= n; ++s) {
                auto K = zk_of(q);
                auto f = gf_of(q);
                std::mt19937_64 rng(0xabcdULL + static_cast<unsigned long long>(q * 100 + n * 10 + s));
                for (int trial = 0; trial < 30; ++trial) {
                    if (c.expired()) return;
                    std::vector<VecK> gens;
                    for (int i = 0; i < s; ++i) gens.push_back(random_monomial_vec(*K, rng, n));
                    bool zero_row = false;
                    for (const VecK& g : gens) zero_row = zero_row || vec_is_zero(g);
                    if (zero_row) continue;
                    if (rank_k(*K, gens) < s) continue;
                    SubspaceK V = subspace_k(*K, gens);
                    SubspaceFq image = mu_n(*K, V);
                    c.tally();
                    if (image.dim() != V.dim()) {
                        c.fail_cell(cell_tag(q, n, -1, -1, s) + ": subspace-dim=" +
                                    std::to_string(V.dim()) + " image-dim=" +
                                    std::to_string(image.dim()));
                        return;
                    }
                    for (const VecK& b : V.basis)
                        if (!subspace_contains(*f, image, gamma_n(*K, b))) {
                            c.fail_cell(cell_tag(q, n, -1, -1, s) +
                                        ": basis residue escapes the image");
                            return;
                        }
                }
            }
}

void chk_feeble_orthogonality_mu(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(3, c.max_n()); ++n)
            for (int s = 1; s < n; ++s) {
                auto K = zk_of(q);
                int m = static_cast<int>(gaussian_binomial(n, s, q));
                std::vector<long long> counts(static_cast<size_t>(m), 0);
                counts[0] = 2;
                if (m > 1) counts[1] = 1;
                std::vector<SubspaceK> fam = omega_witness_family(*K, s, n, ProfileWitness{counts});
                for (size_t i = 0; i < fam.size(); ++i)
                    for (size_t j = i + 1; j < fam.size(); ++j) {
                        if (c.expired()) return;
                        bool feeble = feebly_orthogonal(*K, fam[i], fam[j]);
                        bool mu_differ = !(mu_n(*K, fam[i]) == mu_n(*K, fam[j]));
                        c.tally();
                        if (feeble != mu_differ) {
                            c.fail_cell(cell_tag(q, n, -1, -1, s) + " pair " + std::to_string(i) +
                                        "," + std::to_string(j) + ": feeble=" +
                                        (feeble ? "true" : "false") + " mu-differ=" +
                                        (mu_differ ? "true" : "false"));
                            return;
                        }
                    }
            }
}

// ---------------------------------------------------------------------------
// theta: orthogonal multisets against delta, ind, and explicit values
// ---------------------------------------------------------------------------

bool theta_cell(long long q, int n, int k) {
    return proj_ground(q, n) <= kThetaGroundMax && k <= 6;
}

void chk_theta_delta_upper(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                for (int k = l; k <= c.max_k(); ++k) {
                    if (!theta_cell(q, n, k)) continue;
                    if (c.expired()) return;
                    long long th = v_theta(q, n, k, l);
                    long long de = v_delta(q, n, k, l);
                    c.tally();
                    std::string tag = cell_tag(q, n, k, l) + ": theta=" + std::to_string(th) +
                                      " delta=" + std::to_string(de);
                    c.require(th <= de, tag);
                    if (m >= l - 1)
                        c.require(de <= floor_div(static_cast<long long>(k - 1) * m, l - 1),
                                  tag + " bound=" +
                                      std::to_string(floor_div(static_cast<long long>(k - 1) * m,
                                                               l - 1)));
                    if (c.done()) return;
                }
        }
}

void chk_theta_pairwise_formula(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n)
            for (int k = 2; k <= c.max_k(); ++k) {
                if (!theta_cell(q, n, k)) continue;
                if (c.expired()) return;
                long long m = proj_ground(q, n);
                long long th = v_theta(q, n, k, 2);
                c.tally();
                c.require(th == (k - 1) * m, cell_tag(q, n, k, 2) + ": theta=" +
                                                 std::to_string(th) + " expected=" +
                                                 std::to_string((k - 1) * m));
                if (c.done()) return;
            }
}

void chk_ind_theta_lower(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n)
            for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                for (int k = l; k <= std::min<long long>(c.max_k(), affine_ground(q, n)); ++k) {
                    if (!theta_cell(q, n, k)) continue;
                    if (c.expired()) return;
                    long long iv = v_ind(q, n, k, l);
                    long long th = v_theta(q, n, k, l);
                    c.tally();
                    std::string tag = cell_tag(q, n, k, l) + ": ind=" + std::to_string(iv) +
                                      " theta=" + std::to_string(th);
                    c.require(iv <= th, tag);
                    if (k == l) c.require(iv == th, tag + " (equality at k=l)");
                    if (c.done()) return;
                }
}

void chk_theta_ratio_bounds(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n)
            for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                for (int k = l; k <= std::min<long long>(c.max_k(), affine_ground(q, n)); ++k) {
                    if (!theta_cell(q, n, k)) continue;
                    if (c.expired()) return;
                    long long th = v_theta(q, n, k, l);
                    long long base = v_theta(q, n, l, l);
                    long long iv = v_ind(q, n, k, l);
                    c.tally();
                    long long lo = floor_div(k - 1, l - 1) * base;
                    long long hi = (k - l + 1) * iv;
                    c.require(lo <= th && th <= hi,
                              cell_tag(q, n, k, l) + ": theta=" + std::to_string(th) + " lo=" +
                                  std::to_string(lo) + " hi=" + std::to_string(hi));
                    if (c.done()) return;
                }
}

void chk_theta_strict_below_delta(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 3; n <= c.max_n(); ++n)
            for (int l = 3; l <= std::min(n, c.max_l()); ++l) {
                if (!theta_cell(q, n, l)) continue;
                if (c.expired()) return;
                long long th = v_theta(q, n, l, l);
                long long de = v_delta(q, n, l, l);
                c.tally();
                c.require(th < de, cell_tag(q, n, l, l) + ": theta=" + std::to_string(th) +
                                       " delta=" + std::to_string(de));
                if (c.done()) return;
            }
}

void chk_theta_ll_threshold(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n)
            for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                if (!theta_cell(q, n, l)) continue;
                if (c.expired()) return;
                long long th = v_theta(q, n, l, l);
                bool cond = q * (n + 1) <= (q + 1) * static_cast<long long>(l);
                c.tally();
                c.require((th == n + 1) == cond,
                          cell_tag(q, n, l, l) + ": theta=" + std::to_string(th) +
                              " threshold-holds=" + (cond ? "true" : "false"));
                if (c.done()) return;
            }
}

void chk_theta_binary_values(Ctx& c) {
    if (std::find(c.prof.fields.begin(), c.prof.fields.end(), 2) == c.prof.fields.end()) return;
    for (int n = 3; n <= c.max_n(); ++n) {
        if (3 > c.max_k() || !theta_cell(2, n, 3)) continue;
        if (c.expired()) return;
        long long th = v_theta(2, n, 3, 3);
        c.tally();
        c.require(th == ipow(2, n - 1), cell_tag(2, n, 3, 3) + ": theta=" + std::to_string(th) +
                                            " expected=" + std::to_string(ipow(2, n - 1)));
        if (c.done()) return;
    }
    for (int n = 2; n <= std::min({c.max_n(), c.max_k(), c.max_l()}); ++n) {
        if (!theta_cell(2, n, n)) continue;
        if (c.expired()) return;
        long long th = v_theta(2, n, n, n);
        c.tally();
        c.require(th == n + 1, cell_tag(2, n, n, n) + ": theta=" + std::to_string(th) +
                                   " expected=" + std::to_string(n + 1));
        if (c.done()) return;
    }
}

void chk_theta_basis_family(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            if (c.expired()) return;
            auto K = zk_of(q);
            std::vector<VecK> fam;
            for (int i = 0; i < n; ++i) fam.push_back(unit_vec(*K, n, i));
            std::vector<ZkElem> ones(static_cast<size_t>(n), K->one());
            fam.push_back(vec(*K, ones));
            bool ok = orthogonal_kl(*K, fam, n, n);
            c.tally();
            c.require(ok, cell_tag(q, n, n, n) + ": basis-plus-sum family rejected");
            if (c.done()) return;
            if (n <= c.max_k() && n <= c.max_l() && theta_cell(q, n, n)) {
                long long th = v_theta(q, n, n, n);
                c.tally();
                c.require(th >= n + 1, cell_tag(q, n, n, n) + ": theta=" + std::to_string(th) +
                                           " below the explicit family size " +
                                           std::to_string(n + 1));
                if (c.done()) return;
            }
        }
}

void chk_theta_program_definitional(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(q == 2 ? 3 : 2, c.max_n()); ++n)
            for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                for (int k = l; k <= std::min(4, c.max_k()); ++k) {
                    // The definitional search branches k-1 multiplicities per
                    // affine point; past this product it runs for hours.
                    if (affine_ground(q, n) * (k - 1) > 24) continue;
                    if (c.expired()) return;
                    long long got = v_theta(q, n, k, l);
                    long long def = theta_definitional_max(q, n, k, l);
                    c.tally();
                    c.require(got == def, cell_tag(q, n, k, l) + ": solver=" +
                                              std::to_string(got) + " definitional=" +
                                              std::to_string(def));
                    if (c.done()) return;
                }
}

// ---------------------------------------------------------------------------
// ind and ind_pro: cap programs, thresholds, monotonicity, bridges
// ---------------------------------------------------------------------------

void chk_ind_program_definitional(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n) {
            long long g = affine_ground(q, n);
            if (g > kDefinitionGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                for (int k = l; k <= std::min<long long>(c.max_k(), g); ++k) {
                    if (g > 8 && k > 3) continue;
                    if (c.expired()) return;
                    bool ok = cap_matches_definition_ind(q, n, k, l);
                    c.tally();
                    c.require(ok, cell_tag(q, n, k, l) + ": cap rule disagrees with the subset "
                                                         "definition");
                    if (c.done()) return;
                }
        }
}

void chk_pro_program_definitional(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= c.max_n(); ++n) {
            long long g = proj_ground(q, n);
            if (g > kDefinitionGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                for (int k = l; k <= std::min<long long>(c.max_k(), g); ++k) {
                    if (g > 8 && k > 3) continue;
                    if (c.expired()) return;
                    bool ok = cap_matches_definition_ind_pro(q, n, k, l);
                    c.tally();
                    c.require(ok, cell_tag(q, n, k, l) + ": cap rule disagrees with the subset "
                                                         "definition");
                    if (c.done()) return;
                }
        }
}

void chk_ind_stabilization(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long g = affine_ground(q, n);
            if (g > kAffineGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                long long kb = ipow(q, l - 1);
                if (kb > 9 || kb > g) continue;
                if (c.expired()) return;
                long long at = v_ind(q, n, static_cast<int>(kb), l);
                c.tally();
                c.require(at == g, cell_tag(q, n, static_cast<int>(kb), l) + ": ind=" +
                                       std::to_string(at) + " full=" + std::to_string(g));
                if (c.done()) return;
                if (kb - 1 >= l) {
                    long long below = v_ind(q, n, static_cast<int>(kb - 1), l);
                    c.tally();
                    c.require(below < g, cell_tag(q, n, static_cast<int>(kb - 1), l) + ": ind=" +
                                             std::to_string(below) + " already full below the "
                                                                     "threshold");
                    if (c.done()) return;
                }
            }
        }
}

void chk_ind_monotonicity(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long g = affine_ground(q, n);
            if (g > kAffineGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                long long kb = std::min<long long>(ipow(q, l - 1), c.max_k());
                long long prev = -1;
                for (long long k = l; k <= kb; ++k) {
                    if (c.expired()) return;
                    long long v = v_ind(q, n, static_cast<int>(k), l);
                    if (prev >= 0) {
                        c.tally();
                        c.require(prev < v, cell_tag(q, n, static_cast<int>(k), l) +
                                                ": ind stalled at " + std::to_string(v));
                        if (c.done()) return;
                    }
                    prev = v;
                }
            }
            for (int k = 2; k <= std::min<long long>(c.max_k(), g); ++k) {
                int plateau = floor_log(q, k) + 1;
                long long prev = -1;
                for (int l = 1; l <= std::min(k, n); ++l) {
                    if (c.expired()) return;
                    long long v = v_ind(q, n, k, l);
                    c.tally();
                    std::string tag = cell_tag(q, n, k, l) + ": ind=" + std::to_string(v);
                    if (l <= plateau) c.require(v == g, tag + " expected-full=" + std::to_string(g));
                    if (prev >= 0) {
                        if (l <= plateau) c.require(v == prev, tag + " plateau broken");
                        else c.require(v < prev, tag + " not strictly decreasing");
                    }
                    if (c.done()) return;
                    prev = v;
                }
                if (k <= n) {
                    long long tail = v_ind(q, n, k, k);
                    c.tally();
                    c.require(tail >= n + 1, cell_tag(q, n, k, k) + ": ind=" +
                                                 std::to_string(tail) + " below n+1");
                    if (c.done()) return;
                }
            }
        }
}

void chk_ind_pairwise_closed_form(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            if (affine_ground(q, n) > kAffineGroundMax) continue;
            for (int k = 2; k <= std::min<long long>(c.max_k(), q); ++k) {
                if (c.expired()) return;
                long long want = (k - 1) * proj_ground(q, n);
                long long got = v_ind(q, n, k, 2);
                c.tally();
                c.require(got == want, cell_tag(q, n, k, 2) + ": ind=" + std::to_string(got) +
                                           " expected=" + std::to_string(want));
                if (c.done()) return;
            }
        }
}

void chk_ind_dmm_threshold(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long g = affine_ground(q, n);
            if (g > kAffineGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                if (c.expired()) return;
                long long v = v_ind(q, n, l, l);
                bool cond = q * (n + 1) <= (q + 1) * static_cast<long long>(l);
                c.tally();
                c.require((v == n + 1) == cond,
                          cell_tag(q, n, l, l) + ": ind=" + std::to_string(v) +
                              " threshold-holds=" + (cond ? "true" : "false"));
                if (c.done()) return;
                for (int k = l + 1; k <= std::min<long long>({static_cast<long long>(c.max_k()),
                                                              ipow(q, l - 1), g});
                     ++k) {
                    if (c.expired()) return;
                    long long vk = v_ind(q, n, k, l);
                    c.tally();
                    c.require(vk != n + 1, cell_tag(q, n, k, l) + ": ind=" + std::to_string(vk) +
                                               " equals n+1 above k=l");
                    if (c.done()) return;
                }
            }
        }
}

void chk_ind_binary_values(Ctx& c) {
    if (std::find(c.prof.fields.begin(), c.prof.fields.end(), 2) == c.prof.fields.end()) return;
    for (int n = 3; n <= c.max_n(); ++n) {
        if (c.expired()) return;
        long long v = v_ind(2, n, 3, 3);
        c.tally();
        c.require(v == ipow(2, n - 1), cell_tag(2, n, 3, 3) + ": ind=" + std::to_string(v) +
                                           " expected=" + std::to_string(ipow(2, n - 1)));
        if (c.done()) return;
        for (int k = 4; k <= std::min<long long>(c.max_k(), affine_ground(2, n)); ++k) {
            if (c.expired()) return;
            long long vk = v_ind(2, n, k, 3);
            c.tally();
            c.require(vk == affine_ground(2, n),
                      cell_tag(2, n, k, 3) + ": ind=" + std::to_string(vk) + " expected=" +
                          std::to_string(affine_ground(2, n)));
            if (c.done()) return;
        }
    }
    for (int n = 2; n <= std::min({c.max_n(), c.max_k(), c.max_l()}); ++n) {
        if (c.expired()) return;
        long long v = v_ind(2, n, n, n);
        c.tally();
        c.require(v == n + 1, cell_tag(2, n, n, n) + ": ind=" + std::to_string(v) +
                                  " expected=" + std::to_string(n + 1));
        if (c.done()) return;
    }
}

void chk_pro_stabilization(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            if (m > kProjGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                long long boundary = (ipow(q, l - 1) - 1) / (q - 1);
                for (int k = l; k <= std::min<long long>(c.max_k(), m); ++k) {
                    if (c.expired()) return;
                    long long v = v_pro(q, n, k, l);
                    c.tally();
                    c.require((v == m) == (k > boundary),
                              cell_tag(q, n, k, l) + ": ind-pro=" + std::to_string(v) +
                                  " full=" + std::to_string(m) + " boundary=" +
                                  std::to_string(boundary));
                    if (c.done()) return;
                }
                if (boundary >= l && boundary + 1 <= m) {
                    if (c.expired()) return;
                    ProStabilizationReport rep = pro_stabilization_probe(q, n, l);
                    c.tally();
                    c.require(rep.strict_holds && !rep.ge_holds,
                              cell_tag(q, n, static_cast<int>(boundary), l) +
                                  ": boundary value " + std::to_string(rep.value_at_boundary) +
                                  " of " + std::to_string(rep.full_value) +
                                  " does not stabilize strictly above");
                    if (c.done()) return;
                }
            }
        }
}

void chk_pro_monotonicity(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            if (m > kProjGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                long long boundary = (ipow(q, l - 1) - 1) / (q - 1);
                long long kb = std::min<long long>({boundary, c.max_k(), m});
                long long prev = -1;
                for (long long k = l; k <= kb; ++k) {
                    if (c.expired()) return;
                    long long v = v_pro(q, n, static_cast<int>(k), l);
                    if (prev >= 0) {
                        c.tally();
                        c.require(prev < v, cell_tag(q, n, static_cast<int>(k), l) +
                                                ": ind-pro stalled at " + std::to_string(v));
                        if (c.done()) return;
                    }
                    prev = v;
                }
            }
            for (int k = 2; k <= std::min<long long>(c.max_k(), m); ++k) {
                int plateau = floor_log(q, (q - 1) * static_cast<long long>(k)) + 1;
                long long prev = -1;
                for (int l = 1; l <= std::min(k, n); ++l) {
                    if (c.expired()) return;
                    long long v = v_pro(q, n, k, l);
                    c.tally();
                    std::string tag = cell_tag(q, n, k, l) + ": ind-pro=" + std::to_string(v);
                    if (l <= plateau) c.require(v == m, tag + " expected-full=" + std::to_string(m));
                    if (prev >= 0) {
                        if (l <= plateau) c.require(v == prev, tag + " plateau broken");
                        else c.require(v < prev, tag + " not strictly decreasing");
                    }
                    if (c.done()) return;
                    prev = v;
                }
                if (k <= n) {
                    long long tail = v_pro(q, n, k, k);
                    c.tally();
                    c.require(tail >= n + 1, cell_tag(q, n, k, k) + ": ind-pro=" +
                                                 std::to_string(tail) + " below n+1");
                    if (c.done()) return;
                }
            }
        }
}

void chk_pro_ll_threshold(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            if (proj_ground(q, n) > kProjGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                if (c.expired()) return;
                long long v = v_pro(q, n, l, l);
                bool cond = q * (n + 1) <= (q + 1) * static_cast<long long>(l);
                c.tally();
                c.require((v == n + 1) == cond,
                          cell_tag(q, n, l, l) + ": ind-pro=" + std::to_string(v) +
                              " threshold-holds=" + (cond ? "true" : "false"));
                if (c.done()) return;
            }
        }
}

void chk_pro_affine_bridge(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            if (m > kProjGroundMax || affine_ground(q, n) > kAffineGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                for (int k = l; k <= std::min<long long>(c.max_k(), m); ++k) {
                    if (c.expired()) return;
                    long long pro = v_pro(q, n, k, l);
                    long long aff = v_ind(q, n, k, l);
                    c.tally();
                    std::string tag = cell_tag(q, n, k, l) + ": ind-pro=" + std::to_string(pro) +
                                      " ind=" + std::to_string(aff);
                    c.require(pro <= aff, tag);
                    if (k == l) c.require(pro == aff, tag + " (equality at k=l)");
                    c.require(ceil_div(aff, q - 1) <= pro, tag);
                    if (c.done()) return;
                    if (affine_ground(q, n) <= 26) {
                        long long scaled = v_ind(q, n, static_cast<int>((q - 1) * k), l);
                        c.require(pro <= floor_div(scaled, q - 1),
                                  tag + " scaled=" + std::to_string(scaled));
                        if (c.done()) return;
                    }
                }
        }
}

void chk_pro_affine_q2_coincidence(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            if (m > kProjGroundMax || affine_ground(q, n) > kAffineGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                long long boundary = (ipow(q, l - 1) - 1) / (q - 1);
                for (int k = l; k <= std::min<long long>({static_cast<long long>(c.max_k()),
                                                          boundary, m});
                     ++k) {
                    if (c.expired()) return;
                    long long pro = v_pro(q, n, k, l);
                    long long aff = v_ind(q, n, k, l);
                    bool equal = aff == (q - 1) * pro;
                    c.tally();
                    c.require(equal == (q == 2),
                              cell_tag(q, n, k, l) + ": ind=" + std::to_string(aff) +
                                  " (q-1)*ind-pro=" + std::to_string((q - 1) * pro));
                    if (c.done()) return;
                }
            }
            if (q == 2)
                for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                    for (int k = l; k <= std::min<long long>(c.max_k(), m); ++k) {
                        if (c.expired()) return;
                        long long pro = v_pro(q, n, k, l);
                        long long aff = v_ind(q, n, k, l);
                        c.tally();
                        c.require(pro == aff, cell_tag(q, n, k, l) + ": ind=" +
                                                  std::to_string(aff) + " ind-pro=" +
                                                  std::to_string(pro));
                        if (c.done()) return;
                    }
        }
}

// ---------------------------------------------------------------------------
// residue projection facts and exhaustive implications
// ---------------------------------------------------------------------------

void chk_rho_fiber_counts(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 1; n <= std::min(3, c.max_n()); ++n) {
            if (c.expired()) return;
            auto f = gf_of(q);
            std::vector<PointFq> pts = enumerate_points(*f, n);
            std::vector<PointFq> proj = enumerate_proj_points(*f, n);
            c.tally();
            if (static_cast<long long>(pts.size()) !=
                (q - 1) * static_cast<long long>(proj.size())) {
                c.fail_cell(cell_tag(q, n) + ": " + std::to_string(pts.size()) +
                            " points against " + std::to_string(proj.size()) +
                            " projective points");
                return;
            }
            std::map<long long, long long> fiber;
            for (const PointFq& v : pts) fiber[point_code(*f, rho(*f, v))] += 1;
            for (const auto& [z, t] : fiber)
                if (t != q - 1) {
                    c.fail_cell(cell_tag(q, n) + ": fiber of code " + std::to_string(z) +
                                " has size " + std::to_string(t));
                    return;
                }
            std::mt19937_64 rng(0xf1beULL + static_cast<unsigned long long>(q * 10 + n));
            for (int trial = 0; trial < 20; ++trial) {
                if (c.expired()) return;
                size_t sz = 1 + rng() % 6;
                std::set<long long> codes;
                while (codes.size() < sz && codes.size() < pts.size())
                    codes.insert(1 + static_cast<long long>(rng() % pts.size()));
                std::set<long long> image;
                std::vector<PointFq> chosen;
                for (long long code : codes) {
                    PointFq v = point_from_code(*f, n, code);
                    chosen.push_back(v);
                    image.insert(point_code(*f, rho(*f, v)));
                }
                long long t = static_cast<long long>(chosen.size());
                long long im = static_cast<long long>(image.size());
                c.tally();
                if (!(ceil_div(t, q - 1) <= im && im <= t)) {
                    c.fail_cell(cell_tag(q, n) + ": image size " + std::to_string(im) +
                                " outside [" + std::to_string(ceil_div(t, q - 1)) + ", " +
                                std::to_string(t) + "]");
                    return;
                }
                if (span_dim(*f, chosen) == static_cast<int>(chosen.size()) &&
                    im != t) {
                    c.fail_cell(cell_tag(q, n) + ": independent set with a collapsing image");
                    return;
                }
            }
            for (int s = 1; s <= n; ++s)
                for (const SubspaceFq& w : enumerate_subspaces(*f, s, n)) {
                    if (c.expired()) return;
                    std::set<long long> image;
                    std::vector<PointFq> reps;
                    for (size_t i = 0; i < w.rows.size(); ++i) {
                        GfElem unit = f->elem(1 + static_cast<long long>(i % (f->q() - 1)));
                        reps.push_back(point_scale(*f, unit, w.rows[i]));
                        image.insert(point_code(*f, rho(*f, w.rows[i])));
                    }
                    c.tally();
                    if (image.size() != w.rows.size()) {
                        c.fail_cell(cell_tag(q, n, -1, -1, s) +
                                    ": independent rows collapse under the projection");
                        return;
                    }
                    if (span_dim(*f, reps) != static_cast<int>(reps.size())) {
                        c.fail_cell(cell_tag(q, n, -1, -1, s) +
                                    ": projectively independent lifts came out dependent");
                        return;
                    }
                }
        }
}

void chk_ll_implies_22(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(q == 2 ? 3 : 2, c.max_n()); ++n) {
            auto f = gf_of(q);
            std::vector<PointFq> pts = enumerate_points(*f, n);
            size_t g = pts.size();
            for (uint32_t mask = 0; mask < (1u << g); ++mask) {
                if (c.expired()) return;
                std::vector<PointFq> s;
                for (size_t i = 0; i < g; ++i)
                    if (mask & (1u << i)) s.push_back(pts[i]);
                for (int l = 2; l <= std::min(n, c.max_l()); ++l) {
                    c.tally();
                    if (independent_kl(*f, s, l, l) && !independent_kl(*f, s, 2, 2)) {
                        c.fail_cell(cell_tag(q, n, -1, l) + " mask=" + std::to_string(mask) +
                                    ": (l,l)-independent but not (2,2)-independent");
                        return;
                    }
                }
            }
        }
}

void chk_rho_image_pro_independent(Ctx& c) {
    for (long long q : c.prof.fields)
        for (int n = 2; n <= std::min(q == 2 ? 3 : 2, c.max_n()); ++n) {
            auto f = gf_of(q);
            std::vector<PointFq> pts = enumerate_points(*f, n);
            size_t g = pts.size();
            for (uint32_t mask = 0; mask < (1u << g); ++mask) {
                if (c.expired()) return;
                std::vector<PointFq> s;
                for (size_t i = 0; i < g; ++i)
                    if (mask & (1u << i)) s.push_back(pts[i]);
                std::set<long long> codes;
                for (const PointFq& v : s) codes.insert(point_code(*f, rho(*f, v)));
                std::vector<PointFq> image;
                for (long long code : codes) image.push_back(point_from_code(*f, n, code));
                for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                    for (int k = l; k <= std::min(4, c.max_k()); ++k) {
                        if (!independent_kl(*f, s, k, l)) continue;
                        c.tally();
                        if (!pro_independent_kl(*f, image, k, l)) {
                            c.fail_cell(cell_tag(q, n, k, l) + " mask=" + std::to_string(mask) +
                                        ": image not pro-independent");
                            return;
                        }
                        if (k == l && image.size() != s.size()) {
                            c.fail_cell(cell_tag(q, n, k, l) + " mask=" + std::to_string(mask) +
                                        ": projection collapses a (l,l)-independent set");
                            return;
                        }
                    }
            }
        }
}

// ---------------------------------------------------------------------------
// gamma and witnesses
// ---------------------------------------------------------------------------

void chk_gamma_equals_pro(Ctx& c) {
    const std::pair<int, int> kl[] = {{2, 2}, {3, 2}, {3, 3}};
    for (long long q : c.prof.fields) {
        int n_pred = q == 2 ? std::min(3, c.max_n()) : 2;
        for (int n = 2; n <= n_pred; ++n) {
            auto K = zk_of(q);
            auto f = gf_of(q);
            std::vector<PointFq> proj = enumerate_proj_points(*f, n);
            size_t g = proj.size();
            if (g > 7) continue;
            for (uint32_t mask = 0; mask < (1u << g); ++mask) {
                if (c.expired()) return;
                std::vector<PointFq> s;
                std::vector<VecK> lifts;
                for (size_t i = 0; i < g; ++i)
                    if (mask & (1u << i)) {
                        s.push_back(proj[i]);
                        lifts.push_back(lifted(*K, proj[i],
                                               i % 2 == 0 ? zero_point(*f, n) : proj[0]));
                    }
                for (auto [k, l] : kl) {
                    if (k > c.max_k() || l > c.max_l() || l > n) continue;
                    bool pro = pro_independent_kl(*f, s, k, l);
                    bool strong = strongly_orthogonal_kl(*K, lifts, k, l);
                    c.tally();
                    if (pro != strong) {
                        c.fail_cell(cell_tag(q, n, k, l) + " mask=" + std::to_string(mask) +
                                    ": pro-independent=" + (pro ? "true" : "false") +
                                    " strongly-orthogonal=" + (strong ? "true" : "false"));
                        return;
                    }
                }
            }
        }
    }
    for (long long q : c.prof.fields)
        for (int n = 2; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            if (m > kThetaGroundMax) continue;
            for (int l = 2; l <= std::min(n, c.max_l()); ++l)
                for (int k = l; k <= std::min<long long>(c.max_k(), m); ++k) {
                    if (c.expired()) return;
                    ExtremalResult gr = gamma_strong(q, n, k, l, kSeeded);
                    long long pro = v_pro(q, n, k, l);
                    c.tally();
                    c.require(gr.value == pro, cell_tag(q, n, k, l) + ": gamma=" +
                                                   std::to_string(gr.value) + " ind-pro=" +
                                                   std::to_string(pro));
                    if (c.done()) return;
                    try {
                        validate_witness(gr);
                    } catch (const Error& e) {
                        c.fail_cell(cell_tag(q, n, k, l) + ": witness rejected: " + e.what());
                        return;
                    }
                }
        }
}

void chk_witness_oracle_roundtrip(Ctx& c) {
    for (long long q : c.prof.fields) {
        std::vector<ExtremalQuery> queries;
        for (int n = 2; n <= c.max_n(); ++n) {
            long long m = proj_ground(q, n);
            queries.push_back({Quantity::delta, q, n, 0, std::min(4, c.max_k()), 2});
            if (c.max_l() >= 3 && c.max_k() >= 3 && m >= 2)
                queries.push_back({Quantity::delta, q, n, 0, 3, 3});
            queries.push_back({Quantity::omega, q, n, 1, std::min(3, c.max_k()), 2});
            if (affine_ground(q, n) <= kAffineGroundMax)
                queries.push_back({Quantity::ind, q, n, 0, 2, 2});
            if (m <= kProjGroundMax) queries.push_back({Quantity::ind_pro, q, n, 0, 2, 2});
            if (theta_cell(q, n, 3) && c.max_k() >= 3)
                queries.push_back({Quantity::theta, q, n, 0, 3, 2});
            if (m <= kThetaGroundMax) queries.push_back({Quantity::gamma, q, n, 0, 2, 2});
        }
        for (const ExtremalQuery& query : queries) {
            if (c.expired()) return;
            ExtremalResult r = solve(query, kSeeded);
            try {
                validate_witness(r);
            } catch (const Error& e) {
                if (e.code() == Errc::budget) continue;  // witness too large to re-check
                c.fail_cell(query_key(query) + ": witness rejected: " + e.what());
                return;
            }
            c.tally();
        }
    }
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

struct RegisteredCheck {
    const char* id;
    const char* summary;
    void (*fn)(Ctx&);
};

// Sorted by id; check_ids() and run_all() expose this order.
constexpr RegisteredCheck kRegistry[] = {
    {"delta-pairwise-closed-form",
     "largest pairwise-weakly-orthogonal multiset has size (k-1)(q^n-1)/(q-1)",
     chk_delta_pairwise_closed_form},
    {"delta-profile-program",
     "slot-program solver agrees with literal profile enumeration and its witnesses validate",
     chk_delta_profile_program},
    {"delta-sandwich",
     "weak-orthogonality maximum sits between floor((k-1)/(l-1))m and floor((k-1)m/(l-1))",
     chk_delta_sandwich},
    {"delta-vacuous-regime",
     "with fewer than l-1 residue fibers the weak-orthogonality maximum is k-1",
     chk_delta_vacuous_regime},
    {"feeble-orthogonality-mu",
     "subspaces are feebly orthogonal exactly when their residue images differ",
     chk_feeble_orthogonality_mu},
    {"feeble-orthogonality-profile",
     "family oracle matches the window bound on residue-subspace multiplicities",
     chk_feeble_orthogonality_profile},
    {"gamma-equals-pro",
     "strong orthogonality is projective independence, as predicates and as maxima",
     chk_gamma_equals_pro},
    {"grassmannian-counts", "enumerated subspace counts equal the gaussian binomials",
     chk_grassmannian_counts},
    {"hadamard-orthogonality",
     "on the sphere the wedge norm is at most one with equality exactly at orthogonal sets "
     "of full residue rank",
     chk_hadamard_orthogonality},
    {"ind-binary-values", "q=2 independence numbers match their closed values",
     chk_ind_binary_values},
    {"ind-dmm-threshold",
     "ind(n,l,l)=n+1 exactly when q(n+1) <= (q+1)l, and never above k=l",
     chk_ind_dmm_threshold},
    {"ind-monotonicity",
     "ind increases strictly in k below the threshold and decreases in l after the full "
     "plateau",
     chk_ind_monotonicity},
    {"ind-pairwise-closed-form", "ind(n,k,2)=(k-1)(q^n-1)/(q-1) for k <= q",
     chk_ind_pairwise_closed_form},
    {"ind-program-definitional",
     "the subspace-cap rule equals the literal subset definition on small grounds",
     chk_ind_program_definitional},
    {"ind-stabilization", "ind reaches q^n-1 exactly from k = q^(l-1) on", chk_ind_stabilization},
    {"ind-theta-lower", "ind is at most theta, with equality at k=l", chk_ind_theta_lower},
    {"lift-span-dimension",
     "digit-section lifts of an independent residue basis span that dimension and project back",
     chk_lift_span_dimension},
    {"ll-implies-22", "every (l,l)-independent set is (2,2)-independent", chk_ll_implies_22},
    {"mu-preserves-dimension", "the residue image of a K-subspace is a subspace of equal "
                               "dimension",
     chk_mu_preserves_dimension},
    {"omega-grassmann-sandwich",
     "feeble-orthogonality maximum obeys the gaussian-binomial sandwich", chk_omega_grassmann_sandwich},
    {"omega-vacuous-regime",
     "with fewer than l-1 subspace fibers the feeble-orthogonality maximum is k-1",
     chk_omega_vacuous_regime},
    {"orthogonality-residue-rank",
     "(k,l)-orthogonality of sphere multisets equals the residue-rank condition on k-subsets",
     chk_orthogonality_residue_rank},
    {"pair-orthogonality-residues",
     "sphere vectors are orthogonal exactly when their projective residues differ",
     chk_pair_orthogonality_residues},
    {"pro-affine-bridge",
     "ind-pro is squeezed between ceil(ind/(q-1)) and floor(ind((q-1)k)/(q-1))",
     chk_pro_affine_bridge},
    {"pro-affine-q2-coincidence",
     "affine and projective independence numbers coincide exactly at q=2",
     chk_pro_affine_q2_coincidence},
    {"pro-ll-threshold", "ind-pro(n,l,l)=n+1 exactly when q(n+1) <= (q+1)l", chk_pro_ll_threshold},
    {"pro-monotonicity",
     "ind-pro increases strictly in k below the threshold and decreases in l after the full "
     "plateau",
     chk_pro_monotonicity},
    {"pro-program-definitional",
     "the projective cap rule equals the literal subset definition on small grounds",
     chk_pro_program_definitional},
    {"pro-stabilization",
     "ind-pro reaches (q^n-1)/(q-1) exactly from k = (q^(l-1)-1)/(q-1)+1 on",
     chk_pro_stabilization},
    {"rho-fiber-counts", "the projectivization is (q-1)-to-1 and preserves independence",
     chk_rho_fiber_counts},
    {"rho-image-pro-independent",
     "projectivizing a (k,l)-independent set yields a pro-independent set, injectively at k=l",
     chk_rho_image_pro_independent},
    {"theta-basis-family", "the basis-plus-sum family of size n+1 is (n,n)-orthogonal",
     chk_theta_basis_family},
    {"theta-binary-values", "q=2 orthogonality maxima match their closed values",
     chk_theta_binary_values},
    {"theta-delta-upper", "theta is at most delta, which carries the floor bound",
     chk_theta_delta_upper},
    {"theta-ll-threshold", "theta(l,l)=n+1 exactly when q(n+1) <= (q+1)l", chk_theta_ll_threshold},
    {"theta-pairwise-formula", "theta at l=2 equals delta at l=2", chk_theta_pairwise_formula},
    {"theta-program-definitional",
     "the multiset cap search agrees with the oracle-driven profile maximum",
     chk_theta_program_definitional},
    {"theta-ratio-bounds",
     "theta sits between floor((k-1)/(l-1)) theta(l,l) and (k-l+1) ind", chk_theta_ratio_bounds},
    {"theta-strict-below-delta", "theta(l,l) is strictly below delta(l,l) for l >= 3",
     chk_theta_strict_below_delta},
    {"weak-orthogonality-profile",
     "weak-orthogonality oracle matches the window bound on residue-fiber multiplicities",
     chk_weak_orthogonality_profile},
    {"wedge-norm-formula", "the wedge norm equals the largest minor determinant norm",
     chk_wedge_norm_formula},
    {"witness-oracle-roundtrip", "solver witnesses re-validate under their literal predicates",
     chk_witness_oracle_roundtrip},
};

constexpr size_t kRegistrySize = sizeof(kRegistry) / sizeof(kRegistry[0]);

const RegisteredCheck* find_check(std::string_view id) {
    for (const RegisteredCheck& rc : kRegistry)
        if (id == rc.id) return &rc;
    return nullptr;
}

}  // namespace

std::string_view check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
    }
    return "unknown";
}

VerifyProfile builtin_profile(std::string_view name) {
    VerifyProfile p;
    if (name == "tiny") {
        p = {"tiny", {2}, 2, 4, 4, 2'000, 1};
    } else if (name == "default") {
        p = {"default", {2, 3}, 3, 5, 5, 60'000, 1};
    } else if (name == "extended") {
        p = {"extended", {2, 3, 4}, 4, 5, 5, 240'000, 2};
    } else {
        fail(Errc::invalid_argument, "unknown verify profile: " + std::string(name));
    }
    return p;
}

VerifyProfile load_profile(const std::string& path, std::string_view name) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, path + ": cannot read profile file");
    VerifyProfile p;
    bool have_builtin = name == "tiny" || name == "default" || name == "extended";
    p = have_builtin ? builtin_profile(name) : builtin_profile("default");
    p.name = std::string(name);
    bool seen = false;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = path + ":" + std::to_string(lineno);
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        std::string body = line.substr(b, e - b + 1);
        size_t dot = body.find('.');
        size_t eq = body.find('=');
        if (dot == std::string::npos || eq == std::string::npos || dot > eq)
            fail(Errc::parse, where + ": expected <profile>.<key>=<value>");
        std::string pname = body.substr(0, dot);
        std::string key = body.substr(dot + 1, eq - dot - 1);
        std::string value = body.substr(eq + 1);
        if (pname != name) continue;
        seen = true;
        auto as_int = [&](const std::string& v) -> long long {
            size_t pos = 0;
            long long r = 0;
            try {
                r = std::stoll(v, &pos);
            } catch (const std::exception&) {
                fail(Errc::parse, where + ": malformed integer '" + v + "'");
            }
            if (pos != v.size()) fail(Errc::parse, where + ": malformed integer '" + v + "'");
            return r;
        };
        if (key == "fields") {
            p.fields.clear();
            size_t start = 0;
            while (start <= value.size()) {
                size_t comma = value.find(',', start);
                std::string item = value.substr(
                    start, comma == std::string::npos ? std::string::npos : comma - start);
                if (!item.empty()) p.fields.push_back(as_int(item));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            if (p.fields.empty()) fail(Errc::parse, where + ": empty field list");
        } else if (key == "max_n") {
            p.max_n = static_cast<int>(as_int(value));
        } else if (key == "max_k") {
            p.max_k = static_cast<int>(as_int(value));
        } else if (key == "max_l") {
            p.max_l = static_cast<int>(as_int(value));
        } else if (key == "check_ms") {
            p.check_ms = as_int(value);
        } else if (key == "threads") {
            p.threads = static_cast<int>(as_int(value));
        } else {
            fail(Errc::parse, where + ": unknown key '" + key + "'");
        }
    }
    if (!seen && !have_builtin)
        fail(Errc::invalid_argument,
             path + ": no entries for profile '" + std::string(name) + "' and no built-in");
    return p;
}

std::vector<std::string> check_ids() {
    std::vector<std::string> ids;
    ids.reserve(kRegistrySize);
    for (const RegisteredCheck& rc : kRegistry) ids.push_back(rc.id);
    return ids;
}

bool has_check(std::string_view id) { return find_check(id) != nullptr; }

std::string_view check_summary(std::string_view id) {
    const RegisteredCheck* rc = find_check(id);
    if (!rc) fail(Errc::invalid_argument, "unknown check id: " + std::string(id));
    return rc->summary;
}

CheckOutcome run_check(std::string_view id, const VerifyProfile& profile) {
    const RegisteredCheck* rc = find_check(id);
    if (!rc) fail(Errc::invalid_argument, "unknown check id: " + std::string(id));
    Ctx ctx(profile);
    auto start = Clock::now();
    try {
        rc->fn(ctx);
    } catch (const Error& e) {
        if (e.code() == Errc::budget || e.code() == Errc::cap_exceeded) {
            ctx.status = CheckStatus::skipped;
            ctx.detail = std::string("budget: ") + e.what();
        } else {
            ctx.status = CheckStatus::fail;
            ctx.detail = std::string("error: ") + e.what();
        }
    } catch (const std::exception& e) {
        ctx.status = CheckStatus::fail;
        ctx.detail = std::string("error: ") + e.what();
    }
    CheckOutcome out;
    out.id = rc->id;
    out.status = ctx.status;
    out.cases = ctx.cases;
    out.millis = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    out.detail = ctx.detail;
    return out;
}

std::vector<CheckOutcome> run_all(const VerifyProfile& profile) {
    std::vector<CheckOutcome> outcomes(kRegistrySize);
    int workers = std::max(1, profile.threads);
    if (workers == 1) {
        for (size_t i = 0; i < kRegistrySize; ++i)
            outcomes[i] = run_check(kRegistry[i].id, profile);
        return outcomes;
    }
    for (long long q : profile.fields) {
        gf_of(q);
        zk_of(q);
    }
    std::atomic<size_t> next{0};
    auto work = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= kRegistrySize) return;
            outcomes[i] = run_check(kRegistry[i].id, profile);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    return outcomes;
}

std::string outcome_line(const CheckOutcome& o) {
    return "check\t" + o.id + "\t" + std::string(check_status_name(o.status)) + "\t" +
           std::to_string(o.millis) + "\t" + std::to_string(o.cases) + "\t" + o.detail;
}

std::string render_report(std::span<const CheckOutcome> outcomes) {
    size_t width = 4;
    for (const CheckOutcome& o : outcomes) width = std::max(width, o.id.size());
    std::string out;
    long long passed = 0, failed = 0, skipped = 0;
    for (const CheckOutcome& o : outcomes) {
        out += o.id;
        out.append(width - o.id.size() + 2, ' ');
        std::string status(check_status_name(o.status));
        out += status;
        out.append(9 - status.size(), ' ');
        std::string ms = std::to_string(o.millis) + "ms";
        out += ms;
        out.append(ms.size() < 8 ? 8 - ms.size() : 1, ' ');
        out += std::to_string(o.cases) + " cases";
        if (!o.detail.empty()) out += "  " + o.detail;
        out += "\n";
        if (o.status == CheckStatus::pass) ++passed;
        else if (o.status == CheckStatus::fail) ++failed;
        else ++skipped;
    }
    out += std::to_string(outcomes.size()) + " checks: " + std::to_string(passed) + " passed, " +
           std::to_string(failed) + " failed, " + std::to_string(skipped) + " skipped\n";
    return out;
}

int report_exit_code(std::span<const CheckOutcome> outcomes) {
    bool any_fail = false, any_skip = false;
    for (const CheckOutcome& o : outcomes) {
        any_fail = any_fail || o.status == CheckStatus::fail;
        any_skip = any_skip || o.status == CheckStatus::skipped;
    }
    if (any_fail) return 1;
    return any_skip ? 2 : 0;
}

}  // namespace umo
