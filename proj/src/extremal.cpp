#include "umo/extremal.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <thread>
#include <utility>

#include "umo/errors.hpp"

namespace umo {

namespace {

using Clock = std::chrono::steady_clock;

std::chrono::milliseconds since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0);
}

long long pow_checked(long long q, int n) {
    __int128 r = 1;
    for (int i = 0; i < n; ++i) {
        r *= q;
        if (r > std::numeric_limits<long long>::max())
            fail(Errc::cap_exceeded, "q^n does not fit 64 bits");
    }
    return static_cast<long long>(r);
}

ExtremalResult make_result(const ExtremalQuery& query, long long value, const char* method,
                           Witness witness, Clock::time_point t0) {
    ExtremalResult r;
    r.query = query;
    r.value = value;
    r.method = method;
    r.witness = std::move(witness);
    r.elapsed = since(t0);
    return r;
}

void append_joined(std::string& out, const std::vector<long long>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
}

std::string hex16(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// C(n, r) clamped to 2^62 so budget comparisons cannot overflow.
long long comb_count(long long n, long long r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    __int128 c = 1;
    for (long long i = 1; i <= r; ++i) {
        c = c * (n - r + i) / i;
        if (c > (__int128{1} << 62)) return 1LL << 62;
    }
    return static_cast<long long>(c);
}

void oracle_preflight(std::size_t size, int k, int l, long long budget, long long extra) {
    __int128 cost = static_cast<__int128>(comb_count(static_cast<long long>(size), k)) *
                        comb_count(k, l) +
                    extra;
    if (cost > budget) fail(Errc::budget, "subset enumeration exceeds the oracle budget");
}

// Walks the size-r subsets of [0, n) in lexicographic order and reports
// whether fn returned true for any of them; fn(true) stops the walk.
template <class Fn>
bool any_combination(std::size_t n, int r, Fn&& fn) {
    if (r < 0 || static_cast<std::size_t>(r) > n) return false;
    std::vector<std::size_t> idx(static_cast<std::size_t>(r));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (r == 0) return fn(idx);
    for (;;) {
        if (fn(idx)) return true;
        int i = r - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - static_cast<std::size_t>(r - i))
            --i;
        if (i < 0) return false;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

void check_kl(int k, int l, int least_l) {
    if (l < least_l || k < l)
        fail(Errc::invalid_argument,
             "the (k,l) predicates need k >= l >= " + std::to_string(least_l));
}

// Digit tails distinguish lifts within one residue fiber: tail index j is
// written base q across the positions (coord, depth) with depth in
// [1, precision), depth varying fastest within each coordinate.
VecK apply_tail(const Zk& K, VecK v, long long tail) {
    const Gf& f = *K.field_ptr();
    long long q = f.q();
    long long depths = K.precision() - 1;
    long long limit = static_cast<long long>(v.entries.size()) * depths;
    for (long long pos = 0, t = tail; t > 0; ++pos, t /= q) {
        long long digit = t % q;
        if (digit == 0) continue;
        if (pos >= limit)
            fail(Errc::precision, "witness multiplicity exceeds the representable digit tails");
        auto coord = static_cast<std::size_t>(pos / depths);
        long long depth = 1 + pos % depths;
        ZkElem term = K.shift(K.delta(f.elem(digit)), depth);
        v.entries[coord] = K.add(v.entries[coord], term);
    }
    return v;
}

// Nonzero element of pi*O with digit pattern tau; tau = 0 is rejected by the
// callers, which reserve it for the unperturbed lift.
ZkElem depth_code(const Zk& K, long long tau) {
    const Gf& f = *K.field_ptr();
    std::vector<ZkElem> terms;
    for (long long depth = 1, t = tau; t > 0; ++depth, t /= f.q()) {
        long long digit = t % f.q();
        if (digit == 0) continue;
        if (depth > K.precision() - 1)
            fail(Errc::precision, "witness multiplicity exceeds the representable digit tails");
        terms.push_back(K.shift(K.delta(f.elem(digit)), depth));
    }
    return K.sum(terms);
}

std::vector<PointFq> points_from_codes(const Gf& f, int n, const std::vector<long long>& codes) {
    std::vector<PointFq> out;
    out.reserve(codes.size());
    long long prev = 0;
    for (long long code : codes) {
        if (code <= prev)
            fail(Errc::invalid_argument, "witness codes must be ascending and distinct");
        prev = code;
        out.push_back(point_from_code(f, n, code));
    }
    return out;
}

// Ground set, constraint subspaces, and the point -> subspace incidence used
// by the cap searches.
struct CapInstance {
    std::shared_ptr<const Gf> field;
    std::vector<PointFq> ground;
    std::vector<long long> codes;
    std::vector<std::vector<int>> cover;
    int subspace_count = 0;
    std::size_t min_cover = 0;
};

CapInstance build_cap_instance(long long q, int n, int l, bool projective) {
    auto [p, mdeg] = prime_power_parts(q);
    CapInstance inst;
    inst.field = Gf::make(p, mdeg);
    const Gf& f = *inst.field;
    inst.ground = projective ? enumerate_proj_points(f, n) : enumerate_points(f, n);
    auto subs = enumerate_subspaces(f, l - 1, n);
    inst.subspace_count = static_cast<int>(subs.size());
    inst.codes.reserve(inst.ground.size());
    inst.cover.resize(inst.ground.size());
    inst.min_cover = subs.size();
    for (std::size_t i = 0; i < inst.ground.size(); ++i) {
        inst.codes.push_back(point_code(f, inst.ground[i]));
        for (int j = 0; j < inst.subspace_count; ++j)
            if (subspace_contains(f, subs[static_cast<std::size_t>(j)], inst.ground[i]))
                inst.cover[i].push_back(j);
        inst.min_cover = std::min(inst.min_cover, inst.cover[i].size());
    }
    return inst;
}

struct CapSearch {
    const CapInstance* inst = nullptr;
    int cap = 0;
    int max_mult = 1;
    std::vector<char> forced;
};

int slot_max(const CapSearch& s, const std::vector<int>& caps, std::size_t i) {
    int hi = s.max_mult;
    for (int j : s.inst->cover[i]) hi = std::min(hi, caps[static_cast<std::size_t>(j)]);
    return hi;
}

// Upper bound on the mass still placeable from slot i on: per-slot headroom,
// tightened by the aggregate capacity left across all subspaces (each unit of
// mass consumes at least min_cover capacity).
long long remaining_bound(const CapSearch& s, const std::vector<int>& caps, long long caps_total,
                          std::size_t i) {
    long long by_points = 0;
    for (std::size_t j = i; j < s.inst->ground.size(); ++j) by_points += slot_max(s, caps, j);
    if (s.inst->min_cover > 0)
        by_points = std::min(by_points, caps_total / static_cast<long long>(s.inst->min_cover));
    return by_points;
}

void publish_max(std::atomic<long long>& best, long long v) {
    long long cur = best.load(std::memory_order_relaxed);
    while (v > cur && !best.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
    }
}

void apply_slot(const CapSearch& s, std::vector<int>& caps, long long& caps_total, std::size_t i,
                int mv) {
    for (int j : s.inst->cover[i]) caps[static_cast<std::size_t>(j)] -= mv;
    caps_total -= static_cast<long long>(mv) * static_cast<long long>(s.inst->cover[i].size());
}

void dfs_value(const CapSearch& s, std::vector<int>& caps, long long& caps_total, std::size_t i,
               long long cur, std::atomic<long long>& best) {
    publish_max(best, cur);
    if (i == s.inst->ground.size()) return;
    if (cur + remaining_bound(s, caps, caps_total, i) <= best.load(std::memory_order_relaxed))
        return;
    int hi = slot_max(s, caps, i);
    int lo = !s.forced.empty() && s.forced[i] ? 1 : 0;
    for (int mv = hi; mv >= lo; --mv) {
        if (mv) apply_slot(s, caps, caps_total, i, mv);
        dfs_value(s, caps, caps_total, i + 1, cur + mv, best);
        if (mv) apply_slot(s, caps, caps_total, i, -mv);
    }
}

struct Prefix {
    std::vector<int> caps;
    long long caps_total = 0;
    long long cur = 0;
};

void collect_prefixes(const CapSearch& s, std::vector<int>& caps, long long& caps_total,
                      std::size_t i, std::size_t depth, long long cur, std::vector<Prefix>& out) {
    if (i == depth) {
        out.push_back({caps, caps_total, cur});
        return;
    }
    int hi = slot_max(s, caps, i);
    int lo = !s.forced.empty() && s.forced[i] ? 1 : 0;
    for (int mv = hi; mv >= lo; --mv) {
        if (mv) apply_slot(s, caps, caps_total, i, mv);
        collect_prefixes(s, caps, caps_total, i + 1, depth, cur + mv, out);
        if (mv) apply_slot(s, caps, caps_total, i, -mv);
    }
}

long long search_value(const CapSearch& s, int threads) {
    std::vector<int> caps(static_cast<std::size_t>(s.inst->subspace_count), s.cap);
    long long caps_total = static_cast<long long>(s.cap) * s.inst->subspace_count;
    std::atomic<long long> best{0};
    std::size_t points = s.inst->ground.size();
    if (threads <= 1 || points == 0) {
        dfs_value(s, caps, caps_total, 0, 0, best);
        return best.load();
    }
    std::size_t depth = 0;
    long long fan = 1;
    while (depth < std::min<std::size_t>(points, 8) && fan < 4LL * threads) {
        fan *= s.max_mult + 1;
        ++depth;
    }
    std::vector<Prefix> prefixes;
    collect_prefixes(s, caps, caps_total, 0, depth, 0, prefixes);
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    auto worker = [&] {
        for (;;) {
            std::size_t at = cursor.fetch_add(1);
            if (at >= prefixes.size()) break;
            Prefix local = prefixes[at];
            dfs_value(s, local.caps, local.caps_total, depth, local.cur, best);
        }
    };
    std::size_t nworkers = std::max<std::size_t>(
        1, std::min<std::size_t>(static_cast<std::size_t>(threads), prefixes.size()));
    pool.reserve(nworkers);
    for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return best.load();
}

// First assignment that reaches the optimum with slots in enumeration order
// and multiplicities tried high to low: that is the lexicographically least
// flattened configuration attaining it.
bool dfs_witness(const CapSearch& s, std::vector<int>& caps, long long& caps_total, std::size_t i,
                 long long cur, long long target, std::vector<int>& mult) {
    if (cur == target) return true;
    if (i == s.inst->ground.size()) return false;
    if (cur + remaining_bound(s, caps, caps_total, i) < target) return false;
    int hi = slot_max(s, caps, i);
    for (int mv = hi; mv >= 0; --mv) {
        mult[i] = mv;
        if (mv) apply_slot(s, caps, caps_total, i, mv);
        if (dfs_witness(s, caps, caps_total, i + 1, cur + mv, target, mult)) return true;
        if (mv) apply_slot(s, caps, caps_total, i, -mv);
        mult[i] = 0;
    }
    return false;
}

ExtremalResult run_cap_solver(const ExtremalQuery& query, bool projective, int max_mult,
                              const SolveOptions& opts) {
    validate_query(query);
    auto t0 = Clock::now();
    auto [p, mdeg] = prime_power_parts(query.q);
    if (query.l == 1) {
        const auto field = Gf::make(p, mdeg);
        auto pts = projective ? enumerate_proj_points(*field, query.n)
                              : enumerate_points(*field, query.n);
        std::vector<long long> codes;
        codes.reserve(pts.size());
        for (const PointFq& v : pts) codes.push_back(point_code(*field, v));
        auto value = static_cast<long long>(codes.size());
        return make_result(query, value, "closed-form", PointSetWitness{projective, std::move(codes)},
                           t0);
    }
    CapInstance inst = build_cap_instance(query.q, query.n, query.l, projective);
    CapSearch search{&inst, query.k - 1, max_mult, {}};
    if (opts.fix_first_basis) {
        search.forced.assign(inst.ground.size(), 0);
        long long code = 1;
        for (int j = 0; j < query.l; ++j, code *= query.q) {
            auto it = std::find(inst.codes.begin(), inst.codes.end(), code);
            if (it == inst.codes.end())
                fail(Errc::invalid_argument, "canonical basis point missing from the ground set");
            search.forced[static_cast<std::size_t>(it - inst.codes.begin())] = 1;
        }
    }
    long long value = search_value(search, std::max(1, opts.threads));

    CapSearch plain{&inst, query.k - 1, max_mult, {}};
    std::vector<int> caps(static_cast<std::size_t>(inst.subspace_count), plain.cap);
    long long caps_total = static_cast<long long>(plain.cap) * inst.subspace_count;
    std::vector<int> mult(inst.ground.size(), 0);
    if (!dfs_witness(plain, caps, caps_total, 0, 0, value, mult))
        fail(Errc::invalid_argument, "cap search lost its optimum during the tie-break pass");

    Witness w;
    if (query.quantity != Quantity::theta) {
        std::vector<long long> codes;
        for (std::size_t i = 0; i < mult.size(); ++i)
            if (mult[i]) codes.push_back(inst.codes[i]);
        w = PointSetWitness{projective, std::move(codes)};
    } else {
        MultisetWitness mw;
        for (std::size_t i = 0; i < mult.size(); ++i)
            if (mult[i]) mw.entries.emplace_back(inst.codes[i], mult[i]);
        w = std::move(mw);
    }
    return make_result(query, value, "branch-and-bound", std::move(w), t0);
}

}  // namespace

std::string_view quantity_name(Quantity x) {
    switch (x) {
        case Quantity::delta: return "delta";
        case Quantity::omega: return "omega";
        case Quantity::ind: return "ind";
        case Quantity::ind_pro: return "ind-pro";
        case Quantity::theta: return "theta";
        case Quantity::gamma: return "gamma";
    }
    fail(Errc::invalid_argument, "unknown quantity tag");
}

Quantity quantity_parse(std::string_view name) {
    for (Quantity x : {Quantity::delta, Quantity::omega, Quantity::ind, Quantity::ind_pro,
                       Quantity::theta, Quantity::gamma})
        if (name == quantity_name(x)) return x;
    fail(Errc::parse, "unknown quantity name: " + std::string(name));
}

std::pair<long long, int> prime_power_parts(long long q) {
    if (q < 2) fail(Errc::invalid_argument, "q must be a prime power of at least 2");
    long long p = q;
    for (long long d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    int m = 0;
    long long rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++m;
    }
    if (rest != 1) fail(Errc::invalid_argument, std::to_string(q) + " is not a prime power");
    return {p, m};
}

void validate_query(const ExtremalQuery& query) {
    prime_power_parts(query.q);
    if (query.n < 1) fail(Errc::invalid_argument, "n must be at least 1");
    if (query.k < query.l) fail(Errc::invalid_argument, "k must be at least l");
    int least_l = query.quantity == Quantity::ind || query.quantity == Quantity::ind_pro ? 1 : 2;
    if (query.l < least_l)
        fail(Errc::invalid_argument, "l must be at least " + std::to_string(least_l));
    if (query.quantity == Quantity::omega) {
        if (query.s < 1 || query.s > query.n)
            fail(Errc::invalid_argument, "omega needs 1 <= s <= n");
    } else if (query.s != 0) {
        fail(Errc::invalid_argument, "s is meaningful for omega only");
    }
    switch (query.quantity) {
        case Quantity::delta:
        case Quantity::omega: break;
        case Quantity::theta:
            if (query.l > query.n) fail(Errc::invalid_argument, "theta needs l <= n");
            break;
        case Quantity::ind: {
            if (query.l > query.n) fail(Errc::invalid_argument, "ind needs l <= n");
            if (query.k > pow_checked(query.q, query.n) - 1)
                fail(Errc::invalid_argument, "ind needs k <= q^n - 1");
            break;
        }
        case Quantity::ind_pro:
        case Quantity::gamma: {
            if (query.l > query.n)
                fail(Errc::invalid_argument,
                     std::string(quantity_name(query.quantity)) + " needs l <= n");
            long long proj = (pow_checked(query.q, query.n) - 1) / (query.q - 1);
            if (query.k > proj)
                fail(Errc::invalid_argument, std::string(quantity_name(query.quantity)) +
                                                 " needs k <= (q^n - 1)/(q - 1)");
            break;
        }
    }
}

std::string query_key(const ExtremalQuery& query) {
    std::string out{quantity_name(query.quantity)};
    out += ',';
    out += std::to_string(query.q);
    out += ',';
    out += std::to_string(query.n);
    out += ',';
    out += std::to_string(query.s);
    out += ',';
    out += std::to_string(query.k);
    out += ',';
    out += std::to_string(query.l);
    return out;
}

std::string witness_serialize(const Witness& w) {
    std::string out;
    if (std::holds_alternative<std::monostate>(w)) return "none";
    if (const auto* profile = std::get_if<ProfileWitness>(&w)) {
        out = "profile:";
        append_joined(out, profile->counts);
        return out;
    }
    if (const auto* points = std::get_if<PointSetWitness>(&w)) {
        out = points->projective ? "proj:" : "points:";
        append_joined(out, points->codes);
        return out;
    }
    const auto& multi = std::get<MultisetWitness>(w);
    out = "multi:";
    for (std::size_t i = 0; i < multi.entries.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(multi.entries[i].first);
        out += '*';
        out += std::to_string(multi.entries[i].second);
    }
    return out;
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string witness_hash(const Witness& w) { return hex16(fnv1a64(witness_serialize(w))); }

ProfileSolution profile_ip_solve(const ProfileIP& ip) {
    if (ip.m < 1) fail(Errc::invalid_argument, "the profile program needs at least one slot");
    if (ip.m > kEnumCap) fail(Errc::cap_exceeded, "profile has more slots than the enumeration cap");
    if (ip.window < 1) fail(Errc::invalid_argument, "the profile window must be at least 1");
    if (ip.cap < 0) fail(Errc::invalid_argument, "the profile cap must be nonnegative");
    int w = static_cast<int>(std::min<long long>(ip.window, ip.m));
    std::vector<long long> head(static_cast<std::size_t>(w), 0);
    std::vector<long long> best_head;
    long long best = -1;
    long long visited = 0;
    auto rec = [&](auto&& self, int i, long long used) -> void {
        if (++visited > 5'000'000) fail(Errc::budget, "profile head search exceeded its budget");
        if (i == w) {
            long long value = 0;
            for (int j = 0; j + 1 < w; ++j) value += head[static_cast<std::size_t>(j)];
            value += (ip.m - w + 1) * head[static_cast<std::size_t>(w - 1)];
            if (value > best) {
                best = value;
                best_head = head;
            }
            return;
        }
        long long hi = std::min(i == 0 ? ip.cap : head[static_cast<std::size_t>(i - 1)],
                                ip.cap - used);
        for (long long t = 0; t <= hi; ++t) {
            head[static_cast<std::size_t>(i)] = t;
            self(self, i + 1, used + t);
        }
    };
    rec(rec, 0, 0);
    std::vector<long long> profile = best_head;
    profile.resize(static_cast<std::size_t>(ip.m), best_head.back());
    return {best, std::move(profile)};
}

long long profile_ip_raw(const ProfileIP& ip) {
    if (ip.m < 1) fail(Errc::invalid_argument, "the profile program needs at least one slot");
    if (ip.window < 1) fail(Errc::invalid_argument, "the profile window must be at least 1");
    if (ip.cap < 0) fail(Errc::invalid_argument, "the profile cap must be nonnegative");
    if (ip.m > 10) fail(Errc::budget, "raw profile enumeration is limited to 10 slots");
    __int128 combos = 1;
    for (long long i = 0; i < ip.m; ++i) {
        combos *= ip.cap + 1;
        if (combos > 50'000'000) fail(Errc::budget, "raw profile enumeration is too large");
    }
    auto m = static_cast<int>(ip.m);
    int w = std::min(ip.window, m);
    std::vector<unsigned> masks;
    for (unsigned mask = 1; mask < (1u << m); ++mask)
        if (std::popcount(mask) <= w) masks.push_back(mask);
    std::vector<long long> t(static_cast<std::size_t>(m), 0);
    long long best = 0;
    for (;;) {
        bool ok = true;
        for (unsigned mask : masks) {
            long long sum = 0;
            for (unsigned rest = mask; rest;) {
                int bit = std::countr_zero(rest);
                rest &= rest - 1;
                sum += t[static_cast<std::size_t>(bit)];
            }
            if (sum > ip.cap) {
                ok = false;
                break;
            }
        }
        if (ok) best = std::max(best, std::accumulate(t.begin(), t.end(), 0LL));
        int i = 0;
        while (i < m && t[static_cast<std::size_t>(i)] == ip.cap) {
            t[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == m) break;
        ++t[static_cast<std::size_t>(i)];
    }
    return best;
}

ExtremalResult delta_weak(long long q, int n, int k, int l) {
    ExtremalQuery query{Quantity::delta, q, n, 0, k, l};
    validate_query(query);
    auto t0 = Clock::now();
    long long m = (pow_checked(q, n) - 1) / (q - 1);
    ProfileSolution sol = profile_ip_solve({m, k - 1, l - 1});
    return make_result(query, sol.value, "profile-ip", ProfileWitness{std::move(sol.profile)}, t0);
}

ExtremalResult omega_feeble(long long q, int s, int n, int k, int l) {
    ExtremalQuery query{Quantity::omega, q, n, s, k, l};
    validate_query(query);
    auto t0 = Clock::now();
    long long m = gaussian_binomial(n, s, q);
    ProfileSolution sol = profile_ip_solve({m, k - 1, l - 1});
    return make_result(query, sol.value, "profile-ip", ProfileWitness{std::move(sol.profile)}, t0);
}

ExtremalResult ind(long long q, int n, int k, int l, const SolveOptions& opts) {
    return run_cap_solver({Quantity::ind, q, n, 0, k, l}, false, 1, opts);
}

ExtremalResult ind_pro(long long q, int n, int k, int l, const SolveOptions& opts) {
    return run_cap_solver({Quantity::ind_pro, q, n, 0, k, l}, true, 1, opts);
}

ExtremalResult theta(long long q, int n, int k, int l, const SolveOptions& opts) {
    return run_cap_solver({Quantity::theta, q, n, 0, k, l}, false, k - 1, opts);
}

ExtremalResult gamma_strong(long long q, int n, int k, int l, const SolveOptions& opts) {
    return run_cap_solver({Quantity::gamma, q, n, 0, k, l}, true, 1, opts);
}

ExtremalResult solve(const ExtremalQuery& query, const SolveOptions& opts) {
    validate_query(query);
    switch (query.quantity) {
        case Quantity::delta: return delta_weak(query.q, query.n, query.k, query.l);
        case Quantity::omega:
            return omega_feeble(query.q, query.s, query.n, query.k, query.l);
        case Quantity::ind: return ind(query.q, query.n, query.k, query.l, opts);
        case Quantity::ind_pro: return ind_pro(query.q, query.n, query.k, query.l, opts);
        case Quantity::theta: return theta(query.q, query.n, query.k, query.l, opts);
        case Quantity::gamma: return gamma_strong(query.q, query.n, query.k, query.l, opts);
    }
    fail(Errc::invalid_argument, "unknown quantity tag");
}

std::vector<VecK> delta_witness_vectors(const Zk& K, int n, const ProfileWitness& w) {
    if (n < 1) fail(Errc::invalid_argument, "n must be at least 1");
    const Gf& f = *K.field_ptr();
    auto reps = enumerate_proj_points(f, n);
    if (w.counts.size() != reps.size())
        fail(Errc::invalid_argument, "profile length differs from the projective point count");
    long long units = f.q() - 1;
    std::vector<VecK> out;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        long long count = w.counts[i];
        if (count < 0) fail(Errc::invalid_argument, "profile counts must be nonnegative");
        for (long long j = 0; j < count; ++j) {
            GfElem unit = f.elem(1 + j % units);
            VecK base = delta_n(K, point_scale(f, unit, reps[i]));
            out.push_back(apply_tail(K, std::move(base), j / units));
        }
    }
    return out;
}

std::vector<SubspaceK> omega_witness_family(const Zk& K, int s, int n, const ProfileWitness& w) {
    if (n < 1) fail(Errc::invalid_argument, "n must be at least 1");
    if (s < 1 || s > n) fail(Errc::invalid_argument, "s must lie in [1, n]");
    const Gf& f = *K.field_ptr();
    auto subs = enumerate_subspaces(f, s, n);
    if (w.counts.size() != subs.size())
        fail(Errc::invalid_argument, "profile length differs from the subspace count");
    auto points = enumerate_points(f, n);
    long long fiber_cap = 1;
    for (int d = 1; d < K.precision(); ++d) fiber_cap *= f.q();
    std::vector<SubspaceK> out;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        long long count = w.counts[i];
        if (count < 0) fail(Errc::invalid_argument, "profile counts must be nonnegative");
        if (count == 0) continue;
        if (count > 1 && s == n)
            fail(Errc::domain, "the full-space fiber holds a single subspace");
        std::vector<VecK> rows;
        rows.reserve(static_cast<std::size_t>(s));
        for (const PointFq& r : subs[i].rows) rows.push_back(delta_n(K, r));
        const PointFq* outside = nullptr;
        if (count > 1)
            for (const PointFq& pt : points)
                if (!subspace_contains(f, subs[i], pt)) {
                    outside = &pt;
                    break;
                }
        for (long long tau = 0; tau < count; ++tau) {
            if (tau == 0) {
                out.push_back(subspace_k_from_orthogonal(K, rows));
                continue;
            }
            if (tau >= fiber_cap)
                fail(Errc::precision, "witness multiplicity exceeds the representable digit tails");
            std::vector<VecK> shifted = rows;
            shifted[0] = vec_add(K, shifted[0], vec_scale(K, depth_code(K, tau), delta_n(K, *outside)));
            out.push_back(subspace_k_from_orthogonal(K, shifted));
        }
    }
    return out;
}

std::vector<VecK> point_witness_vectors(const Zk& K, int n, const PointSetWitness& w) {
    if (n < 1) fail(Errc::invalid_argument, "n must be at least 1");
    const Gf& f = *K.field_ptr();
    auto pts = points_from_codes(f, n, w.codes);
    std::vector<VecK> out;
    out.reserve(pts.size());
    for (const PointFq& v : pts) {
        if (w.projective && !(rho(f, v) == v))
            fail(Errc::invalid_argument, "projective codes must name canonical representatives");
        out.push_back(delta_n(K, v));
    }
    return out;
}

std::vector<VecK> theta_witness_vectors(const Zk& K, int n, const MultisetWitness& w) {
    if (n < 1) fail(Errc::invalid_argument, "n must be at least 1");
    const Gf& f = *K.field_ptr();
    std::vector<VecK> out;
    long long prev = 0;
    for (const auto& [code, mult] : w.entries) {
        if (code <= prev)
            fail(Errc::invalid_argument, "witness codes must be ascending and distinct");
        prev = code;
        if (mult < 1) fail(Errc::invalid_argument, "multiset multiplicities must be positive");
        PointFq v = point_from_code(f, n, code);
        for (long long j = 0; j < mult; ++j)
            out.push_back(apply_tail(K, delta_n(K, v), j));
    }
    return out;
}

bool weakly_orthogonal_kl(const Zk& K, std::span<const VecK> s, int k, int l, long long budget) {
    check_kl(k, l, 2);
    for (const VecK& v : s)
        if (!on_unit_sphere(K, v)) fail(Errc::domain, "candidates must lie on the unit sphere");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] == s[j]) fail(Errc::invalid_argument, "candidates must be distinct");
    if (s.size() < static_cast<std::size_t>(k)) return true;
    oracle_preflight(s.size(), k, l, budget, 0);
    bool violated = any_combination(s.size(), k, [&](const std::vector<std::size_t>& big) {
        bool found = any_combination(static_cast<std::size_t>(k), l,
                                     [&](const std::vector<std::size_t>& small) {
                                         for (std::size_t a = 0; a < small.size(); ++a)
                                             for (std::size_t b = a + 1; b < small.size(); ++b)
                                                 if (!pair_orthogonal(K, s[big[small[a]]],
                                                                      s[big[small[b]]]))
                                                     return false;
                                         return true;
                                     });
        return !found;
    });
    return !violated;
}

bool orthogonal_kl(const Zk& K, std::span<const VecK> s, int k, int l, long long budget) {
    check_kl(k, l, 2);
    for (const VecK& v : s)
        if (!on_unit_sphere(K, v)) fail(Errc::domain, "candidates must lie on the unit sphere");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] == s[j]) fail(Errc::invalid_argument, "candidates must be distinct");
    if (s.size() < static_cast<std::size_t>(k)) return true;
    oracle_preflight(s.size(), k, l, budget, 0);
    std::vector<VecK> sub;
    sub.reserve(static_cast<std::size_t>(l));
    bool violated = any_combination(s.size(), k, [&](const std::vector<std::size_t>& big) {
        bool found = any_combination(static_cast<std::size_t>(k), l,
                                     [&](const std::vector<std::size_t>& small) {
                                         sub.clear();
                                         for (std::size_t t : small) sub.push_back(s[big[t]]);
                                         return set_orthogonal(K, sub);
                                     });
        return !found;
    });
    return !violated;
}

bool strongly_orthogonal_kl(const Zk& K, std::span<const VecK> s, int k, int l, long long budget) {
    check_kl(k, l, 2);
    oracle_preflight(s.size(), 2, 2, budget,
                     comb_count(static_cast<long long>(s.size()), 2));
    for (const VecK& v : s)
        if (!on_unit_sphere(K, v)) fail(Errc::domain, "candidates must lie on the unit sphere");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (s[i] == s[j]) fail(Errc::invalid_argument, "candidates must be distinct");
            if (!pair_orthogonal(K, s[i], s[j])) return false;
        }
    return orthogonal_kl(K, s, k, l, budget);
}

bool feebly_orthogonal_kl(const Zk& K, std::span<const SubspaceK> fam, int k, int l,
                          long long budget) {
    check_kl(k, l, 2);
    for (const SubspaceK& u : fam)
        if (u.dim() != fam.front().dim())
            fail(Errc::invalid_argument, "family members must share a dimension");
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j)
            if (subspace_k_equal(K, fam[i], fam[j]))
                fail(Errc::invalid_argument, "family members must be distinct");
    if (fam.size() < static_cast<std::size_t>(k)) return true;
    oracle_preflight(fam.size(), k, l, budget, 0);
    bool violated = any_combination(fam.size(), k, [&](const std::vector<std::size_t>& big) {
        bool found = any_combination(static_cast<std::size_t>(k), l,
                                     [&](const std::vector<std::size_t>& small) {
                                         for (std::size_t a = 0; a < small.size(); ++a)
                                             for (std::size_t b = a + 1; b < small.size(); ++b)
                                                 if (!feebly_orthogonal(K, fam[big[small[a]]],
                                                                        fam[big[small[b]]]))
                                                     return false;
                                         return true;
                                     });
        return !found;
    });
    return !violated;
}

bool independent_kl(const Gf& f, std::span<const PointFq> s, int k, int l, long long budget) {
    check_kl(k, l, 1);
    for (const PointFq& v : s)
        if (is_zero_point(v)) fail(Errc::domain, "candidates must be nonzero");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] == s[j]) fail(Errc::invalid_argument, "candidates must be distinct");
    if (s.size() < static_cast<std::size_t>(k)) return true;
    if (comb_count(static_cast<long long>(s.size()), k) > budget)
        fail(Errc::budget, "subset enumeration exceeds the oracle budget");
    std::vector<PointFq> sub;
    sub.reserve(static_cast<std::size_t>(k));
    bool violated = any_combination(s.size(), k, [&](const std::vector<std::size_t>& big) {
        sub.clear();
        for (std::size_t t : big) sub.push_back(s[t]);
        return span_dim(f, sub) < l;
    });
    return !violated;
}

bool pro_independent_kl(const Gf& f, std::span<const PointFq> s, int k, int l, long long budget) {
    for (const PointFq& v : s) {
        if (is_zero_point(v)) fail(Errc::domain, "candidates must be nonzero");
        if (!(rho(f, v) == v))
            fail(Errc::invalid_argument, "projective candidates must be canonical representatives");
    }
    return independent_kl(f, s, k, l, budget);
}

void validate_witness(const ExtremalResult& result, long long budget) {
    const ExtremalQuery& query = result.query;
    validate_query(query);
    auto [p, mdeg] = prime_power_parts(query.q);
    auto verify_size = [&](long long got) {
        if (got != result.value)
            fail(Errc::invalid_argument, "witness size differs from the value");
    };
    switch (query.quantity) {
        case Quantity::delta: {
            const auto* w = std::get_if<ProfileWitness>(&result.witness);
            if (!w) fail(Errc::invalid_argument, "witness kind mismatch");
            auto K = Zk::make_laurent(p, mdeg);
            auto vs = delta_witness_vectors(*K, query.n, *w);
            verify_size(static_cast<long long>(vs.size()));
            if (!weakly_orthogonal_kl(*K, vs, query.k, query.l, budget))
                fail(Errc::invalid_argument, "witness fails its defining property");
            return;
        }
        case Quantity::omega: {
            const auto* w = std::get_if<ProfileWitness>(&result.witness);
            if (!w) fail(Errc::invalid_argument, "witness kind mismatch");
            auto K = Zk::make_laurent(p, mdeg);
            auto fam = omega_witness_family(*K, query.s, query.n, *w);
            verify_size(static_cast<long long>(fam.size()));
            if (!feebly_orthogonal_kl(*K, fam, query.k, query.l, budget))
                fail(Errc::invalid_argument, "witness fails its defining property");
            return;
        }
        case Quantity::ind:
        case Quantity::ind_pro: {
            const auto* w = std::get_if<PointSetWitness>(&result.witness);
            if (!w || w->projective != (query.quantity == Quantity::ind_pro))
                fail(Errc::invalid_argument, "witness kind mismatch");
            auto field = Gf::make(p, mdeg);
            auto pts = points_from_codes(*field, query.n, w->codes);
            verify_size(static_cast<long long>(pts.size()));
            bool ok = w->projective ? pro_independent_kl(*field, pts, query.k, query.l, budget)
                                    : independent_kl(*field, pts, query.k, query.l, budget);
            if (!ok) fail(Errc::invalid_argument, "witness fails its defining property");
            return;
        }
        case Quantity::theta: {
            const auto* w = std::get_if<MultisetWitness>(&result.witness);
            if (!w) fail(Errc::invalid_argument, "witness kind mismatch");
            auto K = Zk::make_laurent(p, mdeg);
            auto vs = theta_witness_vectors(*K, query.n, *w);
            verify_size(static_cast<long long>(vs.size()));
            if (!orthogonal_kl(*K, vs, query.k, query.l, budget))
                fail(Errc::invalid_argument, "witness fails its defining property");
            return;
        }
        case Quantity::gamma: {
            const auto* w = std::get_if<PointSetWitness>(&result.witness);
            if (!w || !w->projective) fail(Errc::invalid_argument, "witness kind mismatch");
            auto field = Gf::make(p, mdeg);
            auto pts = points_from_codes(*field, query.n, w->codes);
            verify_size(static_cast<long long>(pts.size()));
            if (!pro_independent_kl(*field, pts, query.k, query.l, budget))
                fail(Errc::invalid_argument, "witness fails its defining property");
            auto K = Zk::make_laurent(p, mdeg);
            auto vs = point_witness_vectors(*K, query.n, *w);
            if (!strongly_orthogonal_kl(*K, vs, query.k, query.l, budget))
                fail(Errc::invalid_argument, "witness fails its defining property");
            return;
        }
    }
    fail(Errc::invalid_argument, "unknown quantity tag");
}

namespace {

bool cap_matches_definition_common(long long q, int n, int k, int l, bool projective) {
    ExtremalQuery query{projective ? Quantity::ind_pro : Quantity::ind, q, n, 0, k, l};
    validate_query(query);
    if (l < 2) fail(Errc::invalid_argument, "the cap rule check needs l >= 2");
    CapInstance inst = build_cap_instance(q, n, l, projective);
    std::size_t points = inst.ground.size();
    if (points > 15) fail(Errc::budget, "exhaustive subset validation is limited to 15 ground points");
    std::vector<int> cnt(static_cast<std::size_t>(inst.subspace_count));
    std::vector<std::size_t> members;
    std::vector<PointFq> sub;
    sub.reserve(static_cast<std::size_t>(k));
    for (unsigned mask = 0; mask < (1u << points); ++mask) {
        members.clear();
        for (std::size_t i = 0; i < points; ++i)
            if (mask >> i & 1u) members.push_back(i);
        bool cap_ok = [&] {
            std::fill(cnt.begin(), cnt.end(), 0);
            for (std::size_t i : members)
                for (int j : inst.cover[i])
                    if (++cnt[static_cast<std::size_t>(j)] > k - 1) return false;
            return true;
        }();
        bool def_ok = true;
        if (members.size() >= static_cast<std::size_t>(k)) {
            def_ok = !any_combination(members.size(), k, [&](const std::vector<std::size_t>& big) {
                sub.clear();
                for (std::size_t t : big) sub.push_back(inst.ground[members[t]]);
                return span_dim(*inst.field, sub) < l;
            });
        }
        if (cap_ok != def_ok) return false;
    }
    return true;
}

}  // namespace

bool cap_matches_definition_ind(long long q, int n, int k, int l) {
    return cap_matches_definition_common(q, n, k, l, false);
}

bool cap_matches_definition_ind_pro(long long q, int n, int k, int l) {
    return cap_matches_definition_common(q, n, k, l, true);
}

long long theta_definitional_max(long long q, int n, int k, int l, long long budget) {
    ExtremalQuery query{Quantity::theta, q, n, 0, k, l};
    validate_query(query);
    auto [p, mdeg] = prime_power_parts(q);
    auto K = Zk::make_laurent(p, mdeg);
    const Gf& f = *K->field_ptr();
    auto ground = enumerate_points(f, n);
    if (ground.size() > 15)
        fail(Errc::budget, "the definitional search is limited to 15 residue points");
    std::vector<VecK> lifted;
    long long best = 0;
    auto rec = [&](auto&& self, std::size_t i, long long cur) -> void {
        best = std::max(best, cur);
        if (i == ground.size()) return;
        if (cur + static_cast<long long>(ground.size() - i) * (k - 1) <= best) return;
        for (int mv = k - 1; mv >= 0; --mv) {
            for (int j = 0; j < mv; ++j)
                lifted.push_back(apply_tail(*K, delta_n(*K, ground[i]), j));
            bool ok = mv == 0 || orthogonal_kl(*K, lifted, k, l, budget);
            if (ok) self(self, i + 1, cur + mv);
            lifted.resize(lifted.size() - static_cast<std::size_t>(mv));
        }
    };
    rec(rec, 0, 0);
    return best;
}

ProStabilizationReport pro_stabilization_probe(long long q, int n, int l) {
    if (l < 2) fail(Errc::invalid_argument, "the threshold probe needs l >= 2");
    if (l > n) fail(Errc::invalid_argument, "the threshold probe needs l <= n");
    long long full = (pow_checked(q, n) - 1) / (q - 1);
    long long boundary = (pow_checked(q, l - 1) - 1) / (q - 1);
    if (boundary < l)
        fail(Errc::invalid_argument, "the boundary lies below l for these parameters");
    ProStabilizationReport report;
    report.boundary_k = boundary;
    report.full_value = full;
    report.value_at_boundary = ind_pro(q, n, static_cast<int>(boundary), l).value;
    report.ge_holds = report.value_at_boundary == full;
    report.strict_holds =
        report.value_at_boundary < full &&
        ind_pro(q, n, static_cast<int>(boundary) + 1, l).value == full;
    return report;
}

namespace {

long long parse_ll_field(std::string_view text, const std::string& where) {
    long long out = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        fail(Errc::io, where + ": malformed cache record");
    return out;
}

}  // namespace

ResultCache::ResultCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in.is_open()) return;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string where = path_ + ":" + std::to_string(lineno);
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        for (;;) {
            std::size_t at = rest.find(',');
            if (at == std::string_view::npos) {
                fields.push_back(rest);
                break;
            }
            fields.push_back(rest.substr(0, at));
            rest.remove_prefix(at + 1);
        }
        if (fields.size() != 9) fail(Errc::io, where + ": malformed cache record");
        ExtremalQuery query;
        try {
            query.quantity = quantity_parse(fields[0]);
        } catch (const Error&) {
            fail(Errc::io, where + ": malformed cache record");
        }
        query.q = parse_ll_field(fields[1], where);
        query.n = static_cast<int>(parse_ll_field(fields[2], where));
        query.s = static_cast<int>(parse_ll_field(fields[3], where));
        query.k = static_cast<int>(parse_ll_field(fields[4], where));
        query.l = static_cast<int>(parse_ll_field(fields[5], where));
        CacheRecord record;
        record.value = parse_ll_field(fields[6], where);
        record.method = std::string(fields[7]);
        record.witness_hash = std::string(fields[8]);
        if (record.method.empty() || record.witness_hash.size() != 16)
            fail(Errc::io, where + ": malformed cache record");
        for (char c : record.witness_hash)
            if (!(c >= '0' && c <= '9') && !(c >= 'a' && c <= 'f'))
                fail(Errc::io, where + ": malformed cache record");
        records_[query_key(query)] = std::move(record);
    }
    if (in.bad()) fail(Errc::io, "cannot read cache file " + path_);
}

std::optional<CacheRecord> ResultCache::lookup(const ExtremalQuery& query) const {
    auto it = records_.find(query_key(query));
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void ResultCache::append(const ExtremalQuery& query, const ExtremalResult& result) {
    std::string key = query_key(query);
    std::string line = key;
    line += ',';
    line += std::to_string(result.value);
    line += ',';
    line += result.method;
    line += ',';
    line += witness_hash(result.witness);
    std::ofstream out(path_, std::ios::app);
    if (!out.is_open()) fail(Errc::io, "cannot open cache file " + path_ + " for append");
    out << line << '\n';
    out.flush();
    if (!out) fail(Errc::io, "cannot write cache file " + path_);
    records_[key] = CacheRecord{result.value, result.method, witness_hash(result.witness)};
}

ExtremalResult solve_cached(const ExtremalQuery& query, ResultCache& cache, bool want_witness,
                            const SolveOptions& opts) {
    validate_query(query);
    auto record = cache.lookup(query);
    if (record && !want_witness) {
        ExtremalResult r;
        r.query = query;
        r.value = record->value;
        r.method = record->method;
        r.from_cache = true;
        return r;
    }
    ExtremalResult r = solve(query, opts);
    if (record) {
        if (record->value != r.value || record->witness_hash != witness_hash(r.witness))
            fail(Errc::io, "cache record for " + query_key(query) + " disagrees with recomputation");
    } else {
        cache.append(query, r);
    }
    return r;
}

}  // namespace umo
