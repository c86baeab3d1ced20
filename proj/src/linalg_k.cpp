#include "umo/linalg_k.hpp"

#include <algorithm>
#include <limits>

namespace umo {

namespace {

void check_vec(const Zk& K, const VecK& v) {
    if (v.kid != K.id()) fail(Errc::field_mismatch, "vector does not belong to this valued field");
    if (v.entries.empty()) fail(Errc::invalid_argument, "vectors must have dimension at least 1");
}

void check_same_n(const VecK& a, const VecK& b) {
    if (a.entries.size() != b.entries.size())
        fail(Errc::invalid_argument, "vectors have different dimensions");
}

void check_subspace(const Zk& K, const SubspaceK& w) {
    if (w.kid != K.id())
        fail(Errc::field_mismatch, "subspace does not belong to this valued field");
}

// Finds a nonzero F_q-dependency among the given residue vectors, tracking
// elimination coefficients; returns the combination that sums to zero.
std::optional<std::vector<GfElem>> find_dependency(const Gf& f, std::span<const PointFq> vs) {
    std::vector<PointFq> rows;
    std::vector<int> pivots;
    std::vector<std::vector<GfElem>> combos;
    for (size_t i = 0; i < vs.size(); ++i) {
        PointFq w = vs[i];
        std::vector<GfElem> combo(vs.size(), f.zero());
        combo[i] = f.one();
        for (size_t r = 0; r < rows.size(); ++r) {
            GfElem c = f.elem(w.coords[pivots[r]]);
            if (f.is_zero(c)) continue;
            GfElem neg = f.neg(c);
            w = point_add(f, w, point_scale(f, neg, rows[r]));
            for (size_t t = 0; t < combo.size(); ++t)
                combo[t] = f.add(combo[t], f.mul(neg, combos[r][t]));
        }
        int piv = -1;
        for (size_t j = 0; j < w.coords.size(); ++j)
            if (w.coords[j] != 0) {
                piv = static_cast<int>(j);
                break;
            }
        if (piv < 0) return combo;
        GfElem inv = f.inv(f.elem(w.coords[piv]));
        w = point_scale(f, inv, w);
        for (GfElem& c : combo) c = f.mul(inv, c);
        rows.push_back(std::move(w));
        pivots.push_back(piv);
        combos.push_back(std::move(combo));
    }
    return std::nullopt;
}

// Determinant by cofactor expansion along the first remaining row, over the
// remaining column mask.  Small matrices only.
ZkElem det_k(const Zk& K, const std::vector<const VecK*>& rows, const std::vector<int>& cols,
             size_t row, uint32_t used) {
    size_t l = rows.size();
    if (row == l) return K.one();
    std::vector<ZkElem> terms;
    bool negate = false;
    for (int c : cols) {
        if (used >> c & 1) continue;
        const ZkElem& a = rows[row]->entries[c];
        negate = !negate;
        if (K.is_zero(a)) continue;
        ZkElem sub = det_k(K, rows, cols, row + 1, used | (uint32_t(1) << c));
        if (K.is_zero(sub)) continue;
        ZkElem term = K.mul(a, sub);
        terms.push_back(negate ? term : K.neg(term));
    }
    return K.sum(terms);
}

// All entries of an exact p-adic element form a plain integer; determinants
// of exact integral matrices can then be taken exactly over the integers.
bool all_entries_exact_integral(std::span<const VecK> vs) {
    for (const VecK& v : vs)
        for (const ZkElem& e : v.entries) {
            if (!e.exact) return false;
            if (!e.zero && e.nu < 0) return false;
        }
    return true;
}

__int128 exact_padic_integer(const Zk& K, const ZkElem& e) {
    __int128 v = 0;
    for (size_t j = e.digits.size(); j-- > 0;) v = v * K.k().p() + e.digits[j];
    for (int32_t t = 0; t < e.nu; ++t) v *= K.k().p();
    return e.zero ? 0 : v;
}

__int128 det_int(std::vector<std::vector<__int128>>& m, size_t row, uint32_t used, int l) {
    if (static_cast<int>(row) == l) return 1;
    __int128 acc = 0;
    bool negate = false;
    for (int c = 0; c < l; ++c) {
        if (used >> c & 1) continue;
        negate = !negate;
        if (m[row][c] == 0) continue;
        __int128 sub = det_int(m, row + 1, used | (uint32_t(1) << c), l);
        acc += (negate ? m[row][c] : -m[row][c]) * sub;
    }
    return acc;
}

std::vector<ZkElem> unit_coefficient_pool(const Zk& K, int depth) {
    std::vector<ZkElem> pool;
    pool.push_back(K.zero());
    for (int d = 1; d <= depth; ++d) {
        long long tails = 1;
        for (int t = 1; t < d; ++t) tails *= K.q();
        for (long long lead = 1; lead < K.q(); ++lead) {
            for (long long tail = 0; tail < tails; ++tail) {
                std::vector<GfElem> digits;
                digits.push_back(K.k().elem(lead));
                long long rest = tail;
                for (int t = 1; t < d; ++t) {
                    digits.push_back(K.k().elem(rest % K.q()));
                    rest /= K.q();
                }
                // skip spellings with a shorter canonical form: they already
                // appeared at a smaller depth
                if (d > 1 && digits.back() == K.k().zero()) continue;
                pool.push_back(K.make(0, digits, true));
            }
        }
    }
    return pool;
}

}  // namespace

VecK vec(const Zk& K, std::span<const ZkElem> entries) {
    if (entries.empty()) fail(Errc::invalid_argument, "vectors must have dimension at least 1");
    VecK v;
    v.kid = K.id();
    for (const ZkElem& e : entries) {
        if (e.fid != K.id())
            fail(Errc::field_mismatch, "entry does not belong to this valued field");
        v.entries.push_back(e);
    }
    return v;
}

VecK zero_vec(const Zk& K, int n) {
    if (n < 1) fail(Errc::invalid_argument, "vectors must have dimension at least 1");
    VecK v;
    v.kid = K.id();
    v.entries.assign(static_cast<size_t>(n), K.zero());
    return v;
}

VecK unit_vec(const Zk& K, int n, int i) {
    if (i < 0 || i >= n) fail(Errc::invalid_argument, "unit vector index out of range");
    VecK v = zero_vec(K, n);
    v.entries[static_cast<size_t>(i)] = K.one();
    return v;
}

bool vec_is_zero(const VecK& v) {
    return std::all_of(v.entries.begin(), v.entries.end(),
                       [](const ZkElem& e) { return e.zero; });
}

QPow inf_norm(const Zk& K, const VecK& v) {
    check_vec(K, v);
    QPow best = QPow::zero_of(K.q());
    for (const ZkElem& e : v.entries) {
        QPow a = K.abs(e);
        if (best.less(a)) best = a;
    }
    return best;
}

std::optional<long long> vec_nu(const Zk& K, const VecK& v) {
    check_vec(K, v);
    std::optional<long long> best;
    for (const ZkElem& e : v.entries) {
        auto nu = K.nu(e);
        if (nu && (!best || *nu < *best)) best = nu;
    }
    return best;
}

bool on_unit_sphere(const Zk& K, const VecK& v) {
    auto nu = vec_nu(K, v);
    return nu && *nu == 0;
}

VecK normalize_to_sphere(const Zk& K, const VecK& v) {
    auto nu = vec_nu(K, v);
    if (!nu) fail(Errc::domain, "cannot scale the zero vector onto the unit sphere");
    if (*nu == 0) return v;
    VecK r = v;
    for (ZkElem& e : r.entries) e = K.shift(e, -*nu);
    return r;
}

VecK vec_add(const Zk& K, const VecK& a, const VecK& b) {
    check_vec(K, a);
    check_vec(K, b);
    check_same_n(a, b);
    VecK r = a;
    for (size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = K.add(a.entries[i], b.entries[i]);
    return r;
}

VecK vec_scale(const Zk& K, const ZkElem& c, const VecK& a) {
    check_vec(K, a);
    VecK r = a;
    for (size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = K.mul(c, a.entries[i]);
    return r;
}

VecK lin_comb(const Zk& K, std::span<const ZkElem> coeffs, std::span<const VecK> vs) {
    if (coeffs.size() != vs.size())
        fail(Errc::invalid_argument, "coefficient count does not match vector count");
    if (vs.empty()) fail(Errc::invalid_argument, "empty linear combination");
    for (const VecK& v : vs) {
        check_vec(K, v);
        check_same_n(vs[0], v);
    }
    VecK r = zero_vec(K, vs[0].n());
    std::vector<ZkElem> terms;
    for (size_t j = 0; j < r.entries.size(); ++j) {
        terms.clear();
        for (size_t i = 0; i < vs.size(); ++i) terms.push_back(K.mul(coeffs[i], vs[i].entries[j]));
        r.entries[j] = K.sum(terms);
    }
    return r;
}

PointFq gamma_n(const Zk& K, const VecK& v) {
    check_vec(K, v);
    PointFq w;
    w.fid = K.k().id();
    for (const ZkElem& e : v.entries)
        w.coords.push_back(static_cast<uint16_t>(K.k().index(K.gamma(e))));
    return w;
}

VecK delta_n(const Zk& K, const PointFq& w) {
    if (w.fid != K.k().id())
        fail(Errc::field_mismatch, "point does not live in the residue field of K");
    if (w.coords.empty()) fail(Errc::invalid_argument, "vectors must have dimension at least 1");
    VecK v;
    v.kid = K.id();
    for (uint16_t c : w.coords) v.entries.push_back(K.delta(K.k().elem(c)));
    return v;
}

bool pair_orthogonal(const Zk& K, const VecK& u, const VecK& v) {
    if (!on_unit_sphere(K, u) || !on_unit_sphere(K, v))
        fail(Errc::domain, "pair orthogonality is defined on unit sphere vectors");
    check_same_n(u, v);
    return rho(K.k(), gamma_n(K, u)) != rho(K.k(), gamma_n(K, v));
}

QPow wedge_norm(const Zk& K, std::span<const VecK> vs) {
    if (vs.empty()) fail(Errc::invalid_argument, "wedge of an empty list");
    int l = static_cast<int>(vs.size());
    int n = vs[0].n();
    for (const VecK& v : vs) {
        check_vec(K, v);
        check_same_n(vs[0], v);
        for (const ZkElem& e : v.entries)
            if (!e.zero && e.nu < 0)
                fail(Errc::domain, "wedge norm expects integral entries; normalize first");
    }
    if (l > n) return QPow::zero_of(K.q());

    bool integral_int = K.backend() == Backend::padic && all_entries_exact_integral(vs);
    QPow best = QPow::zero_of(K.q());
    std::vector<int> cols(static_cast<size_t>(l));
    for (int i = 0; i < l; ++i) cols[i] = i;
    while (true) {
        if (integral_int) {
            std::vector<std::vector<__int128>> m(static_cast<size_t>(l),
                                                 std::vector<__int128>(static_cast<size_t>(l)));
            for (int i = 0; i < l; ++i)
                for (int j = 0; j < l; ++j)
                    m[i][j] = exact_padic_integer(K, vs[i].entries[cols[j]]);
            __int128 d = det_int(m, 0, 0, l);
            if (d != 0) {
                long long e = 0;
                __int128 ad = d < 0 ? -d : d;
                while (ad % K.k().p() == 0) {
                    ad /= K.k().p();
                    ++e;
                }
                QPow norm = QPow::pow_of(K.q(), -e);
                if (best.less(norm)) best = norm;
            }
        } else {
            std::vector<const VecK*> rows;
            for (const VecK& v : vs) rows.push_back(&v);
            ZkElem d = det_k(K, rows, cols, 0, 0);
            QPow norm = K.abs(d);
            if (best.less(norm)) best = norm;
        }
        if (best == QPow::one_of(K.q())) return best;  // Hadamard maximum for integral rows
        int i = l - 1;
        while (i >= 0 && cols[i] == n - l + i) --i;
        if (i < 0) break;
        ++cols[i];
        for (int j = i + 1; j < l; ++j) cols[j] = cols[j - 1] + 1;
    }
    return best;
}

bool set_orthogonal(const Zk& K, std::span<const VecK> vs) {
    if (vs.empty()) fail(Errc::invalid_argument, "orthogonality of an empty list");
    std::vector<PointFq> residues;
    for (const VecK& v : vs) {
        if (!on_unit_sphere(K, v))
            fail(Errc::domain, "set orthogonality is defined on unit sphere vectors");
        residues.push_back(gamma_n(K, v));
    }
    return span_dim(K.k(), residues) == static_cast<int>(vs.size());
}

std::optional<std::vector<ZkElem>> falsify_orthogonality(const Zk& K, std::span<const VecK> vs,
                                                         int depth) {
    if (vs.empty()) fail(Errc::invalid_argument, "orthogonality of an empty list");
    if (depth < 1) fail(Errc::invalid_argument, "depth must be at least 1");
    for (const VecK& v : vs) {
        check_vec(K, v);
        check_same_n(vs[0], v);
        if (!on_unit_sphere(K, v))
            fail(Errc::domain, "the falsifier expects unit sphere vectors");
    }
    size_t l = vs.size();
    size_t n = static_cast<size_t>(vs[0].n());

    // ||sum|| < 1 certified entrywise; a window that cancels to exhaustion
    // still certifies nu >= 1 because all products are integral
    auto violates = [&](const std::vector<ZkElem>& lambda) {
        std::vector<ZkElem> terms;
        for (size_t j = 0; j < n; ++j) {
            terms.clear();
            for (size_t i = 0; i < l; ++i) terms.push_back(K.mul(lambda[i], vs[i].entries[j]));
            try {
                ZkElem s = K.sum(terms);
                if (!s.zero && s.nu == 0) return false;
            } catch (const Error& e) {
                if (e.code() != Errc::precision) throw;
            }
        }
        return true;
    };

    // depth-first over the coefficient pool, shallow digit depths first
    for (int d = 1; d <= depth; ++d) {
        std::vector<ZkElem> pool = unit_coefficient_pool(K, d);
        std::vector<size_t> idx(l, 0);
        size_t prev_pool = unit_coefficient_pool(K, d - 1 < 1 ? 0 : d - 1).size();
        while (true) {
            bool all_zero = std::all_of(idx.begin(), idx.end(), [](size_t t) { return t == 0; });
            bool seen_before =
                std::all_of(idx.begin(), idx.end(), [&](size_t t) { return t < prev_pool; });
            if (!all_zero && !(d > 1 && seen_before)) {
                std::vector<ZkElem> lambda;
                for (size_t i = 0; i < l; ++i) lambda.push_back(pool[idx[i]]);
                if (violates(lambda)) return lambda;
            }
            size_t t = l;
            while (t > 0 && idx[t - 1] == pool.size() - 1) idx[--t] = 0;
            if (t == 0) break;
            ++idx[t - 1];
        }
    }
    return std::nullopt;
}

std::vector<VecK> orthogonalize(const Zk& K, std::span<const VecK> vs) {
    if (vs.empty()) fail(Errc::invalid_argument, "cannot orthogonalize an empty list");
    std::vector<VecK> rows;
    for (const VecK& v : vs) {
        check_vec(K, v);
        check_same_n(vs[0], v);
        if (vec_is_zero(v)) fail(Errc::invalid_argument, "cannot orthogonalize a zero vector");
        rows.push_back(normalize_to_sphere(K, v));
    }
    int budget = static_cast<int>(rows.size()) * K.precision() + 1;
    for (int iter = 0; iter < budget; ++iter) {
        std::vector<PointFq> residues;
        for (const VecK& r : rows) residues.push_back(gamma_n(K, r));
        auto dep = find_dependency(K.k(), residues);
        if (!dep) return rows;
        size_t j = dep->size();
        while (j-- > 0)
            if (!K.k().is_zero((*dep)[j])) break;
        std::vector<ZkElem> coeffs;
        for (GfElem c : *dep) coeffs.push_back(K.delta(c));
        VecK w = lin_comb(K, coeffs, rows);
        if (vec_is_zero(w)) {
            rows.erase(rows.begin() + static_cast<long>(j));
            if (rows.empty()) fail(Errc::invalid_argument, "input spans the zero subspace only");
            continue;
        }
        rows[j] = normalize_to_sphere(K, w);
    }
    fail(Errc::precision, "orthogonalization did not terminate within the digit window");
}

SubspaceK subspace_k(const Zk& K, std::span<const VecK> generators) {
    std::vector<VecK> basis = orthogonalize(K, generators);
    SubspaceK w;
    w.kid = K.id();
    w.n = basis[0].n();
    w.basis = std::move(basis);
    return w;
}

SubspaceK subspace_k_from_orthogonal(const Zk& K, std::span<const VecK> basis) {
    if (!set_orthogonal(K, basis))
        fail(Errc::invalid_argument, "the provided basis is not orthogonal");
    SubspaceK w;
    w.kid = K.id();
    w.n = basis[0].n();
    w.basis.assign(basis.begin(), basis.end());
    return w;
}

SubspaceFq mu_n(const Zk& K, const SubspaceK& v) {
    check_subspace(K, v);
    std::vector<PointFq> residues;
    for (const VecK& b : v.basis) residues.push_back(gamma_n(K, b));
    return subspace_from(K.k(), v.n, residues);
}

bool feebly_orthogonal(const Zk& K, const SubspaceK& u, const SubspaceK& v) {
    check_subspace(K, u);
    check_subspace(K, v);
    if (u.dim() != v.dim())
        fail(Errc::invalid_argument, "feeble orthogonality compares equal dimensions");
    return mu_n(K, u) != mu_n(K, v);
}

int rank_k(const Zk& K, std::span<const VecK> vs) {
    if (vs.empty()) return 0;
    std::vector<VecK> rows;
    for (const VecK& v : vs) {
        check_vec(K, v);
        check_same_n(vs[0], v);
        rows.push_back(v);
    }
    int n = rows[0].n();
    size_t rank = 0;
    for (int col = 0; col < n && rank < rows.size(); ++col) {
        size_t best = rows.size();
        QPow best_norm = QPow::zero_of(K.q());
        for (size_t r = rank; r < rows.size(); ++r) {
            QPow a = K.abs(rows[r].entries[col]);
            if (best_norm.less(a)) {
                best_norm = a;
                best = r;
            }
        }
        if (best == rows.size()) continue;
        std::swap(rows[rank], rows[best]);
        ZkElem pinv = K.inv(rows[rank].entries[col]);
        for (size_t r = rank + 1; r < rows.size(); ++r) {
            const ZkElem& c = rows[r].entries[col];
            if (c.zero) continue;
            ZkElem f = K.mul(c, pinv);
            // the pivot column cancels exactly by construction; assign the
            // zero rather than subtracting a value from itself
            rows[r].entries[col] = K.zero();
            for (int j = col + 1; j < n; ++j) {
                try {
                    rows[r].entries[j] =
                        K.add(rows[r].entries[j], K.neg(K.mul(f, rows[rank].entries[j])));
                } catch (const Error& e) {
                    if (e.code() != Errc::precision) throw;
                    // vanished through the whole known window: zero at the
                    // stored precision
                    rows[r].entries[j] = K.zero();
                }
            }
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

bool subspace_k_contains(const Zk& K, const SubspaceK& w, const VecK& v) {
    check_subspace(K, w);
    check_vec(K, v);
    if (v.n() != w.n) fail(Errc::invalid_argument, "vector dimension does not match the subspace");
    if (vec_is_zero(v)) return true;
    std::vector<VecK> rows = w.basis;
    rows.push_back(v);
    return rank_k(K, rows) == w.dim();
}

bool subspace_k_equal(const Zk& K, const SubspaceK& u, const SubspaceK& v) {
    check_subspace(K, u);
    check_subspace(K, v);
    if (u.n != v.n || u.dim() != v.dim()) return false;
    for (const VecK& b : u.basis)
        if (!subspace_k_contains(K, v, b)) return false;
    return true;
}

std::string vec_str(const Zk& K, const VecK& v) {
    check_vec(K, v);
    std::string out = "(";
    for (size_t i = 0; i < v.entries.size(); ++i) {
        if (i) out += ",";
        out += K.print(v.entries[i]);
    }
    return out + ")";
}

VecK vec_parse(const Zk& K, std::string_view s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string_view::npos || s[a] != '(' || s[b] != ')')
        fail(Errc::parse, "vector literal must be parenthesized: (e1,e2,...)");
    std::string_view body = s.substr(a + 1, b - a - 1);
    std::vector<ZkElem> entries;
    size_t start = 0;
    int paren_depth = 0;
    for (size_t i = 0; i <= body.size(); ++i) {
        bool at_end = i == body.size();
        if (!at_end) {
            if (body[i] == '(') ++paren_depth;
            if (body[i] == ')') --paren_depth;
        }
        if (at_end || (body[i] == ',' && paren_depth == 0)) {
            entries.push_back(K.parse(std::string_view(body.substr(start, i - start))));
            start = i + 1;
        }
    }
    return vec(K, entries);
}

std::string subspace_k_str(const Zk& K, const SubspaceK& w) {
    check_subspace(K, w);
    std::string out = "span[";
    for (size_t i = 0; i < w.basis.size(); ++i) {
        if (i) out += "; ";
        out += vec_str(K, w.basis[i]);
    }
    return out + "]";
}

SubspaceK subspace_k_parse(const Zk& K, std::string_view s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string_view::npos || s.substr(a, 5) != "span[" || s[b] != ']')
        fail(Errc::parse, "subspace literal must look like span[(...); (...)]");
    std::string_view body = s.substr(a + 5, b - a - 5);
    std::vector<VecK> basis;
    size_t start = 0;
    for (size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || body[i] == ';') {
            basis.push_back(vec_parse(K, body.substr(start, i - start)));
            start = i + 1;
        }
    }
    return subspace_k_from_orthogonal(K, basis);
}

}  // namespace umo
