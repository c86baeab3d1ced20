#include "umo/ffgeom.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace umo {

namespace {

void check_point(const Gf& f, const PointFq& v) {
    if (v.fid != f.id()) fail(Errc::field_mismatch, "point does not belong to this field");
}

void check_same_n(const PointFq& a, const PointFq& b) {
    if (a.coords.size() != b.coords.size())
        fail(Errc::invalid_argument, "points have different dimensions");
}

long long checked_pow(long long q, int n, long long cap) {
    long long v = 1;
    for (int i = 0; i < n; ++i) {
        if (v > cap / q)
            fail(Errc::cap_exceeded, "enumeration size exceeds the cap of " + std::to_string(cap));
        v *= q;
    }
    return v;
}

// Rows kept in reduced echelon form; returns the pivot column of v after
// reduction, or -1 when v reduces to zero.
int reduce_against(const Gf& f, const std::vector<PointFq>& rows, const std::vector<int>& pivots,
                   PointFq& v) {
    for (size_t r = 0; r < rows.size(); ++r) {
        GfElem c = f.elem(v.coords[pivots[r]]);
        if (f.is_zero(c)) continue;
        GfElem neg = f.neg(c);
        for (size_t j = 0; j < v.coords.size(); ++j) {
            GfElem t = f.add(f.elem(v.coords[j]), f.mul(neg, f.elem(rows[r].coords[j])));
            v.coords[j] = static_cast<uint16_t>(f.index(t));
        }
    }
    for (size_t j = 0; j < v.coords.size(); ++j)
        if (v.coords[j] != 0) return static_cast<int>(j);
    return -1;
}

int span_dim_bits(std::span<const PointFq> vs) {
    uint64_t basis[64] = {};  // basis[b] has highest set bit b
    int rank = 0;
    for (const PointFq& v : vs) {
        uint64_t w = 0;
        for (size_t j = 0; j < v.coords.size(); ++j)
            if (v.coords[j]) w |= uint64_t(1) << j;
        while (w) {
            int b = 63 - std::countl_zero(w);
            if (!basis[b]) {
                basis[b] = w;
                ++rank;
                break;
            }
            w ^= basis[b];
        }
    }
    return rank;
}

}  // namespace

PointFq point(const Gf& f, std::span<const long long> coord_indices) {
    PointFq v;
    v.fid = f.id();
    v.coords.reserve(coord_indices.size());
    for (long long i : coord_indices) {
        if (i < 0 || i >= f.q()) fail(Errc::invalid_argument, "coordinate index out of range");
        v.coords.push_back(static_cast<uint16_t>(i));
    }
    return v;
}

PointFq zero_point(const Gf& f, int n) {
    if (n < 1) fail(Errc::invalid_argument, "dimension must be at least 1");
    PointFq v;
    v.fid = f.id();
    v.coords.assign(static_cast<size_t>(n), 0);
    return v;
}

bool is_zero_point(const PointFq& v) {
    return std::all_of(v.coords.begin(), v.coords.end(), [](uint16_t c) { return c == 0; });
}

std::vector<int> support(const PointFq& v) {
    std::vector<int> s;
    for (size_t i = 0; i < v.coords.size(); ++i)
        if (v.coords[i] != 0) s.push_back(static_cast<int>(i));
    return s;
}

PointFq point_add(const Gf& f, const PointFq& a, const PointFq& b) {
    check_point(f, a);
    check_point(f, b);
    check_same_n(a, b);
    PointFq r = a;
    for (size_t j = 0; j < r.coords.size(); ++j)
        r.coords[j] =
            static_cast<uint16_t>(f.index(f.add(f.elem(a.coords[j]), f.elem(b.coords[j]))));
    return r;
}

PointFq point_scale(const Gf& f, GfElem c, const PointFq& a) {
    check_point(f, a);
    PointFq r = a;
    for (size_t j = 0; j < r.coords.size(); ++j)
        r.coords[j] = static_cast<uint16_t>(f.index(f.mul(c, f.elem(a.coords[j]))));
    return r;
}

PointFq point_neg(const Gf& f, const PointFq& a) {
    check_point(f, a);
    PointFq r = a;
    for (size_t j = 0; j < r.coords.size(); ++j)
        r.coords[j] = static_cast<uint16_t>(f.index(f.neg(f.elem(a.coords[j]))));
    return r;
}

long long point_code(const Gf& f, const PointFq& v) {
    check_point(f, v);
    long long code = 0;
    for (uint16_t c : v.coords) {
        if (code > (std::numeric_limits<long long>::max() - c) / f.q())
            fail(Errc::cap_exceeded, "point code out of range");
        code = code * f.q() + c;
    }
    return code;
}

PointFq point_from_code(const Gf& f, int n, long long code) {
    if (n < 1) fail(Errc::invalid_argument, "dimension must be at least 1");
    PointFq v;
    v.fid = f.id();
    v.coords.assign(static_cast<size_t>(n), 0);
    for (int i = n; i-- > 0;) {
        v.coords[i] = static_cast<uint16_t>(code % f.q());
        code /= f.q();
    }
    if (code != 0) fail(Errc::invalid_argument, "point code out of range for this dimension");
    return v;
}

PointFq rho(const Gf& f, const PointFq& v) {
    check_point(f, v);
    for (size_t i = 0; i < v.coords.size(); ++i) {
        if (v.coords[i] == 0) continue;
        if (v.coords[i] == 1) return v;  // already canonical
        return point_scale(f, f.inv(f.elem(v.coords[i])), v);
    }
    fail(Errc::domain, "projective image of the zero vector");
}

int span_dim(const Gf& f, std::span<const PointFq> vs) {
    if (vs.empty()) return 0;
    for (const PointFq& v : vs) check_point(f, v);
    if (f.q() == 2 && vs[0].coords.size() <= 64) return span_dim_bits(vs);
    std::vector<PointFq> rows;
    std::vector<int> pivots;
    for (const PointFq& v : vs) {
        PointFq w = v;
        int piv = reduce_against(f, rows, pivots, w);
        if (piv < 0) continue;
        GfElem lead = f.elem(w.coords[piv]);
        if (w.coords[piv] != 1) w = point_scale(f, f.inv(lead), w);
        rows.push_back(std::move(w));
        pivots.push_back(piv);
    }
    return static_cast<int>(rows.size());
}

std::vector<PointFq> enumerate_points(const Gf& f, int n, long long cap) {
    long long total = checked_pow(f.q(), n, cap);
    std::vector<PointFq> out;
    out.reserve(static_cast<size_t>(total - 1));
    for (long long code = 1; code < total; ++code) out.push_back(point_from_code(f, n, code));
    return out;
}

std::vector<PointFq> enumerate_proj_points(const Gf& f, int n, long long cap) {
    long long total = checked_pow(f.q(), n, cap);
    std::vector<PointFq> out;
    for (long long code = 1; code < total; ++code) {
        PointFq v = point_from_code(f, n, code);
        size_t lead = 0;
        while (v.coords[lead] == 0) ++lead;
        if (v.coords[lead] == 1) out.push_back(std::move(v));
    }
    return out;
}

SubspaceFq subspace_from(const Gf& f, int n, std::span<const PointFq> vs) {
    if (n < 1) fail(Errc::invalid_argument, "dimension must be at least 1");
    std::vector<PointFq> rows;
    std::vector<int> pivots;
    for (const PointFq& v : vs) {
        check_point(f, v);
        if (static_cast<int>(v.coords.size()) != n)
            fail(Errc::invalid_argument, "vector dimension does not match the subspace");
        PointFq w = v;
        int piv = reduce_against(f, rows, pivots, w);
        if (piv < 0) continue;
        if (w.coords[piv] != 1) w = point_scale(f, f.inv(f.elem(w.coords[piv])), w);
        // clear this column in the rows above to keep the basis fully reduced
        for (size_t r = 0; r < rows.size(); ++r) {
            GfElem c = f.elem(rows[r].coords[piv]);
            if (f.is_zero(c)) continue;
            rows[r] = point_add(f, rows[r], point_scale(f, f.neg(c), w));
        }
        rows.push_back(std::move(w));
        pivots.push_back(piv);
    }
    std::vector<size_t> order(rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pivots[a] < pivots[b]; });
    SubspaceFq w;
    w.fid = f.id();
    w.n = n;
    for (size_t i : order) w.rows.push_back(std::move(rows[i]));
    return w;
}

std::vector<SubspaceFq> enumerate_subspaces(const Gf& f, int s, int n, long long cap) {
    if (s < 0 || n < 1 || s > n) fail(Errc::invalid_argument, "need 0 <= s <= n");
    long long count = gaussian_binomial(n, s, f.q());
    if (count > cap)
        fail(Errc::cap_exceeded, "subspace enumeration size exceeds the cap of " + std::to_string(cap));
    std::vector<SubspaceFq> out;
    out.reserve(static_cast<size_t>(count));
    if (s == 0) {
        out.push_back(SubspaceFq{f.id(), n, {}});
        return out;
    }
    // walk pivot-column subsets in lexicographic order
    std::vector<int> piv(s);
    for (int i = 0; i < s; ++i) piv[i] = i;
    while (true) {
        std::vector<bool> is_piv(n, false);
        for (int p : piv) is_piv[p] = true;
        std::vector<std::pair<int, int>> free_pos;  // (row, col) in row-major order
        for (int i = 0; i < s; ++i)
            for (int j = piv[i] + 1; j < n; ++j)
                if (!is_piv[j]) free_pos.emplace_back(i, j);
        std::vector<uint16_t> fill(free_pos.size(), 0);
        while (true) {
            SubspaceFq w;
            w.fid = f.id();
            w.n = n;
            for (int i = 0; i < s; ++i) {
                PointFq row = zero_point(f, n);
                row.coords[piv[i]] = 1;
                w.rows.push_back(std::move(row));
            }
            for (size_t t = 0; t < free_pos.size(); ++t)
                w.rows[free_pos[t].first].coords[free_pos[t].second] = fill[t];
            out.push_back(std::move(w));
            size_t t = fill.size();
            while (t > 0 && fill[t - 1] == f.q() - 1) fill[--t] = 0;
            if (t == 0) break;
            ++fill[t - 1];
        }
        int i = s - 1;
        while (i >= 0 && piv[i] == n - s + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < s; ++j) piv[j] = piv[j - 1] + 1;
    }
    return out;
}

bool subspace_contains(const Gf& f, const SubspaceFq& w, const PointFq& v) {
    if (w.fid != f.id()) fail(Errc::field_mismatch, "subspace does not belong to this field");
    check_point(f, v);
    if (static_cast<int>(v.coords.size()) != w.n)
        fail(Errc::invalid_argument, "vector dimension does not match the subspace");
    PointFq r = v;
    for (const PointFq& row : w.rows) {
        size_t piv = 0;
        while (row.coords[piv] == 0) ++piv;
        GfElem c = f.elem(r.coords[piv]);
        if (f.is_zero(c)) continue;
        r = point_add(f, r, point_scale(f, f.neg(c), row));
    }
    return is_zero_point(r);
}

std::vector<PointFq> subspace_points(const Gf& f, const SubspaceFq& w, long long cap) {
    if (w.fid != f.id()) fail(Errc::field_mismatch, "subspace does not belong to this field");
    int s = w.dim();
    long long total = checked_pow(f.q(), s, cap);
    std::vector<PointFq> out;
    out.reserve(static_cast<size_t>(total - 1));
    for (long long code = 1; code < total; ++code) {
        PointFq acc = zero_point(f, w.n);
        long long c = code;
        for (int i = s; i-- > 0;) {
            long long digit = c % f.q();
            c /= f.q();
            if (digit) acc = point_add(f, acc, point_scale(f, f.elem(digit), w.rows[i]));
        }
        out.push_back(std::move(acc));
    }
    return out;
}

long long gaussian_binomial(int n, int s, long long q) {
    if (n < 0 || q < 2) fail(Errc::invalid_argument, "need n >= 0 and q >= 2");
    if (s < 0 || s > n) return 0;
    // recurrence [n s] = [n-1 s-1] + q^s [n-1 s]
    std::vector<__int128> row(static_cast<size_t>(s) + 1, 0);
    row[0] = 1;
    constexpr __int128 lim = std::numeric_limits<long long>::max();
    for (int i = 1; i <= n; ++i) {
        for (int j = std::min(i, s); j >= 1; --j) {
            __int128 qs = 1;
            for (int t = 0; t < j; ++t) {
                qs *= q;
                if (qs > lim) fail(Errc::cap_exceeded, "gaussian binomial out of range");
            }
            __int128 v = row[j - 1] + qs * row[j];
            if (v > lim) fail(Errc::cap_exceeded, "gaussian binomial out of range");
            row[j] = v;
        }
    }
    return static_cast<long long>(row[s]);
}

std::string point_str(const Gf& f, const PointFq& v) {
    check_point(f, v);
    std::string out = "(";
    for (size_t i = 0; i < v.coords.size(); ++i) {
        if (i) out += ",";
        out += f.name(f.elem(v.coords[i]));
    }
    return out + ")";
}

PointFq point_parse(const Gf& f, std::string_view s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string_view::npos || s[a] != '(' || s[b] != ')')
        fail(Errc::parse, "point literal must be parenthesized: (c1,c2,...)");
    std::string_view body = s.substr(a + 1, b - a - 1);
    PointFq v;
    v.fid = f.id();
    size_t start = 0;
    while (true) {
        size_t comma = body.find(',', start);
        std::string_view piece =
            comma == std::string_view::npos ? body.substr(start) : body.substr(start, comma - start);
        size_t pa = piece.find_first_not_of(" \t");
        if (pa == std::string_view::npos) fail(Errc::parse, "empty coordinate in point literal");
        size_t pb = piece.find_last_not_of(" \t");
        v.coords.push_back(
            static_cast<uint16_t>(f.index(f.parse_name(piece.substr(pa, pb - pa + 1)))));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return v;
}

}  // namespace umo
