#include "umo.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "umo/errors.hpp"
#include "umo/extremal.hpp"
#include "umo/linalg_k.hpp"
#include "umo/valued.hpp"
#include "umo/verify.hpp"

struct umo_field {
    std::shared_ptr<const umo::Zk> K;
};

namespace {

thread_local std::string g_last_error;

int to_c_code(umo::Errc code) {
    switch (code) {
        case umo::Errc::none: return UMO_OK;
        case umo::Errc::invalid_argument: return UMO_ERR_INVALID_ARGUMENT;
        case umo::Errc::parse: return UMO_ERR_PARSE;
        case umo::Errc::precision: return UMO_ERR_PRECISION;
        case umo::Errc::domain: return UMO_ERR_DOMAIN;
        case umo::Errc::budget: return UMO_ERR_BUDGET;
        case umo::Errc::cap_exceeded: return UMO_ERR_CAP_EXCEEDED;
        case umo::Errc::field_mismatch: return UMO_ERR_FIELD_MISMATCH;
        case umo::Errc::io: return UMO_ERR_IO;
    }
    return UMO_ERR_INTERNAL;
}

// Runs fn, routing exceptions into the error-code contract.
template <class Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return UMO_OK;
    } catch (const umo::Error& e) {
        g_last_error = e.what();
        return to_c_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return UMO_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put_string(char** slot, const std::string& s) {
    if (slot) *slot = dup_string(s);
}

const umo::Zk& field_of(const umo_field* f) {
    if (!f) umo::fail(umo::Errc::invalid_argument, "null field handle");
    return *f->K;
}

std::vector<umo::VecK> parse_vectors(const umo::Zk& K, const char* const* vecs, int count) {
    if (!vecs || count < 1) umo::fail(umo::Errc::invalid_argument, "no vectors given");
    std::vector<umo::VecK> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        if (!vecs[i]) umo::fail(umo::Errc::invalid_argument, "null vector literal");
        out.push_back(umo::vec_parse(K, vecs[i]));
    }
    for (const umo::VecK& v : out)
        if (v.n() != out.front().n())
            umo::fail(umo::Errc::invalid_argument, "vectors of mixed lengths");
    return out;
}

long long int_arg(const char* b, const char* op) {
    if (!b) umo::fail(umo::Errc::invalid_argument, std::string(op) + " needs an integer operand");
    std::string s(b);
    size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        umo::fail(umo::Errc::parse, "malformed integer '" + s + "'");
    }
    if (pos != s.size()) umo::fail(umo::Errc::parse, "malformed integer '" + s + "'");
    return v;
}

umo::VerifyProfile resolve_profile(const char* profile, const char* profiles_path, int threads) {
    std::string name = profile ? profile : "default";
    umo::VerifyProfile p = profiles_path ? umo::load_profile(profiles_path, name)
                                         : umo::builtin_profile(name);
    if (threads > 0) p.threads = threads;
    return p;
}

}  // namespace

extern "C" {

const char* umo_errc_name(int code) {
    switch (code) {
        case UMO_OK: return "ok";
        case UMO_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case UMO_ERR_PARSE: return "parse";
        case UMO_ERR_PRECISION: return "precision";
        case UMO_ERR_DOMAIN: return "domain";
        case UMO_ERR_BUDGET: return "budget";
        case UMO_ERR_CAP_EXCEEDED: return "cap-exceeded";
        case UMO_ERR_FIELD_MISMATCH: return "field-mismatch";
        case UMO_ERR_IO: return "io";
        case UMO_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* umo_last_error(void) { return g_last_error.c_str(); }

void umo_string_free(char* s) { std::free(s); }

const char* umo_version(void) { return "0.1.0"; }

int umo_field_make_laurent(long long p, int m, int precision, umo_field** out) {
    return guarded([&] {
        if (!out) umo::fail(umo::Errc::invalid_argument, "null output handle");
        *out = new umo_field{umo::Zk::make_laurent(p, m, precision)};
    });
}

int umo_field_make_padic(long long p, int precision, umo_field** out) {
    return guarded([&] {
        if (!out) umo::fail(umo::Errc::invalid_argument, "null output handle");
        *out = new umo_field{umo::Zk::make_padic(p, precision)};
    });
}

void umo_field_free(umo_field* f) { delete f; }

int umo_field_backend(const umo_field* f) {
    if (!f) return -1;
    return f->K->backend() == umo::Backend::laurent ? UMO_BACKEND_LAURENT : UMO_BACKEND_PADIC;
}

long long umo_field_q(const umo_field* f) { return f ? f->K->q() : 0; }

int umo_field_precision(const umo_field* f) { return f ? f->K->precision() : 0; }

int umo_field_describe(const umo_field* f, char** out) {
    return guarded([&] {
        const umo::Zk& K = field_of(f);
        const umo::Gf& k = K.k();
        std::string text;
        text += "backend: ";
        text += K.backend() == umo::Backend::laurent ? "laurent" : "padic";
        text += "\nresidue field: F_" + std::to_string(k.q());
        text += " (p=" + std::to_string(k.p()) + ", m=" + std::to_string(k.m()) + ")";
        text += "\nmodulus: " + k.modulus_string();
        text += "\nuniformizer: " + K.uniformizer_name();
        text += "\nprecision: " + std::to_string(K.precision()) + " digits";
        put_string(out, text);
    });
}

int umo_scalar_eval(const umo_field* f, const char* op, const char* a, const char* b, char** out) {
    return guarded([&] {
        const umo::Zk& K = field_of(f);
        if (!op || !a) umo::fail(umo::Errc::invalid_argument, "missing operation or operand");
        std::string name(op);
        umo::ZkElem x = K.parse(a);
        std::string text;
        if (name == "add" || name == "sub" || name == "mul" || name == "div") {
            if (!b) umo::fail(umo::Errc::invalid_argument, name + " needs two operands");
            umo::ZkElem y = K.parse(b);
            umo::ZkElem r = name == "add"   ? K.add(x, y)
                            : name == "sub" ? K.sub(x, y)
                            : name == "mul" ? K.mul(x, y)
                                            : K.mul(x, K.inv(y));
            text = K.print(r);
        } else if (name == "neg") {
            text = K.print(K.neg(x));
        } else if (name == "inv") {
            text = K.print(K.inv(x));
        } else if (name == "pow") {
            text = K.print(K.pow(x, int_arg(b, "pow")));
        } else if (name == "nu") {
            auto v = K.nu(x);
            text = v ? std::to_string(*v) : "inf";
        } else if (name == "abs") {
            text = K.abs(x).str();
        } else if (name == "gamma") {
            text = K.k().name(K.gamma(x));
        } else if (name == "res") {
            text = K.k().name(K.res(x, int_arg(b, "res")));
        } else {
            umo::fail(umo::Errc::invalid_argument, "unknown scalar operation '" + name + "'");
        }
        put_string(out, text);
    });
}

int umo_ortho_pair(const umo_field* f, const char* u, const char* v, int* out_orthogonal) {
    return guarded([&] {
        const umo::Zk& K = field_of(f);
        if (!u || !v || !out_orthogonal)
            umo::fail(umo::Errc::invalid_argument, "missing vector or output");
        const char* vecs[] = {u, v};
        std::vector<umo::VecK> parsed = parse_vectors(K, vecs, 2);
        *out_orthogonal = umo::pair_orthogonal(K, parsed[0], parsed[1]) ? 1 : 0;
    });
}

int umo_ortho_wedge(const umo_field* f, const char* const* vecs, int count, char** out_norm,
                    int* out_orthogonal) {
    return guarded([&] {
        const umo::Zk& K = field_of(f);
        std::vector<umo::VecK> parsed = parse_vectors(K, vecs, count);
        umo::QPow norm = umo::wedge_norm(K, parsed);
        put_string(out_norm, norm.str());
        if (out_orthogonal) *out_orthogonal = norm == umo::QPow::one_of(K.q()) ? 1 : 0;
    });
}

int umo_ortho_set(const umo_field* f, const char* const* vecs, int count, int* out_orthogonal) {
    return guarded([&] {
        const umo::Zk& K = field_of(f);
        if (!out_orthogonal) umo::fail(umo::Errc::invalid_argument, "null output");
        std::vector<umo::VecK> parsed = parse_vectors(K, vecs, count);
        *out_orthogonal = umo::set_orthogonal(K, parsed) ? 1 : 0;
    });
}

int umo_ortho_falsify(const umo_field* f, const char* const* vecs, int count, int depth,
                      int* out_found, char** out_tuple) {
    return guarded([&] {
        const umo::Zk& K = field_of(f);
        if (!out_found) umo::fail(umo::Errc::invalid_argument, "null output");
        std::vector<umo::VecK> parsed = parse_vectors(K, vecs, count);
        auto hit = umo::falsify_orthogonality(K, parsed, depth);
        *out_found = hit ? 1 : 0;
        if (hit && out_tuple) {
            std::string text = "(";
            for (size_t i = 0; i < hit->size(); ++i) {
                if (i) text += ",";
                text += K.print((*hit)[i]);
            }
            text += ")";
            put_string(out_tuple, text);
        } else if (out_tuple) {
            *out_tuple = nullptr;
        }
    });
}

int umo_extremal_solve(const char* quantity, long long q, int n, int s, int k, int l, int threads,
                       int want_witness, const char* cache_path, long long* out_value,
                       char** out_method, char** out_witness, char** out_hash,
                       int* out_from_cache) {
    return guarded([&] {
        if (!quantity) umo::fail(umo::Errc::invalid_argument, "missing quantity");
        umo::ExtremalQuery query;
        query.quantity = umo::quantity_parse(quantity);
        query.q = q;
        query.n = n;
        query.s = s;
        query.k = k;
        query.l = l;
        umo::validate_query(query);
        umo::SolveOptions opts;
        opts.threads = threads > 1 ? threads : 1;
        umo::ExtremalResult result;
        std::string hash;
        if (cache_path) {
            umo::ResultCache cache{std::string(cache_path)};
            result = umo::solve_cached(query, cache, want_witness != 0, opts);
            hash = result.from_cache && !want_witness ? cache.lookup(query)->witness_hash
                                                      : umo::witness_hash(result.witness);
        } else {
            result = umo::solve(query, opts);
            hash = umo::witness_hash(result.witness);
        }
        if (out_value) *out_value = result.value;
        put_string(out_method, result.method);
        put_string(out_witness,
                   want_witness ? umo::witness_serialize(result.witness) : std::string("none"));
        put_string(out_hash, hash);
        if (out_from_cache) *out_from_cache = result.from_cache ? 1 : 0;
    });
}

int umo_gaussian_binomial(int n, int s, long long q, long long* out) {
    return guarded([&] {
        if (!out) umo::fail(umo::Errc::invalid_argument, "null output");
        *out = umo::gaussian_binomial(n, s, q);
    });
}

int umo_verify_ids(char** out) {
    return guarded([&] {
        std::string text;
        for (const std::string& id : umo::check_ids()) {
            text += id;
            text += "\n";
        }
        put_string(out, text);
    });
}

int umo_verify_summary(const char* id, char** out) {
    return guarded([&] {
        if (!id) umo::fail(umo::Errc::invalid_argument, "missing check id");
        put_string(out, std::string(umo::check_summary(id)));
    });
}

int umo_verify_run(const char* profile, const char* profiles_path, int threads, char** out_lines,
                   char** out_table, int* out_exit) {
    return guarded([&] {
        umo::VerifyProfile p = resolve_profile(profile, profiles_path, threads);
        std::vector<umo::CheckOutcome> outcomes = umo::run_all(p);
        std::string lines;
        for (const umo::CheckOutcome& o : outcomes) {
            lines += umo::outcome_line(o);
            lines += "\n";
        }
        put_string(out_lines, lines);
        put_string(out_table, umo::render_report(outcomes));
        if (out_exit) *out_exit = umo::report_exit_code(outcomes);
    });
}

int umo_verify_run_one(const char* id, const char* profile, const char* profiles_path,
                       char** out_line) {
    return guarded([&] {
        if (!id) umo::fail(umo::Errc::invalid_argument, "missing check id");
        umo::VerifyProfile p = resolve_profile(profile, profiles_path, 0);
        umo::CheckOutcome o = umo::run_check(id, p);
        put_string(out_line, umo::outcome_line(o));
    });
}

}  // extern "C"
