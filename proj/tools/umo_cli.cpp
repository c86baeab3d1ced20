#include <cstdio>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "umo.h"

namespace {

using Json = nlohmann::json;

// Library failure carrying the C error code; main() maps it to the exit
// contract: 64 usage or parse, 2 budget, 1 everything else.
struct Fatal {
    int rc;
    std::string message;
};

int exit_for(int rc) {
    switch (rc) {
        case UMO_OK: return 0;
        case UMO_ERR_INVALID_ARGUMENT:
        case UMO_ERR_PARSE: return 64;
        case UMO_ERR_BUDGET:
        case UMO_ERR_CAP_EXCEEDED: return 2;
        default: return 1;
    }
}

void check(int rc) {
    if (rc != UMO_OK) throw Fatal{rc, umo_last_error()};
}

using CStr = std::unique_ptr<char, void (*)(char*)>;

CStr own(char* s) { return CStr(s, umo_string_free); }

std::string text_of(const CStr& s) { return s ? s.get() : ""; }

struct Config {
    long long laurent_q = 2;
    long long padic_p = 0;
    int precision = 4;
    std::string format = "md";
    std::string cache;
    int threads = 1;
};

using Field = std::unique_ptr<umo_field, void (*)(umo_field*)>;

// Smallest prime power decomposition; rejects non prime powers.
bool prime_power(long long q, long long* p, int* m) {
    if (q < 2) return false;
    long long base = q;
    for (long long d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            base = d;
            break;
        }
    long long v = q;
    int e = 0;
    while (v % base == 0) {
        v /= base;
        ++e;
    }
    if (v != 1) return false;
    *p = base;
    *m = e;
    return true;
}

Field open_field(const Config& cfg) {
    umo_field* f = nullptr;
    if (cfg.padic_p > 0) {
        check(umo_field_make_padic(cfg.padic_p, cfg.precision, &f));
    } else {
        long long p = 0;
        int m = 0;
        if (!prime_power(cfg.laurent_q, &p, &m))
            throw Fatal{UMO_ERR_INVALID_ARGUMENT,
                        "q=" + std::to_string(cfg.laurent_q) + " is not a prime power"};
        check(umo_field_make_laurent(p, m, cfg.precision, &f));
    }
    return Field(f, umo_field_free);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

// One tabular result set, rendered per the configured format.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void print(const std::string& format) const {
        if (format == "csv") {
            print_csv();
        } else if (format == "jsonl") {
            print_jsonl();
        } else {
            print_md();
        }
    }

    void print_csv() const {
        std::string line;
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) line += ",";
            line += csv_escape(header[i]);
        }
        std::printf("%s\n", line.c_str());
        for (const auto& row : rows) {
            line.clear();
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) line += ",";
                line += csv_escape(row[i]);
            }
            std::printf("%s\n", line.c_str());
        }
    }

    void print_jsonl() const {
        for (const auto& row : rows) {
            Json obj = Json::object();
            for (size_t i = 0; i < header.size() && i < row.size(); ++i)
                obj[header[i]] = typed_cell(row[i]);
            std::printf("%s\n", obj.dump().c_str());
        }
    }

    static Json typed_cell(const std::string& cell) {
        if (cell == "true") return true;
        if (cell == "false") return false;
        if (!cell.empty() && cell.find_first_not_of("-0123456789") == std::string::npos &&
            cell.find('-', 1) == std::string::npos && cell != "-") {
            try {
                return std::stoll(cell);
            } catch (const std::exception&) {
            }
        }
        return cell;
    }

    void print_md() const {
        std::vector<size_t> width(header.size());
        for (size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
        for (const auto& row : rows)
            for (size_t i = 0; i < row.size() && i < width.size(); ++i)
                width[i] = std::max(width[i], row[i].size());
        auto line = [&](const std::vector<std::string>& cells) {
            std::string out = "|";
            for (size_t i = 0; i < width.size(); ++i) {
                std::string cell = i < cells.size() ? cells[i] : "";
                out += " " + cell + std::string(width[i] - cell.size(), ' ') + " |";
            }
            std::printf("%s\n", out.c_str());
        };
        line(header);
        std::string rule = "|";
        for (size_t w : width) rule += std::string(w + 2, '-') + "|";
        std::printf("%s\n", rule.c_str());
        for (const auto& row : rows) line(row);
    }
};

long long ipow(long long q, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= q;
    return r;
}

std::string fraction(long long num, long long den) {
    long long g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

// Inclusive integer range "a..b" or a single integer.
bool parse_range(const std::string& text, int* lo, int* hi) {
    size_t dots = text.find("..");
    try {
        size_t pos = 0;
        if (dots == std::string::npos) {
            *lo = *hi = std::stoi(text, &pos);
            return pos == text.size();
        }
        *lo = std::stoi(text.substr(0, dots), &pos);
        if (pos != dots) return false;
        std::string tail = text.substr(dots + 2);
        *hi = std::stoi(tail, &pos);
        return pos == tail.size() && *lo <= *hi;
    } catch (const std::exception&) {
        return false;
    }
}

struct SolveRow {
    long long value = 0;
    std::string method;
    std::string witness;
    std::string hash;
    bool from_cache = false;
};

SolveRow solve_one(const std::string& quantity, long long q, int n, int s, int k, int l,
                   const Config& cfg, bool want_witness) {
    SolveRow row;
    char* method = nullptr;
    char* witness = nullptr;
    char* hash = nullptr;
    int from_cache = 0;
    check(umo_extremal_solve(quantity.c_str(), q, n, s, k, l, cfg.threads, want_witness ? 1 : 0,
                             cfg.cache.empty() ? nullptr : cfg.cache.c_str(), &row.value, &method,
                             &witness, &hash, &from_cache));
    row.method = text_of(own(method));
    row.witness = text_of(own(witness));
    row.hash = text_of(own(hash));
    row.from_cache = from_cache != 0;
    return row;
}

int cmd_extremal(const std::string& quantity, long long q, int n, int s, int k, int l,
                 const Config& cfg, bool want_witness) {
    SolveRow row = solve_one(quantity, q, n, s, k, l, cfg, want_witness);
    if (cfg.format == "md") {
        std::printf("%lld\n", row.value);
        if (want_witness) {
            std::printf("witness: %s\n", row.witness.c_str());
            std::printf("hash: %s\n", row.hash.c_str());
        }
        return 0;
    }
    Table t;
    t.header = {"quantity", "q", "n", "s", "k", "l", "value", "method", "witness", "hash",
                "from_cache"};
    t.rows.push_back({quantity, std::to_string(q), std::to_string(n), std::to_string(s),
                      std::to_string(k), std::to_string(l), std::to_string(row.value), row.method,
                      row.witness, row.hash, row.from_cache ? "true" : "false"});
    t.print(cfg.format);
    return 0;
}

int cmd_table(const std::string& quantity, long long q, int n, int s, const std::string& k_range,
              int l, const Config& cfg) {
    int k_lo = 0, k_hi = 0;
    if (!parse_range(k_range, &k_lo, &k_hi))
        throw Fatal{UMO_ERR_INVALID_ARGUMENT, "bad k range '" + k_range + "' (want A or A..B)"};
    Table t;
    bool omega = quantity == "omega";
    bool theta = quantity == "theta";
    bool profile_kind = quantity == "delta" || omega;
    if (!omega) s = 0;
    long long m = 0;
    if (omega) {
        check(umo_gaussian_binomial(n, s, q, &m));
    } else {
        m = (ipow(q, n) - 1) / (q - 1);
    }
    t.header = {"quantity", "q", "n"};
    if (omega) t.header.push_back("s");
    t.header.insert(t.header.end(), {"k", "l", "value"});
    if (profile_kind) t.header.insert(t.header.end(), {"lower", "upper"});
    if (theta)
        t.header.insert(t.header.end(), {"value/k", "ratio-lower", "ratio-upper"});
    for (int k = k_lo; k <= k_hi; ++k) {
        SolveRow row = solve_one(quantity, q, n, s, k, l, cfg, false);
        std::vector<std::string> cells = {quantity, std::to_string(q), std::to_string(n)};
        if (omega) cells.push_back(std::to_string(s));
        cells.insert(cells.end(),
                     {std::to_string(k), std::to_string(l), std::to_string(row.value)});
        if (profile_kind) {
            long long lower = ((k - 1) / (l - 1)) * m;
            long long upper = (static_cast<long long>(k - 1) * m) / (l - 1);
            cells.push_back(std::to_string(lower));
            cells.push_back(std::to_string(upper));
        }
        if (theta) {
            cells.push_back(fraction(row.value, k));
            cells.push_back(fraction(ipow(q, n) - 1, ipow(q, l - 1) - 1));
            cells.push_back(std::to_string(ipow(q, n) - 1));
        }
        t.rows.push_back(std::move(cells));
    }
    t.print(cfg.format);
    return 0;
}

int cmd_verify(const std::string& profile, const std::string& profiles_file,
               const std::string& single_check, bool list, const Config& cfg) {
    const char* path = profiles_file.empty() ? nullptr : profiles_file.c_str();
    if (list) {
        char* ids = nullptr;
        check(umo_verify_ids(&ids));
        std::string all = text_of(own(ids));
        size_t start = 0;
        while (start < all.size()) {
            size_t nl = all.find('\n', start);
            std::string id = all.substr(start, nl - start);
            start = nl == std::string::npos ? all.size() : nl + 1;
            if (id.empty()) continue;
            char* summary = nullptr;
            check(umo_verify_summary(id.c_str(), &summary));
            std::printf("%-30s %s\n", id.c_str(), text_of(own(summary)).c_str());
        }
        return 0;
    }
    if (!single_check.empty()) {
        char* line = nullptr;
        check(umo_verify_run_one(single_check.c_str(), profile.c_str(), path, &line));
        std::string text = text_of(own(line));
        std::printf("%s\n", text.c_str());
        if (text.find("\tpass\t") != std::string::npos) return 0;
        return text.find("\tfail\t") != std::string::npos ? 1 : 2;
    }
    char* lines = nullptr;
    char* table = nullptr;
    int code = 0;
    check(umo_verify_run(profile.c_str(), path, cfg.threads, &lines, &table, &code));
    std::string raw = text_of(own(lines));
    if (cfg.format == "md") {
        std::printf("%s", text_of(own(table)).c_str());
    } else {
        Table t;
        t.header = {"id", "status", "ms", "cases", "detail"};
        size_t start = 0;
        while (start < raw.size()) {
            size_t nl = raw.find('\n', start);
            std::string line = raw.substr(start, nl - start);
            start = nl == std::string::npos ? raw.size() : nl + 1;
            if (line.empty()) continue;
            std::vector<std::string> fields;
            size_t fs = 0;
            while (fields.size() < 6) {
                size_t tab = line.find('\t', fs);
                if (tab == std::string::npos || fields.size() == 5) {
                    fields.push_back(line.substr(fs));
                    break;
                }
                fields.push_back(line.substr(fs, tab - fs));
                fs = tab + 1;
            }
            if (fields.size() == 6) t.rows.push_back({fields[1], fields[2], fields[3], fields[4],
                                                      fields[5]});
        }
        t.print(cfg.format);
        own(table);
    }
    return code;
}

int cmd_field_info(const Config& cfg) {
    Field f = open_field(cfg);
    char* text = nullptr;
    check(umo_field_describe(f.get(), &text));
    std::printf("%s\n", text_of(own(text)).c_str());
    return 0;
}

int cmd_field_op(const std::string& op, const std::string& a, const std::string& b,
                 bool have_b, const Config& cfg) {
    Field f = open_field(cfg);
    char* text = nullptr;
    check(umo_scalar_eval(f.get(), op.c_str(), a.c_str(), have_b ? b.c_str() : nullptr, &text));
    std::printf("%s\n", text_of(own(text)).c_str());
    return 0;
}

std::vector<const char*> c_ptrs(const std::vector<std::string>& vecs) {
    std::vector<const char*> out;
    out.reserve(vecs.size());
    for (const std::string& v : vecs) out.push_back(v.c_str());
    return out;
}

int cmd_ortho(const std::string& mode, const std::vector<std::string>& vecs, int depth,
              const Config& cfg) {
    Field f = open_field(cfg);
    std::vector<const char*> ptrs = c_ptrs(vecs);
    if (mode == "pair") {
        if (vecs.size() != 2)
            throw Fatal{UMO_ERR_INVALID_ARGUMENT, "ortho pair takes exactly two vectors"};
        int orthogonal = 0;
        check(umo_ortho_pair(f.get(), ptrs[0], ptrs[1], &orthogonal));
        std::printf("%s\n", orthogonal ? "orthogonal" : "not orthogonal");
        return 0;
    }
    if (mode == "wedge") {
        char* norm = nullptr;
        int orthogonal = 0;
        check(umo_ortho_wedge(f.get(), ptrs.data(), static_cast<int>(ptrs.size()), &norm,
                              &orthogonal));
        std::printf("wedge norm: %s\n", text_of(own(norm)).c_str());
        std::printf("%s\n", orthogonal ? "orthogonal" : "not orthogonal");
        return 0;
    }
    if (mode == "set") {
        int orthogonal = 0;
        check(umo_ortho_set(f.get(), ptrs.data(), static_cast<int>(ptrs.size()), &orthogonal));
        std::printf("%s\n", orthogonal ? "orthogonal" : "not orthogonal");
        return 0;
    }
    if (mode == "falsify") {
        int found = 0;
        char* tuple = nullptr;
        check(umo_ortho_falsify(f.get(), ptrs.data(), static_cast<int>(ptrs.size()), depth,
                                &found, &tuple));
        if (found) {
            std::printf("violation: coefficients %s\n", text_of(own(tuple)).c_str());
        } else {
            std::printf("no violation found at depth %d\n", depth);
        }
        return 0;
    }
    throw Fatal{UMO_ERR_INVALID_ARGUMENT, "unknown ortho mode '" + mode + "'"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact ultrametric orthogonality toolkit"};
    app.set_config("--config", "", "key=value configuration file");
    app.set_version_flag("--version", std::string(umo_version()));
    app.require_subcommand(1);

    Config cfg;
    auto* laurent_opt = app.add_option("--laurent", cfg.laurent_q,
                                       "Laurent backend over F_q (default, q=2)");
    auto* padic_opt = app.add_option("--padic", cfg.padic_p, "p-adic backend with prime p");
    padic_opt->excludes(laurent_opt);
    app.add_option("--precision", cfg.precision, "digit window for inexact results")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"md", "csv", "jsonl"}));
    app.add_option("--cache", cfg.cache, "extremal result cache file")->envname("UMO_CACHE");
    app.add_option("--threads", cfg.threads, "solver and harness parallelism")
        ->check(CLI::PositiveNumber);

    auto* field_cmd = app.add_subcommand("field", "inspect the field and evaluate scalar ops");
    field_cmd->fallthrough();
    auto* field_info = field_cmd->add_subcommand("info", "backend, residue field, precision");
    field_info->fallthrough();
    auto* field_op = field_cmd->add_subcommand("op", "evaluate one scalar operation");
    field_op->fallthrough();
    std::string op_name, op_a, op_b;
    field_op->add_option("name", op_name,
                         "add|sub|mul|div|neg|inv|pow|nu|abs|gamma|res")
        ->required();
    field_op->add_option("a", op_a, "element literal")->required();
    auto* op_b_opt = field_op->add_option("b", op_b, "second operand (element or integer)");
    field_cmd->require_subcommand(1);

    auto* ortho_cmd = app.add_subcommand("ortho", "orthogonality of vector tuples");
    ortho_cmd->fallthrough();
    std::string ortho_mode;
    std::vector<std::string> ortho_vecs;
    int ortho_depth = 2;
    ortho_cmd->add_option("mode", ortho_mode, "pair|set|wedge|falsify")->required();
    ortho_cmd->add_option("vectors", ortho_vecs, "vector literals like \"(1,1+x^-1)\"")
        ->required()
        ->expected(-1);
    ortho_cmd->add_option("--depth", ortho_depth, "digit depth for falsify")
        ->check(CLI::PositiveNumber);

    auto* extremal_cmd = app.add_subcommand("extremal", "solve one extremal query");
    extremal_cmd->fallthrough();
    std::string ex_quantity;
    long long ex_q = 2;
    int ex_n = 1, ex_s = 0, ex_k = 2, ex_l = 2;
    bool ex_witness = false;
    extremal_cmd->add_option("quantity", ex_quantity, "delta|omega|ind|ind-pro|theta|gamma")
        ->required();
    extremal_cmd->add_option("q", ex_q, "residue field size")->required();
    extremal_cmd->add_option("n", ex_n, "dimension")->required();
    extremal_cmd->add_option("k", ex_k, "tuple size")->required();
    extremal_cmd->add_option("l", ex_l, "independence threshold")->required();
    extremal_cmd->add_option("--s", ex_s, "subspace dimension (omega only)");
    extremal_cmd->add_flag("--witness", ex_witness, "print the witness and its hash");

    auto* table_cmd = app.add_subcommand("table", "tabulate a quantity over a k range");
    table_cmd->fallthrough();
    std::string tb_quantity, tb_k = "2";
    long long tb_q = 2;
    int tb_n = 2, tb_s = 1, tb_l = 2;
    table_cmd->add_option("quantity", tb_quantity, "delta|omega|ind|ind-pro|theta|gamma")
        ->required();
    table_cmd->add_option("--q", tb_q, "residue field size")->required();
    table_cmd->add_option("--n", tb_n, "dimension")->required();
    table_cmd->add_option("--l", tb_l, "independence threshold")->required();
    table_cmd->add_option("--k", tb_k, "k value or range A..B")->required();
    table_cmd->add_option("--s", tb_s, "subspace dimension (omega only)");

    auto* verify_cmd = app.add_subcommand("verify", "run the self-check registry");
    verify_cmd->fallthrough();
    std::string vf_profile = "default", vf_file, vf_check;
    bool vf_list = false;
    verify_cmd->add_option("--profile", vf_profile, "tiny|default|extended|name from file");
    verify_cmd->add_option("--profiles-file", vf_file, "key=value profile definitions");
    verify_cmd->add_option("--check", vf_check, "run a single check by id");
    verify_cmd->add_flag("--list", vf_list, "list check ids and what they assert");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (field_info->parsed()) return cmd_field_info(cfg);
        if (field_op->parsed())
            return cmd_field_op(op_name, op_a, op_b, op_b_opt->count() > 0, cfg);
        if (ortho_cmd->parsed()) return cmd_ortho(ortho_mode, ortho_vecs, ortho_depth, cfg);
        if (extremal_cmd->parsed())
            return cmd_extremal(ex_quantity, ex_q, ex_n, ex_s, ex_k, ex_l, cfg, ex_witness);
        if (table_cmd->parsed())
            return cmd_table(tb_quantity, tb_q, tb_n, tb_s, tb_k, tb_l, cfg);
        if (verify_cmd->parsed()) return cmd_verify(vf_profile, vf_file, vf_check, vf_list, cfg);
    } catch (const Fatal& f) {
        std::fprintf(stderr, "error (%s): %s\n", umo_errc_name(f.rc), f.message.c_str());
        return exit_for(f.rc);
    }
    return 64;
}
