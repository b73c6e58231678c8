#include "hilop/experiments.hpp"

#include "hilop/errors.hpp"
#include "hilop/extremal.hpp"
#include "hilop/measures.hpp"
#include "hilop/operators.hpp"
#include "hilop/params.hpp"
#include "hilop/piecewise_power.hpp"
#include "hilop/specfun.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace hilop::experiments {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string locate(const std::string &text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

struct Ctx {
    std::vector<std::string> errors;
    void fail(const std::string &path, const std::string &msg) {
        errors.push_back(path + ": " + msg);
    }
};

const ordered_json *get(const ordered_json &o, const char *key) {
    auto it = o.find(key);
    return it == o.end() ? nullptr : &*it;
}

void check_keys(Ctx &c, const ordered_json &o, const std::string &path,
                std::initializer_list<const char *> allowed) {
    for (auto it = o.begin(); it != o.end(); ++it) {
        bool known = false;
        for (const char *k : allowed)
            if (it.key() == k) known = true;
        // Every experiment accepts the common quadrature/output blocks.
        if (path.empty() && (it.key() == "quadrature" || it.key() == "output")) known = true;
        if (!known) c.fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

std::optional<double> need_number(Ctx &c, const ordered_json &o, const std::string &path,
                                  const char *key) {
    const ordered_json *v = get(o, key);
    const std::string full = path.empty() ? key : path + "." + key;
    if (!v) {
        c.fail(full, "required number missing");
        return std::nullopt;
    }
    if (!v->is_number()) {
        c.fail(full, "must be a number");
        return std::nullopt;
    }
    return v->get<double>();
}

double number_or(Ctx &c, const ordered_json &o, const std::string &path, const char *key,
                 double fallback) {
    const ordered_json *v = get(o, key);
    if (!v) return fallback;
    if (!v->is_number()) {
        c.fail(path.empty() ? key : path + "." + key, "must be a number");
        return fallback;
    }
    return v->get<double>();
}

bool flag_or(Ctx &c, const ordered_json &o, const std::string &path, const char *key,
             bool fallback) {
    const ordered_json *v = get(o, key);
    if (!v) return fallback;
    if (!v->is_boolean()) {
        c.fail(path.empty() ? key : path + "." + key, "must be a boolean");
        return fallback;
    }
    return v->get<bool>();
}

// Common optional override: {"quadrature": {"rel_tol": r}}.
double cfg_rel_tol(Ctx &c, const ordered_json &cfg, double fallback) {
    const ordered_json *q = get(cfg, "quadrature");
    if (!q) return fallback;
    if (!q->is_object()) {
        c.fail("quadrature", "must be an object");
        return fallback;
    }
    check_keys(c, *q, "quadrature", {"rel_tol"});
    const double r = number_or(c, *q, "quadrature", "rel_tol", fallback);
    if (!(r >= 1e-13 && r <= 1e-3)) {
        c.fail("quadrature.rel_tol", "must lie in [1e-13, 1e-3]");
        return fallback;
    }
    return r;
}

void validate_output(Ctx &c, const ordered_json &cfg) {
    const ordered_json *o = get(cfg, "output");
    if (!o) return;
    if (!o->is_object()) {
        c.fail("output", "must be an object");
        return;
    }
    check_keys(c, *o, "output", {"path", "format"});
    const ordered_json *p = get(*o, "path");
    if (!p || !p->is_string() || p->get<std::string>().empty())
        c.fail("output.path", "required nonempty string");
    if (const ordered_json *f = get(*o, "format")) {
        if (!f->is_string() ||
            (f->get<std::string>() != "json" && f->get<std::string>() != "csv"))
            c.fail("output.format", "must be \"json\" or \"csv\"");
    }
}

std::vector<double> need_number_array(Ctx &c, const ordered_json &o, const std::string &path,
                                      const char *key, std::size_t min_len = 1) {
    const ordered_json *v = get(o, key);
    const std::string full = path.empty() ? key : path + "." + key;
    if (!v) {
        c.fail(full, "required array missing");
        return {};
    }
    if (!v->is_array() || v->size() < min_len) {
        c.fail(full, "must be an array with at least " + std::to_string(min_len) + " entries");
        return {};
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
        const auto &e = (*v)[i];
        if (!e.is_number()) {
            c.fail(full + "[" + std::to_string(i) + "]", "must be a number");
            return {};
        }
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<std::uint64_t> need_index_array(Ctx &c, const ordered_json &o, const std::string &path,
                                            const char *key, std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (double d : need_number_array(c, o, path, key)) {
        if (!(d >= static_cast<double>(lo) && d <= static_cast<double>(hi)) ||
            d != std::floor(d)) {
            c.fail(std::string(key), "entries must be integers in [" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + "]");
            return {};
        }
        out.push_back(static_cast<std::uint64_t>(d));
    }
    return out;
}

std::optional<OperatorParams> parse_params(Ctx &c, const ordered_json &root, const char *key) {
    const ordered_json *o = get(root, key);
    if (!o || !o->is_object()) {
        c.fail(key, "required object missing");
        return std::nullopt;
    }
    check_keys(c, *o, key, {"p", "lambda", "theta1", "theta2", "alpha", "beta"});
    OperatorParams pr;
    bool ok = true;
    auto grab = [&](const char *k, double &slot) {
        if (auto v = need_number(c, *o, key, k))
            slot = *v;
        else
            ok = false;
    };
    grab("p", pr.p);
    grab("lambda", pr.lambda);
    grab("theta1", pr.theta1);
    grab("theta2", pr.theta2);
    grab("alpha", pr.alpha);
    grab("beta", pr.beta);
    if (!ok) return std::nullopt;
    try {
        pr.validate();
    } catch (const std::domain_error &e) {
        c.fail(key, e.what());
        return std::nullopt;
    }
    return pr;
}

std::optional<measures::UnitIntervalMeasure> parse_measure(Ctx &c, const ordered_json &root,
                                                           const char *key) {
    const ordered_json *o = get(root, key);
    if (!o || !o->is_object()) {
        c.fail(key, "required object missing");
        return std::nullopt;
    }
    check_keys(c, *o, key, {"atoms", "pieces"});
    std::vector<measures::Atom> atoms;
    std::vector<measures::DensityPiece> pieces;
    bool ok = true;
    auto rows = [&](const char *name, std::size_t width) {
        std::vector<std::vector<double>> out;
        const ordered_json *arr = get(*o, name);
        if (!arr) return out;
        const std::string full = std::string(key) + "." + name;
        if (!arr->is_array()) {
            c.fail(full, "must be an array");
            ok = false;
            return out;
        }
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const auto &row = (*arr)[i];
            if (!row.is_array() || row.size() != width) {
                c.fail(full + "[" + std::to_string(i) + "]",
                       "must be an array of " + std::to_string(width) + " numbers");
                ok = false;
                return out;
            }
            std::vector<double> vals;
            for (const auto &e : row) {
                if (!e.is_number()) {
                    c.fail(full + "[" + std::to_string(i) + "]", "entries must be numbers");
                    ok = false;
                    return out;
                }
                vals.push_back(e.get<double>());
            }
            out.push_back(std::move(vals));
        }
        return out;
    };
    for (const auto &r : rows("atoms", 2)) atoms.push_back({r[0], r[1]});
    for (const auto &r : rows("pieces", 4)) pieces.push_back({r[0], r[1], r[2], r[3]});
    if (!ok) return std::nullopt;
    try {
        return measures::UnitIntervalMeasure(std::move(atoms), std::move(pieces));
    } catch (const std::exception &e) {
        c.fail(key, e.what());
        return std::nullopt;
    }
}

std::optional<PiecewisePowerFunction> parse_function(Ctx &c, const ordered_json &arr,
                                                     const std::string &path) {
    if (!arr.is_array() || arr.empty()) {
        c.fail(path, "must be a nonempty array of [a, b, coeff, expo] pieces");
        return std::nullopt;
    }
    std::vector<PowerPiece> pieces;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto &row = arr[i];
        const std::string full = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 4) {
            c.fail(full, "must be [a, b, coeff, expo]");
            return std::nullopt;
        }
        double vals[4];
        for (int j = 0; j < 4; ++j) {
            const auto &e = row[j];
            if (e.is_string() && e.get<std::string>() == "inf" && j == 1) {
                vals[j] = inf;
            } else if (e.is_number()) {
                vals[j] = e.get<double>();
            } else {
                c.fail(full, "entries must be numbers (b may be \"inf\")");
                return std::nullopt;
            }
        }
        pieces.push_back({vals[0], vals[1], vals[2], vals[3]});
    }
    try {
        return PiecewisePowerFunction(std::move(pieces));
    } catch (const std::exception &e) {
        c.fail(path, e.what());
        return std::nullopt;
    }
}

struct Criteria {
    ordered_json arr = ordered_json::array();
    bool all = true;
    void add(const std::string &id, const std::string &description, double observed,
             double threshold, bool pass) {
        ordered_json e;
        e["id"] = id;
        e["description"] = description;
        e["observed"] = observed;
        e["threshold"] = threshold;
        e["pass"] = pass;
        arr.push_back(std::move(e));
        all = all && pass;
    }
};

struct Csv {
    std::string schema;
    std::string header;
    std::vector<std::string> rows;
    std::string text() const {
        if (header.empty()) return {};
        std::string out = "# hilop-csv " + schema + " v1\n" + header + "\n";
        for (const auto &r : rows) out += r + "\n";
        return out;
    }
};

// ---------------------------------------------------------------------------
// stirling-check

void validate_stirling(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "", {"experiment", "x_values"});
    for (double x : need_number_array(c, cfg, "", "x_values"))
        if (!(x > 0.0)) c.fail("x_values", "entries must be positive");
}

void run_stirling(const ordered_json &cfg, unsigned, ordered_json &results, Criteria &crit,
                  Csv &csv) {
    Ctx c;
    const auto xs = need_number_array(c, cfg, "", "x_values");
    csv.schema = "stirling-check";
    csv.header = "x,remainder,bound";
    ordered_json rows = ordered_json::array();
    double worst = 0.0;
    for (double x : xs) {
        const auto chk = specfun::stirling_remainder(x);
        worst = std::max(worst, std::abs(chk.remainder) / chk.bound);
        ordered_json r;
        r["x"] = x;
        r["remainder"] = chk.remainder;
        r["bound"] = chk.bound;
        rows.push_back(std::move(r));
        csv.rows.push_back(fmt(x) + "," + fmt(chk.remainder) + "," + fmt(chk.bound));
    }
    results["checks"] = std::move(rows);
    crit.add("stirling-envelope", "normalized factorial remainder stays inside exp(1/(12x))-1",
             worst, 1.0, worst <= 1.0);
}

// ---------------------------------------------------------------------------
// est-check

void validate_est(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "", {"experiment", "c_values", "w_values"});
    for (double v : need_number_array(c, cfg, "", "c_values"))
        if (!(v > 0.0)) c.fail("c_values", "entries must be positive");
    for (double w : need_number_array(c, cfg, "", "w_values"))
        if (!(w > 0.0 && w < 1.0)) c.fail("w_values", "entries must lie in (0, 1)");
}

void run_est(const ordered_json &cfg, unsigned, ordered_json &results, Criteria &crit, Csv &csv) {
    Ctx c;
    const auto cs = need_number_array(c, cfg, "", "c_values");
    const auto ws = need_number_array(c, cfg, "", "w_values");
    csv.schema = "est-check";
    csv.header = "c,w,ratio";
    ordered_json rows = ordered_json::array();
    double lo = inf, hi = 0.0, closed_err = 0.0;
    bool has_closed = false;
    for (double cv : cs) {
        for (double w : ws) {
            const double ratio = specfun::geometric_power_sum_ratio(cv, w);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            if (cv == 1.0 || cv == 2.0) {
                has_closed = true;
                closed_err = std::max(closed_err, std::abs(ratio - w * w));
            }
            ordered_json r;
            r["c"] = cv;
            r["w"] = w;
            r["ratio"] = ratio;
            rows.push_back(std::move(r));
            csv.rows.push_back(fmt(cv) + "," + fmt(w) + "," + fmt(ratio));
        }
    }
    results["ratios"] = std::move(rows);
    crit.add("est-bracket-low", "normalized power-geometric sums stay above 0.2", lo, 0.2,
             lo >= 0.2);
    crit.add("est-bracket-high", "normalized power-geometric sums stay below 5", hi, 5.0,
             hi <= 5.0);
    if (has_closed)
        crit.add("est-closed-form", "c = 1 and c = 2 collapse to w^2 exactly", closed_err, 1e-12,
                 closed_err <= 1e-12);
}

// ---------------------------------------------------------------------------
// hilbert-classic

void validate_hilbert(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "", {"experiment", "N_values"});
    const auto ns = need_index_array(c, cfg, "", "N_values", 1, 16384);
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) c.fail("N_values", "must be strictly increasing");
}

void run_hilbert(const ordered_json &cfg, unsigned, ordered_json &results, Criteria &crit,
                 Csv &csv) {
    Ctx c;
    const auto ns = need_index_array(c, cfg, "", "N_values", 1, 16384);
    csv.schema = "hilbert-classic";
    csv.header = "N,norm";
    const auto kernel = operators::hilbert_matrix_kernel();
    ordered_json rows = ordered_json::array();
    std::vector<double> norms;
    for (auto n : ns) {
        const double v = operators::p2_matrix_norm(kernel, static_cast<std::size_t>(n));
        norms.push_back(v);
        ordered_json r;
        r["N"] = n;
        r["norm"] = v;
        rows.push_back(std::move(r));
        csv.rows.push_back(std::to_string(n) + "," + fmt(v));
    }
    results["norms"] = std::move(rows);
    double min_step = inf;
    for (std::size_t i = 1; i < norms.size(); ++i)
        min_step = std::min(min_step, norms[i] - norms[i - 1]);
    if (norms.size() > 1)
        crit.add("matrix-monotone", "truncated norms strictly increase with N", min_step, 0.0,
                 min_step > 0.0);
    const double top = norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
    crit.add("matrix-below-limit", "every truncation stays below pi", top, std::numbers::pi,
             top < std::numbers::pi);
}

// ---------------------------------------------------------------------------
// hardy-question

void validate_hardy(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "", {"experiment", "N", "functions"});
    const double N = number_or(c, cfg, "", "N", 0.0);
    if (!(N >= 16 && N <= 100000 && N == std::floor(N)))
        c.fail("N", "must be an integer in [16, 100000]");
    const ordered_json *fs = get(cfg, "functions");
    if (!fs || !fs->is_array() || fs->empty()) {
        c.fail("functions", "required array of piecewise-power literals");
        return;
    }
    for (std::size_t i = 0; i < fs->size(); ++i) {
        auto f = parse_function(c, (*fs)[i], "functions[" + std::to_string(i) + "]");
        if (f) {
            try {
                f->norm_lp(2.0);
            } catch (const std::exception &e) {
                c.fail("functions[" + std::to_string(i) + "]", e.what());
            }
        }
    }
}

void run_hardy(const ordered_json &cfg, unsigned, ordered_json &results, Criteria &crit,
               Csv &csv) {
    Ctx c;
    const auto N = static_cast<std::size_t>(number_or(c, cfg, "", "N", 0.0));
    const ordered_json &fs = *get(cfg, "functions");
    csv.schema = "hardy-question";
    csv.header = "index,f_norm,window_norm,bound";
    ordered_json rows = ordered_json::array();
    double worst = 0.0;
    const double tol = cfg_rel_tol(c, cfg, 1e-9);
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto f = *parse_function(c, fs[i], "functions");
        const double fnorm = f.norm_lp(2.0);
        const auto window = extremal::hardy_coefficient_sequence(f, N, tol);
        const double wnorm = operators::lp_norm_completed(window, 2.0).value;
        const double bound = std::numbers::pi * fnorm;
        worst = std::max(worst, wnorm / bound);
        ordered_json r;
        r["index"] = i;
        r["f_norm"] = fnorm;
        r["window_norm"] = wnorm;
        r["bound"] = bound;
        rows.push_back(std::move(r));
        csv.rows.push_back(std::to_string(i) + "," + fmt(fnorm) + "," + fmt(wnorm) + "," +
                           fmt(bound));
    }
    results["functions"] = std::move(rows);
    crit.add("window-bound", "averaged coefficient windows stay below pi times the source norm",
             worst, 1.0, worst <= 1.0);
}

// ---------------------------------------------------------------------------
// carleson-test

void validate_carleson(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "",
               {"experiment", "measure", "lambda", "s", "x", "n_max", "z_points",
                "expect_constant_ratio"});
    parse_measure(c, cfg, "measure");
    if (!(number_or(c, cfg, "", "lambda", 1.0) > 0.0)) c.fail("lambda", "must be positive");
    if (!(number_or(c, cfg, "", "s", 1.0) > 0.0)) c.fail("s", "must be positive");
    if (!(number_or(c, cfg, "", "x", 0.0) >= 0.0)) c.fail("x", "must be nonnegative");
    const double n_max = number_or(c, cfg, "", "n_max", 10000.0);
    if (!(n_max >= 100 && n_max <= 1e6 && n_max == std::floor(n_max)))
        c.fail("n_max", "must be an integer in [100, 1000000]");
    for (double z : need_number_array(c, cfg, "", "z_points"))
        if (!(z > 1.0)) c.fail("z_points", "entries must exceed 1 for the parts identity");
}

void run_carleson(const ordered_json &cfg, unsigned, ordered_json &results, Criteria &crit,
                  Csv &csv) {
    Ctx c;
    const auto mu = *parse_measure(c, cfg, "measure");
    const double lambda = number_or(c, cfg, "", "lambda", 1.0);
    const double s = number_or(c, cfg, "", "s", 1.0);
    const double x = number_or(c, cfg, "", "x", 0.0);
    const auto n_max = static_cast<std::uint64_t>(number_or(c, cfg, "", "n_max", 10000.0));
    const auto zs = need_number_array(c, cfg, "", "z_points");
    const bool expect_const = flag_or(c, cfg, "", "expect_constant_ratio", false);

    csv.schema = "carleson-test";
    csv.header = "n,ratio";
    const auto decay = measures::moment_decay_profile(mu, lambda, s, x, n_max);
    ordered_json decay_rows = ordered_json::array();
    double rmin = inf, rmax = 0.0;
    for (const auto &d : decay) {
        rmin = std::min(rmin, d.ratio);
        rmax = std::max(rmax, d.ratio);
        ordered_json r;
        r["n"] = d.n;
        r["ratio"] = d.ratio;
        decay_rows.push_back(std::move(r));
        csv.rows.push_back(std::to_string(d.n) + "," + fmt(d.ratio));
    }
    results["moment_ratios"] = std::move(decay_rows);

    ordered_json parts_rows = ordered_json::array();
    double worst_rel = 0.0;
    const double tol = cfg_rel_tol(c, cfg, 1e-10);
    for (double z : zs) {
        const double direct = measures::moment(mu, z, lambda, tol);
        const double parts = measures::moment_via_parts(mu, z, lambda, tol);
        const double rel = std::abs(direct - parts) / std::max(std::abs(direct), 1e-300);
        worst_rel = std::max(worst_rel, rel);
        ordered_json r;
        r["z"] = z;
        r["moment"] = direct;
        r["via_parts"] = parts;
        r["rel_diff"] = rel;
        parts_rows.push_back(std::move(r));
    }
    results["parts_agreement"] = std::move(parts_rows);

    crit.add("moment-parts-agree", "direct and integrated-by-parts moments agree", worst_rel,
             1e-8, worst_rel <= 1e-8);
    if (expect_const)
        crit.add("constant-ratio", "moment ratios are identically 1 for this measure",
                 std::max(rmax - 1.0, 1.0 - rmin), 1e-8,
                 std::max(rmax - 1.0, 1.0 - rmin) <= 1e-8);
    if (s > std::abs(lambda - 1.0)) {
        const auto eq = measures::carleson_shift_equivalence_check(mu, s, lambda - 1.0);
        results["shift_equivalence"] = ordered_json{{"base_constant", eq.base.constant},
                                                    {"shifted_constant", eq.shifted.constant},
                                                    {"verdicts_agree", eq.verdicts_agree}};
        crit.add("shift-equivalence", "density shift preserves the boundedness verdict",
                 eq.verdicts_agree ? 1.0 : 0.0, 1.0, eq.verdicts_agree);
    }
}

// ---------------------------------------------------------------------------
// vanishing-test

void validate_vanishing(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "", {"experiment", "measure", "lambda", "s", "x", "n_max"});
    parse_measure(c, cfg, "measure");
    if (!(number_or(c, cfg, "", "lambda", 1.0) > 0.0)) c.fail("lambda", "must be positive");
    if (!(number_or(c, cfg, "", "s", 1.0) > 0.0)) c.fail("s", "must be positive");
    if (!(number_or(c, cfg, "", "x", 0.0) >= 0.0)) c.fail("x", "must be nonnegative");
    const double n_max = number_or(c, cfg, "", "n_max", 10000.0);
    if (!(n_max >= 1000 && n_max <= 1e6 && n_max == std::floor(n_max)))
        c.fail("n_max", "must be an integer in [1000, 1000000]");
}

void run_vanishing(const ordered_json &cfg, unsigned, ordered_json &results, Criteria &crit,
                   Csv &csv) {
    Ctx c;
    const auto mu = *parse_measure(c, cfg, "measure");
    const double lambda = number_or(c, cfg, "", "lambda", 1.0);
    const double s = number_or(c, cfg, "", "s", 1.0);
    const double x = number_or(c, cfg, "", "x", 0.0);
    const auto n_max = static_cast<std::uint64_t>(number_or(c, cfg, "", "n_max", 10000.0));

    csv.schema = "vanishing-test";
    csv.header = "n,ratio";
    const auto decay = measures::moment_decay_profile(mu, lambda, s, x, n_max);
    ordered_json rows = ordered_json::array();
    std::vector<double> anchors; // ratios at powers of ten from 100 up
    double rmax = 0.0;
    for (const auto &d : decay) {
        rmax = std::max(rmax, d.ratio);
        bool pow10 = d.n >= 100;
        for (std::uint64_t t = d.n; pow10 && t > 1; t /= 10)
            if (t % 10 != 0) pow10 = false;
        if (pow10) anchors.push_back(d.ratio);
        ordered_json r;
        r["n"] = d.n;
        r["ratio"] = d.ratio;
        rows.push_back(std::move(r));
        csv.rows.push_back(std::to_string(d.n) + "," + fmt(d.ratio));
    }
    results["moment_ratios"] = std::move(rows);

    double min_drop = inf;
    for (std::size_t i = 1; i < anchors.size(); ++i)
        min_drop = std::min(min_drop, anchors[i - 1] - anchors[i]);
    crit.add("anchors-decreasing", "decade-anchor ratios strictly decrease", min_drop, 0.0,
             anchors.size() >= 2 && min_drop > 0.0);
    const double share = anchors.empty() || anchors.front() == 0.0
                             ? 0.0
                             : anchors.back() / anchors.front();
    crit.add("final-share", "last decade anchor falls below 5% of the first", share, 0.05,
             share < 0.05);

    const auto nu = measures::shift_density(mu, lambda - 1.0);
    const auto profile = measures::carleson_profile(nu, s);
    results["tail_profile"] = ordered_json{{"constant", profile.constant},
                                           {"vanishing", profile.vanishing_verdict}};
    const double desk = 8.0 * (profile.constant + nu.total_mass());
    crit.add("desk-bound", "moment ratios stay below 8 (constant + mass) of the shifted tail",
             rmax, desk, rmax <= desk);
    crit.add("profile-consistency",
             "vanishing tail profile comes with vanishing moment ratios",
             profile.vanishing_verdict ? 1.0 : 0.0, 1.0,
             profile.vanishing_verdict == (share < 0.05));
}

// ---------------------------------------------------------------------------
// norm-verify

const char *const default_law_functions =
    R"([[[0,1,1,0]],
        [[0,1,1,0.25]],
        [[1,"inf",1,-0.8]],
        [[0,1,2,0],[1,4,1,-1]],
        [[0.5,2,1,0.5]]])";

void validate_norm_verify(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "",
               {"experiment", "params", "eps_ladder", "N", "floor", "w1_points", "w2_points",
                "law_functions"});
    const auto pr = parse_params(c, cfg, "params");
    if (pr && !pr->at_critical_lambda(1e-9))
        c.fail("params.lambda", "norm-verify runs at lambda = lambda_star = " +
                                    std::to_string(pr->lambda_star()));
    const auto ladder = need_number_array(c, cfg, "", "eps_ladder");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0)) c.fail("eps_ladder", "entries must be positive");
        if (i > 0 && ladder[i] >= ladder[i - 1])
            c.fail("eps_ladder", "must be strictly decreasing");
        if (pr && !(ladder[i] < pr->p - 1.0 - pr->alpha))
            c.fail("eps_ladder", "entries must stay below p - 1 - alpha");
    }
    const double N = number_or(c, cfg, "", "N", 10000.0);
    if (!(N >= 1000 && N <= 200000 && N == std::floor(N)))
        c.fail("N", "must be an integer in [1000, 200000]");
    const double floor = number_or(c, cfg, "", "floor", 0.95);
    if (!(floor > 0.0 && floor < 1.0)) c.fail("floor", "must lie in (0, 1)");
    if (const ordered_json *w1 = get(cfg, "w1_points")) {
        (void)w1;
        need_index_array(c, cfg, "", "w1_points", 1, 1000000);
    }
    if (get(cfg, "w2_points"))
        for (double v : need_number_array(c, cfg, "", "w2_points"))
            if (!(v > 0.0)) c.fail("w2_points", "entries must be positive");
    if (const ordered_json *fs = get(cfg, "law_functions")) {
        if (!fs->is_array() || fs->empty()) {
            c.fail("law_functions", "must be a nonempty array of piecewise-power literals");
        } else {
            for (std::size_t i = 0; i < fs->size(); ++i)
                parse_function(c, (*fs)[i], "law_functions[" + std::to_string(i) + "]");
        }
    }
}

void run_norm_verify(const ordered_json &cfg, unsigned jobs, ordered_json &results,
                     Criteria &crit, Csv &csv) {
    Ctx c;
    const auto pr = *parse_params(c, cfg, "params");
    const auto ladder = need_number_array(c, cfg, "", "eps_ladder");
    const auto N = static_cast<std::uint64_t>(number_or(c, cfg, "", "N", 10000.0));
    const double floor = number_or(c, cfg, "", "floor", 0.95);
    std::vector<std::uint64_t> w1_points{1, 10, 100};
    if (get(cfg, "w1_points")) w1_points = need_index_array(c, cfg, "", "w1_points", 1, 1000000);
    std::vector<double> w2_points{0.1, 1.0, 100.0};
    if (get(cfg, "w2_points")) w2_points = need_number_array(c, cfg, "", "w2_points");
    ordered_json law_fns = ordered_json::parse(default_law_functions);
    if (const ordered_json *fs = get(cfg, "law_functions")) law_fns = *fs;
    const double tol = cfg_rel_tol(c, cfg, 1e-9);

    const double sharp = operators::sharp_norm(pr);
    const double beta_factor =
        specfun::beta((1.0 + pr.beta) / pr.p, (pr.p - 1.0 - pr.alpha) / pr.p);
    results["sharp_norm"] = sharp;
    results["schur_upper_bound"] = sharp;

    // Row weights: constant in n, equal to beta_factor / theta1.
    const double w1_target = beta_factor / pr.theta1;
    ordered_json w1_rows = ordered_json::array();
    double w1_worst = 0.0;
    for (auto n : w1_points) {
        const double v = operators::schur_weight_w1(pr, n, tol);
        const double rel = std::abs(v - w1_target) / w1_target;
        w1_worst = std::max(w1_worst, rel);
        ordered_json r;
        r["n"] = n;
        r["w1"] = v;
        r["rel_err"] = rel;
        w1_rows.push_back(std::move(r));
    }
    results["w1"] = std::move(w1_rows);
    crit.add("w1-constancy", "row weight matches its closed form at every n", w1_worst, 1e-6,
             w1_worst <= 1e-6);

    const double w2_bound = beta_factor / pr.theta2;
    ordered_json w2_rows = ordered_json::array();
    double w2_worst = 0.0;
    for (double x : w2_points) {
        const auto v = operators::schur_weight_w2(pr, x);
        const double ratio = v.value / w2_bound;
        w2_worst = std::max(w2_worst, ratio);
        ordered_json r;
        r["x"] = x;
        r["w2"] = v.value;
        r["bound_ratio"] = ratio;
        w2_rows.push_back(std::move(r));
    }
    results["w2"] = std::move(w2_rows);
    crit.add("w2-bound", "column weight stays below its closed bound", w2_worst, 1.0 + 1e-6,
             w2_worst <= 1.0 + 1e-6);

    csv.schema = "norm-verify";
    csv.header = "eps,lower_bound,tail_fraction";
    ordered_json ray_rows = ordered_json::array();
    std::vector<double> values;
    for (double eps : ladder) {
        const auto rb = extremal::rayleigh_lower_bound(pr, eps, N, tol, jobs);
        values.push_back(rb.value);
        ordered_json r;
        r["eps"] = eps;
        r["lower_bound"] = rb.value;
        r["sigma_fitted"] = rb.sigma_fitted;
        r["sigma_analytic"] = rb.sigma_analytic;
        r["tail_fraction"] = rb.tail_fraction;
        ray_rows.push_back(std::move(r));
        csv.rows.push_back(fmt(eps) + "," + fmt(rb.value) + "," + fmt(rb.tail_fraction));
    }
    results["rayleigh"] = std::move(ray_rows);

    double min_step = inf;
    for (std::size_t i = 1; i < values.size(); ++i)
        min_step = std::min(min_step, values[i] - values[i - 1]);
    if (values.size() > 1)
        crit.add("rayleigh-ladder", "lower bounds increase as eps decreases", min_step, 0.0,
                 min_step > 0.0);
    crit.add("rayleigh-floor", "final lower bound clears the configured share of the sharp norm",
             values.empty() ? 0.0 : values.back() / sharp, floor,
             !values.empty() && values.back() >= floor * sharp);
    const double cap = *std::max_element(values.begin(), values.end()) / sharp;
    crit.add("rayleigh-cap", "no lower bound exceeds the sharp norm", cap, 1.0 + 1e-3,
             cap <= 1.0 + 1e-3);

    ordered_json law_rows = ordered_json::array();
    double law_worst = 0.0;
    for (std::size_t i = 0; i < law_fns.size(); ++i) {
        const auto f = *parse_function(c, law_fns[i], "law_functions");
        const double fnorm = f.norm_lp(pr.p);
        auto window = operators::apply_parametric_window(pr, f, 2000, tol, jobs);
        window.tail = operators::fit_power_tail(window.values);
        const auto norm = operators::lp_norm_completed(window, pr.p);
        const double ratio = norm.value / (sharp * fnorm);
        law_worst = std::max(law_worst, ratio);
        ordered_json r;
        r["index"] = i;
        r["f_norm"] = fnorm;
        r["image_norm"] = norm.value;
        r["ratio"] = ratio;
        law_rows.push_back(std::move(r));
    }
    results["upper_law"] = std::move(law_rows);
    crit.add("upper-law", "image norms stay below the sharp multiple of the source norm",
             law_worst, 1.0 + 1e-4, law_worst <= 1.0 + 1e-4);
}

// ---------------------------------------------------------------------------
// threshold-scan

void validate_threshold(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "", {"experiment", "params", "eps", "ladder"});
    const auto pr = parse_params(c, cfg, "params");
    const double eps = number_or(c, cfg, "", "eps", 0.0);
    if (!(eps > 0.0)) c.fail("eps", "must be positive");
    if (pr) {
        if (pr->lambda > pr->lambda_star() + 1e-9)
            c.fail("params.lambda", "must not exceed lambda_star");
        if (pr->lambda < pr->lambda_star() - 1e-12) {
            const double predicted =
                pr->p * pr->theta2 * (pr->lambda_star() - pr->lambda) - pr->theta2 * eps;
            if (!(predicted > 0.0))
                c.fail("eps", "too large: the predicted growth exponent is not positive");
        }
        if (eps > 0.0 && !(eps < pr->p - 1.0 - pr->alpha))
            c.fail("eps", "must stay below p - 1 - alpha");
    }
    const auto ladder = need_index_array(c, cfg, "", "ladder", 10, 1000000);
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1]) c.fail("ladder", "must be strictly increasing");
    if (ladder.size() < 2) c.fail("ladder", "needs at least 2 points");
}

void run_threshold(const ordered_json &cfg, unsigned jobs, ordered_json &results, Criteria &crit,
                   Csv &csv) {
    Ctx c;
    const auto pr = *parse_params(c, cfg, "params");
    const double eps = number_or(c, cfg, "", "eps", 0.0);
    const auto ladder = need_index_array(c, cfg, "", "ladder", 10, 1000000);

    csv.schema = "threshold-scan";
    csv.header = "N,S_N,log_slope_so_far";
    const double tol = cfg_rel_tol(c, cfg, 1e-9);
    if (pr.lambda < pr.lambda_star() - 1e-12) {
        const auto fit = extremal::divergence_exponent_fit(pr, eps, ladder, tol, jobs);
        ordered_json rows = ordered_json::array();
        for (const auto &pt : fit.points) {
            ordered_json r;
            r["N"] = pt.N;
            r["S_N"] = pt.S_N;
            r["slope"] = pt.slope_so_far;
            rows.push_back(std::move(r));
            csv.rows.push_back(std::to_string(pt.N) + "," + fmt(pt.S_N) + "," +
                               fmt(pt.slope_so_far));
        }
        results["scan"] = std::move(rows);
        results["fitted_delta"] = fit.fitted_delta;
        results["predicted_delta"] = fit.predicted_delta;
        const double rel = std::abs(fit.fitted_delta - fit.predicted_delta) / fit.predicted_delta;
        crit.add("exponent-fit", "fitted growth exponent matches p theta2 (lambda*-lambda) - theta2 eps",
                 rel, 0.1, rel <= 0.1);
        return;
    }

    // At the critical index the partial power sums stay below the sharp bound.
    const auto fam =
        extremal::build_family(extremal::FamilyKind::power_tail, eps, pr.p, pr.theta1);
    const auto window =
        operators::apply_parametric_window(pr, fam.function, ladder.back(), tol, jobs);
    const double bound = std::pow(operators::sharp_norm(pr) * fam.exact_norm, pr.p);
    ordered_json rows = ordered_json::array();
    double running = 0.0, prev_s = 0.0;
    std::uint64_t prev_n = 0;
    std::size_t next = 0;
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= ladder.back(); ++n) {
        running += std::pow(window.values[n - 1], pr.p);
        if (next < ladder.size() && n == ladder[next]) {
            const double slope =
                prev_n == 0 ? 0.0
                            : (std::log(running) - std::log(prev_s)) /
                                  (std::log(static_cast<double>(n)) -
                                   std::log(static_cast<double>(prev_n)));
            ordered_json r;
            r["N"] = n;
            r["S_N"] = running;
            r["slope"] = slope;
            rows.push_back(std::move(r));
            csv.rows.push_back(std::to_string(n) + "," + fmt(running) + "," + fmt(slope));
            worst = std::max(worst, running / bound);
            prev_s = running;
            prev_n = n;
            ++next;
        }
    }
    results["scan"] = std::move(rows);
    results["power_sum_bound"] = bound;
    crit.add("partial-sums-bounded", "partial power sums stay below the sharp-norm bound", worst,
             1.0, worst <= 1.0);
}

// ---------------------------------------------------------------------------
// duality-scan

void validate_duality(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "",
               {"experiment", "params", "measure", "k_max", "expect_growth", "pairing_ws"});
    const auto pr = parse_params(c, cfg, "params");
    const auto mu = parse_measure(c, cfg, "measure");
    if (pr && mu) {
        try {
            measures::shift_density(*mu, pr->lambda - 1.0);
        } catch (const std::exception &e) {
            c.fail("measure", e.what());
        }
    }
    const double k_max = number_or(c, cfg, "", "k_max", 10.0);
    if (!(k_max >= 5 && k_max <= 40 && k_max == std::floor(k_max)))
        c.fail("k_max", "must be an integer in [5, 40]");
    if (get(cfg, "pairing_ws"))
        for (double w : need_number_array(c, cfg, "", "pairing_ws"))
            if (!(w > 0.0 && w < 1.0)) c.fail("pairing_ws", "entries must lie in (0, 1)");
    if (flag_or(c, cfg, "", "expect_growth", false) && k_max < 10)
        c.fail("k_max", "growth check needs k_max >= 10");
}

void run_duality(const ordered_json &cfg, unsigned, ordered_json &results, Criteria &crit,
                 Csv &csv) {
    Ctx c;
    const auto pr = *parse_params(c, cfg, "params");
    const auto mu = *parse_measure(c, cfg, "measure");
    const int k_max = static_cast<int>(number_or(c, cfg, "", "k_max", 10.0));
    const bool expect_growth = flag_or(c, cfg, "", "expect_growth", false);

    const auto nu = measures::shift_density(mu, pr.lambda - 1.0);
    csv.schema = "duality-scan";
    csv.header = "k,w,surrogate";
    ordered_json rows = ordered_json::array();
    std::vector<double> surr;
    double step = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        const double w = 1.0 - step;
        step *= 0.5;
        const double v = nu.tail(w) / std::pow(1.0 - w * w, pr.lambda_star());
        surr.push_back(v);
        ordered_json r;
        r["k"] = k;
        r["w"] = w;
        r["surrogate"] = v;
        rows.push_back(std::move(r));
        csv.rows.push_back(std::to_string(k) + "," + fmt(w) + "," + fmt(v));
    }
    results["surrogates"] = std::move(rows);

    if (expect_growth) {
        const double ratio = surr[1] > 0.0 ? surr[std::min(10, k_max)] / surr[1] : inf;
        crit.add("surrogate-growth", "tail surrogate grows past 10x its w = 0.5 value", ratio,
                 10.0, ratio > 10.0);
    } else {
        const double worst = *std::max_element(surr.begin(), surr.end());
        crit.add("surrogate-bounded", "tail surrogate never exceeds its w = 0 value", worst,
                 surr[0] * (1.0 + 1e-12), worst <= surr[0] * (1.0 + 1e-12));
    }

    if (get(cfg, "pairing_ws")) {
        ordered_json prow = ordered_json::array();
        for (double w : need_number_array(c, cfg, "", "pairing_ws")) {
            const auto d = extremal::duality_pairing(pr, mu, w);
            ordered_json r;
            r["w"] = w;
            r["pairing"] = d.pairing;
            r["surrogate"] = d.surrogate;
            prow.push_back(std::move(r));
        }
        results["pairings"] = std::move(prow);
    }
}

// ---------------------------------------------------------------------------
// boundary-gamma

void validate_boundary(Ctx &c, const ordered_json &cfg) {
    check_keys(c, cfg, "", {"experiment", "p", "gammas", "eps_ladder"});
    const double p = number_or(c, cfg, "", "p", 0.0);
    if (!(p > 1.0)) c.fail("p", "must exceed 1");
    const auto gammas = need_number_array(c, cfg, "", "gammas");
    for (double g : gammas)
        if (p > 1.0 && g > -1.0 && g < p - 1.0)
            c.fail("gammas", "value " + fmt(g) + " lies in the bounded regime (-1, p-1)");
    const auto ladder = need_number_array(c, cfg, "", "eps_ladder", 2);
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0)) c.fail("eps_ladder", "entries must be positive");
        if (i > 0 && ladder[i] >= ladder[i - 1])
            c.fail("eps_ladder", "must be strictly decreasing");
    }
}

void run_boundary(const ordered_json &cfg, unsigned, ordered_json &results, Criteria &crit,
                  Csv &csv) {
    Ctx c;
    const double p = number_or(c, cfg, "", "p", 0.0);
    const auto gammas = need_number_array(c, cfg, "", "gammas");
    const auto ladder = need_number_array(c, cfg, "", "eps_ladder", 2);

    csv.schema = "boundary-gamma";
    csv.header = "gamma,eps,value";
    ordered_json rows = ordered_json::array();
    for (double g : gammas) {
        const auto blow = extremal::boundary_gamma_blowup(p, g, ladder);
        ordered_json r;
        r["gamma"] = g;
        r["divergent"] = blow.divergent;
        const std::string tag = "(gamma=" + fmt(g) + ")";
        if (blow.divergent) {
            crit.add("divergent-verdict" + tag, "integral diverges outright below -1", 1.0, 1.0,
                     true);
        } else {
            ordered_json vals = ordered_json::array();
            double min_step = inf;
            for (std::size_t i = 0; i < blow.values.size(); ++i) {
                const auto &[eps, v] = blow.values[i];
                ordered_json e;
                e["eps"] = eps;
                e["value"] = v;
                vals.push_back(std::move(e));
                csv.rows.push_back(fmt(g) + "," + fmt(eps) + "," + fmt(v));
                if (i > 0) min_step = std::min(min_step, v - blow.values[i - 1].second);
            }
            r["values"] = std::move(vals);
            const double growth = blow.values.back().second / blow.values.front().second;
            crit.add("blowup-increasing" + tag, "certified bounds increase along the ladder",
                     min_step, 0.0, min_step > 0.0);
            crit.add("blowup-ratio" + tag, "last bound exceeds 10x the first", growth, 10.0,
                     growth > 10.0);
        }
        rows.push_back(std::move(r));
    }
    results["gammas"] = std::move(rows);
}

// ---------------------------------------------------------------------------

struct Entry {
    const char *name;
    const char *description;
    void (*validate)(Ctx &, const ordered_json &);
    void (*run)(const ordered_json &, unsigned, ordered_json &, Criteria &, Csv &);
};

constexpr Entry entries[] = {
    {"stirling-check", "factorial remainder against its exponential envelope",
     validate_stirling, run_stirling},
    {"est-check", "normalized power-geometric sums: brackets and closed forms", validate_est,
     run_est},
    {"hilbert-classic", "truncated classical matrix norms approaching pi", validate_hilbert,
     run_hilbert},
    {"hardy-question", "averaged coefficient windows against the pi bound", validate_hardy,
     run_hardy},
    {"carleson-test", "measure moments: decay ratios and the parts identity", validate_carleson,
     run_carleson},
    {"vanishing-test", "vanishing tail profiles and moment decay anchors", validate_vanishing,
     run_vanishing},
    {"norm-verify", "sharp norm bracket: weights, lower-bound ladder, upper law",
     validate_norm_verify, run_norm_verify},
    {"threshold-scan", "growth exponent below the critical index, boundedness at it",
     validate_threshold, run_threshold},
    {"duality-scan", "tail surrogate of the pairing across the dyadic w-grid", validate_duality,
     run_duality},
    {"boundary-gamma", "certified blow-up ladders at the boundary weight exponents",
     validate_boundary, run_boundary},
};

const Entry *find_entry(const std::string &name) {
    for (const Entry &e : entries)
        if (name == e.name) return &e;
    return nullptr;
}

void validate_any(Ctx &c, const ordered_json &cfg) {
    if (!cfg.is_object()) {
        c.fail("(root)", "config must be a JSON object");
        return;
    }
    const ordered_json *name = get(cfg, "experiment");
    if (!name || !name->is_string()) {
        c.fail("experiment", "required string missing");
        return;
    }
    const Entry *e = find_entry(name->get<std::string>());
    if (!e) {
        std::string known;
        for (const Entry &k : entries) known += std::string(known.empty() ? "" : ", ") + k.name;
        c.fail("experiment", "unknown experiment; known: " + known);
        return;
    }
    e->validate(c, cfg);
    cfg_rel_tol(c, cfg, 1e-9);
    validate_output(c, cfg);
}

} // namespace

ValidationResult validate_config_text(const std::string &text) {
    ValidationResult out;
    ordered_json cfg;
    try {
        cfg = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        out.errors.push_back(locate(text, e.byte) + ": " + e.what());
        return out;
    }
    Ctx c;
    validate_any(c, cfg);
    out.errors = std::move(c.errors);
    out.ok = out.errors.empty();
    return out;
}

RunResult run_config_text(const std::string &text, unsigned jobs) {
    const ValidationResult v = validate_config_text(text);
    if (!v.ok) {
        std::string joined;
        for (const auto &e : v.errors) joined += (joined.empty() ? "" : "\n") + e;
        throw std::invalid_argument(joined);
    }
    const ordered_json cfg = ordered_json::parse(text);
    const Entry *e = find_entry(cfg["experiment"].get<std::string>());

    const auto start = std::chrono::steady_clock::now();
    ordered_json results;
    Criteria crit;
    Csv csv;
    e->run(cfg, jobs, results, crit, csv);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ordered_json report;
    report["tool"] = "hilop";
    report["version"] = "1.0.0";
    report["experiment"] = e->name;
    report["config"] = cfg;
    report["results"] = std::move(results);
    report["criteria"] = std::move(crit.arr);
    report["passed"] = crit.all;
    report["wall_clock_seconds"] = secs;

    RunResult out;
    out.report_json = report.dump(2) + "\n";
    out.csv = csv.text();
    out.passed = crit.all;
    if (const ordered_json *dest = cfg.find("output") != cfg.end() ? &cfg["output"] : nullptr) {
        out.output_path = (*dest)["path"].get<std::string>();
        out.output_format = dest->contains("format") ? (*dest)["format"].get<std::string>()
                                                     : std::string("json");
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> experiment_catalog() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Entry &e : entries) out.emplace_back(e.name, e.description);
    return out;
}

} // namespace hilop::experiments
