// critex — command-line frontend for the critical-exponent and finite-energy
// verification toolkit.  Subcommands: exponent, verify, scan, shoot.
//
// Exit codes: 0 = all checks pass, 1 = a check failed, 2 = usage/validation
// error, 3 = numerical non-convergence.

#include "CLI11.hpp"
#include "json.hpp"

#include "critex/families.hpp"
#include "critex/identities.hpp"
#include "critex/potentials.hpp"
#include "critex/profiles.hpp"
#include "critex/quadrature.hpp"
#include "critex/radial_ops.hpp"
#include "critex/rational.hpp"
#include "critex/shooting.hpp"
#include "critex/version.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using nlohmann::json;
using namespace critex;
using K = families::family_kind;

namespace {

// --------------------------------------------------------------------------
// small helpers
// --------------------------------------------------------------------------

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// integers as JSON integers, everything else as double
json num_json(const rat& v) {
    const auto num = boost::multiprecision::numerator(v);
    const auto den = boost::multiprecision::denominator(v);
    if (den == 1 && num >= std::numeric_limits<long long>::min() &&
        num <= std::numeric_limits<long long>::max())
        return num.convert_to<long long>();
    return rat_to_double(v);
}

void put_exact(json& dst, const std::string& name, const rat& v) {
    dst[name] = num_json(v);
    dst[name + "_exact"] = rat_to_string(v);
}

double env_quad_tol() {
    quadrature::quadrature_spec def;
    if (const char* e = std::getenv("CRITEX_QUAD_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(e, &end);
        if (end == e || *end != '\0' || !(v > 0.0) || !(v < 1.0))
            throw std::domain_error("CRITEX_QUAD_TOL must be a number in (0, 1)");
        return v;
    }
    return def.rel_tol;
}

quadrature::quadrature_spec base_spec() {
    quadrature::quadrature_spec s;
    s.rel_tol = env_quad_tol();
    return s;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

// --------------------------------------------------------------------------
// family flags shared across subcommands
// --------------------------------------------------------------------------

struct family_flags {
    std::string family;
    int n = 3, l = 1, k = 2;
    std::string t = "0", alpha = "0", beta1 = "0", beta2 = "0";
    std::string p = "2", a = "0", b = "0";
};

void add_family_flags(CLI::App* cmd, family_flags& ff, bool require_family) {
    auto* fam = cmd->add_option("--family", ff.family, "equation family name");
    if (require_family) fam->required();
    cmd->add_option("-n,--n", ff.n, "dimension");
    cmd->add_option("-t,--t", ff.t, "singular weight exponent t (rational)");
    cmd->add_option("--alpha", ff.alpha, "kernel order alpha (rational)");
    cmd->add_option("--beta1", ff.beta1, "first weight exponent (rational)");
    cmd->add_option("--beta2", ff.beta2, "second weight exponent (rational)");
    cmd->add_option("-l,--l", ff.l, "derivative order of the system");
    cmd->add_option("-p,--p", ff.p, "p-laplace exponent (rational)");
    cmd->add_option("-a,--a", ff.a, "gradient weight exponent (rational)");
    cmd->add_option("-b,--b", ff.b, "forcing weight exponent (rational)");
    cmd->add_option("-k,--k", ff.k, "hessian order");
}

K kind_from_flag(const std::string& name) {
    const auto k = families::family_from_name(name);
    if (!k) throw std::domain_error("unknown family name: " + name);
    return *k;
}

families::equation_family build_family(const family_flags& ff, K kind) {
    families::equation_family f;
    f.kind = kind;
    f.n = ff.n;
    f.l = ff.l;
    f.k = ff.k;
    f.t = rat_from_string(ff.t);
    f.alpha = rat_from_string(ff.alpha);
    f.beta1 = rat_from_string(ff.beta1);
    f.beta2 = rat_from_string(ff.beta2);
    f.p = rat_from_string(ff.p);
    f.a = rat_from_string(ff.a);
    f.b = rat_from_string(ff.b);
    families::throw_if_invalid(f);
    return f;
}

json params_json(const families::equation_family& f, double quad_tol) {
    json p;
    p["family"] = families::family_name(f.kind);
    p["n"] = f.n;
    switch (f.kind) {
        case K::lane_emden:
            break;
        case K::hardy_sobolev:
            put_exact(p, "t", f.t);
            break;
        case K::hardy_sobolev_system:
            put_exact(p, "t", f.t);
            p["l"] = f.l;
            break;
        case K::whls:
            put_exact(p, "alpha", f.alpha);
            put_exact(p, "beta1", f.beta1);
            put_exact(p, "beta2", f.beta2);
            break;
        case K::bessel_single:
        case K::bessel_system:
            put_exact(p, "alpha", f.alpha);
            break;
        case K::ckn:
        case K::ckn_system:
            put_exact(p, "p", f.p);
            put_exact(p, "a", f.a);
            put_exact(p, "b", f.b);
            break;
        case K::k_hessian:
            p["k"] = f.k;
            break;
    }
    p["quad_tol"] = quad_tol;
    return p;
}

json record_head(const char* command, const families::equation_family& f) {
    json out;
    out["command"] = command;
    out["tool"] = tool_name;
    out["tool_version"] = tool_version;
    out["parameters"] = params_json(f, env_quad_tol());
    return out;
}

// --------------------------------------------------------------------------
// exponent
// --------------------------------------------------------------------------

struct exponent_args {
    family_flags ff;
    std::string q, q2;
    std::string output;
};

int run_exponent(const exponent_args& a) {
    const auto f = build_family(a.ff, kind_from_flag(a.ff.family));
    json out = record_head("exponent", f);

    const auto tgt = families::critical_exponent(f);
    using form = families::critical_target::form;
    switch (tgt.kind) {
        case form::single_exponent:
            out["form"] = "single-exponent";
            break;
        case form::linear_condition:
            out["form"] = "linear-condition";
            out["condition"] = "1/(q1+1) + 1/(q2+1) = " + rat_to_string(tgt.value);
            break;
        case form::diagonal_only:
            out["form"] = "diagonal-only";
            out["condition"] = "scaling invariance on the diagonal q1 = q2 only";
            break;
    }
    put_exact(out, "critical", tgt.value);
    if (f.kind == K::k_hessian) put_exact(out, "serrin", families::serrin_exponent(f));

    if (!a.q.empty()) {
        const rat q = rat_from_string(a.q);
        std::optional<rat> q2;
        if (!a.q2.empty()) q2 = rat_from_string(a.q2);
        const auto cls = families::classify(f, q, q2);
        json c;
        c["regime"] = families::regime_name(cls.reg);
        put_exact(c, "defect", cls.defect);
        out["classification"] = c;
        try {
            const auto sc = families::scaling_exponents(f, q, q2);
            json s;
            put_exact(s, "equation_sigma", sc.first.equation_sigma);
            put_exact(s, "energy_sigma", sc.first.energy_sigma);
            if (sc.second) {
                json s2;
                put_exact(s2, "equation_sigma", sc.second->equation_sigma);
                put_exact(s2, "energy_sigma", sc.second->energy_sigma);
                s["second"] = s2;
            }
            out["scaling"] = s;
        } catch (const families::unsupported_family&) {
            // nonlocal families carry no pointwise dilation exponent
        }
    }
    emit(out.dump(2) + "\n", a.output);
    return 0;
}

// --------------------------------------------------------------------------
// verify
// --------------------------------------------------------------------------

struct verify_args {
    family_flags ff;
    std::string profile;
    std::string q;
    double tol = 1e-8;
    double energy_tol = 1e-5;
    double pohozaev_tol = 1e-4;
    std::string output;
};

double residual_max_grid(const families::equation_family& f,
                         const profiles::radial_profile& u, double q, double lo,
                         double hi, int m, bool relative) {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        const double r = lo * std::pow(hi / lo, i / double(m - 1));
        double res = std::abs(radial_ops::residual(f, u, q, r));
        if (relative) {
            const double scale = std::pow(std::abs(u.value(r)), q);
            res /= std::max(scale, 1e-300);
        }
        worst = std::max(worst, res);
    }
    return worst;
}

int run_verify(const verify_args& a) {
    const quadrature::quadrature_spec spec = base_spec();
    const std::string& key = a.profile;

    // ---- nonlocal catalog entry: handled by integral checks -------------
    if (key == "hls-bubble") {
        families::equation_family f;
        f.kind = K::whls;
        f.n = a.ff.n;
        f.alpha = rat_from_string(a.ff.alpha);
        f.beta1 = rat_from_string(a.ff.beta1);
        f.beta2 = rat_from_string(a.ff.beta2);
        families::throw_if_invalid(f);

        const rat A = families::critical_exponent(f).value;
        const rat q_rat = a.q.empty() ? rat(2) / A - 1 : rat_from_string(a.q);
        const double qd = rat_to_double(q_rat);
        const double ad = rat_to_double(f.alpha);

        json out = record_head("verify", f);
        out["profile"] = key;
        put_exact(out, "q", q_rat);
        json checks = json::array();
        bool all_pass = true;

        const auto shape = profiles::hls_bubble(f.n, ad, 1.0, 1.0);
        auto sval = shape.value;
        auto forcing = [sval, qd](double s) { return std::pow(sval(s), qd); };
        const double anchor = 1.0;
        const double conv =
            potentials::riesz_convolve(forcing, f.n, ad, anchor, spec).value;
        const double lam = std::pow(sval(anchor) / conv, 1.0 / (qd - 1.0));
        std::function<double(double)> v = [sval, lam](double s) { return lam * sval(s); };

        {
            const double tol = std::max(a.tol, 1e-7);
            double worst = 0.0;
            for (double r : {0.0, 0.5, 2.0}) {
                const double res = potentials::integral_residual(
                    v, potentials::kernel_choice::riesz, f.n, ad, qd, r, spec);
                worst = std::max(worst, std::abs(res) / v(r));
            }
            json c;
            c["name"] = "integral-residual";
            c["max_relative_residual"] = worst;
            c["radii"] = {0.0, 0.5, 2.0};
            c["amplitude"] = lam;
            c["tol"] = tol;
            c["pass"] = worst <= tol;
            all_pass = all_pass && worst <= tol;
            checks.push_back(c);
        }
        {
            const auto cls = families::classify(f, q_rat, q_rat);
            const double defect = rat_to_double(cls.defect);
            json c;
            c["name"] = "diagonal-defect";
            c["regime"] = families::regime_name(cls.reg);
            put_exact(c, "defect", cls.defect);
            c["tol"] = a.pohozaev_tol;
            c["pass"] = std::abs(defect) <= a.pohozaev_tol;
            all_pass = all_pass && std::abs(defect) <= a.pohozaev_tol;
            checks.push_back(c);
        }
        {
            const rat margin =
                (rat(f.n) - f.alpha) * (q_rat + 1) + f.beta1 + f.beta2 - f.n;
            json c;
            c["name"] = "energy-margin";
            put_exact(c, "margin", margin);
            c["status"] = margin > 0 ? "finite" : "infinite-energy";
            c["pass"] = margin > 0;
            all_pass = all_pass && margin > 0;
            checks.push_back(c);
        }
        out["checks"] = checks;
        out["pass"] = all_pass;
        emit(out.dump(2) + "\n", a.output);
        return all_pass ? 0 : 1;
    }

    // ---- differential catalog entries -----------------------------------
    families::equation_family f;
    rat qdef;
    bool relative_residual = false;

    if (key == "hs-bubble") {
        f.kind = K::hardy_sobolev;
        f.n = a.ff.n;
        f.t = rat_from_string(a.ff.t);
        families::throw_if_invalid(f);
        qdef = families::critical_exponent(f).value;
    } else if (key == "ckn-extremal") {
        f.kind = K::ckn;
        f.n = a.ff.n;
        f.p = rat_from_string(a.ff.p);
        f.a = rat_from_string(a.ff.a);
        f.b = rat_from_string(a.ff.b);
        families::throw_if_invalid(f);
        qdef = families::critical_exponent(f).value;
    } else if (key == "hessian-fast" || key == "hessian-slow") {
        f.kind = K::k_hessian;
        f.n = a.ff.n;
        f.k = a.ff.k;
        families::throw_if_invalid(f);
        qdef = families::critical_exponent(f).value;
        if (key == "hessian-slow" && a.q.empty())
            throw std::domain_error("hessian-slow requires an explicit -q");
    } else {
        throw std::domain_error(
            "unknown profile '" + key +
            "' (catalog: hs-bubble, hls-bubble, ckn-extremal, hessian-fast, hessian-slow)");
    }

    const rat q_rat = a.q.empty() ? qdef : rat_from_string(a.q);
    const double qd = rat_to_double(q_rat);

    profiles::radial_profile u;
    if (key == "hs-bubble") {
        const double td = rat_to_double(f.t);
        const auto shape = profiles::hs_bubble(f.n, td, 1.0, 1.0);
        const double lam = profiles::fit_amplitude(f, shape, qd, 1.0);
        u = profiles::hs_bubble(f.n, td, lam, 1.0);
    } else if (key == "ckn-extremal") {
        u = profiles::ckn_extremal(f.n, rat_to_double(f.p), rat_to_double(f.a),
                                   rat_to_double(f.b));
    } else if (key == "hessian-fast") {
        u = profiles::hessian_fast(f.n, f.k);
    } else {
        u = profiles::hessian_slow(f.n, f.k, qd);
        relative_residual = true;
    }

    json out = record_head("verify", f);
    out["profile"] = key;
    put_exact(out, "q", q_rat);
    json checks = json::array();
    bool all_pass = true;

    {
        const double worst = residual_max_grid(f, u, qd, 1e-3, 1e3, 200, relative_residual);
        json c;
        c["name"] = "residual";
        c["max_residual"] = worst;
        c["grid"] = "200 log-spaced radii in [1e-3, 1e3]";
        c["relative"] = relative_residual;
        c["tol"] = a.tol;
        c["pass"] = worst <= a.tol;
        all_pass = all_pass && worst <= a.tol;
        checks.push_back(c);
    }

    const auto rep = identities::energy_pair(f, u, qd, spec);
    const bool finite = rep.lhs_finite && rep.rhs_finite;
    {
        json c;
        c["name"] = "energy";
        if (!finite) {
            c["status"] = "infinite-energy";
            c["lhs_tail_margin"] = rep.lhs_tail_margin;
            c["rhs_tail_margin"] = rep.rhs_tail_margin;
            c["lhs_origin_margin"] = rep.lhs_origin_margin;
            c["rhs_origin_margin"] = rep.rhs_origin_margin;
            c["pass"] = true;  // divergence is a reported status, not a failure
        } else {
            c["status"] = "finite";
            c["lhs"] = rep.lhs;
            c["rhs"] = rep.rhs;
            c["relative_gap"] = rep.relative_gap;
            c["tol"] = a.energy_tol;
            c["pass"] = rep.relative_gap <= a.energy_tol;
            all_pass = all_pass && rep.relative_gap <= a.energy_tol;
        }
        checks.push_back(c);
    }

    {
        json c;
        c["name"] = "pohozaev";
        if (!finite) {
            c["status"] = "skipped (infinite-energy)";
            c["pass"] = true;
        } else {
            const auto po = identities::pohozaev_report(f, u, qd, spec);
            c["algebraic_defect"] = po.algebraic_defect;
            c["numerical_defect"] = po.numerical_defect;
            c["gap"] = po.gap;
            c["tol"] = a.pohozaev_tol;
            c["pass"] = po.gap <= a.pohozaev_tol;
            all_pass = all_pass && po.gap <= a.pohozaev_tol;
        }
        checks.push_back(c);
    }

    out["checks"] = checks;
    out["pass"] = all_pass;
    emit(out.dump(2) + "\n", a.output);
    return all_pass ? 0 : 1;
}

// --------------------------------------------------------------------------
// scan
// --------------------------------------------------------------------------

struct scan_args {
    family_flags ff;
    std::string q;
    double q_from = 0, q_to = 0, q_step = 1;
    double q1_from = 0, q1_to = 0, q1_step = 1;
    double q2_from = 0, q2_to = 0, q2_step = 1;
    double mu_from = 0, mu_to = 0, mu_step = 1;
    bool with_shooting = false;
    std::string format = "csv";
    std::string output;
};

std::vector<double> grid(double from, double to, double step) {
    if (!(step > 0)) throw std::domain_error("scan step must be positive");
    if (to < from) throw std::domain_error("scan upper bound below lower bound");
    std::vector<double> g;
    for (double x = from; x <= to + 1e-9 * step; x += step) g.push_back(x);
    return g;
}

std::string energy_prediction(const families::equation_family& f, const rat& q) {
    rat margin;
    switch (f.kind) {
        case K::lane_emden:
            margin = (rat(f.n) - 2) * (q + 1) - f.n;
            break;
        case K::hardy_sobolev:
            margin = (rat(f.n) - 2) * (q + 1) + f.t - f.n;
            break;
        case K::ckn: {
            const rat beta = (rat(f.n) - f.p - f.p * f.a) / (f.p - 1);
            margin = (beta + f.b) * (q + 1) - f.n;
            break;
        }
        case K::bessel_single:
            return "yes";  // exponential decay beats every power
        case K::k_hessian: {
            const rat s = families::serrin_exponent(f);
            if (q <= s) return "n/a";
            const rat crit = families::critical_exponent(f).value;
            const rat beta = (q == crit) ? (rat(f.n) - 2 * f.k) / rat(f.k)
                                         : 2 * rat(f.k) / (q - f.k);
            margin = beta * (q + 1) - f.n;
            break;
        }
        default:
            return "n/a";
    }
    return margin > 0 ? "yes" : "no";
}

template <class Fn>
std::vector<json> parallel_rows(std::size_t count, const Fn& fn) {
    std::vector<json> rows(count);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, count));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) rows[i] = fn(i);
        });
    for (auto& th : pool) th.join();
    return rows;
}

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        for (char& ch : s)
            if (ch == ',' || ch == '\n') ch = ';';
        return s;
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return fmt(v.get<double>());
}

void render_rows(const scan_args& a, json& out, const std::vector<std::string>& cols,
                 const std::vector<json>& rows) {
    if (a.format == "json") {
        out["rows"] = rows;
        emit(out.dump(2) + "\n", a.output);
        return;
    }
    std::ostringstream csv;
    for (std::size_t c = 0; c < cols.size(); ++c)
        csv << cols[c] << (c + 1 < cols.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            csv << (row.contains(cols[c]) ? csv_cell(row.at(cols[c])) : "");
            csv << (c + 1 < cols.size() ? "," : "\n");
        }
    }
    emit(csv.str(), a.output);
}

int run_scan(const scan_args& a, const CLI::App* cmd) {
    const auto f = build_family(a.ff, kind_from_flag(a.ff.family));
    const quadrature::quadrature_spec spec = base_spec();

    json out = record_head("scan", f);

    const bool mu_mode = cmd->count("--mu-from") > 0;
    const bool grid_mode = cmd->count("--q1-from") > 0;
    const bool q_mode = cmd->count("--q-from") > 0;
    if (int(mu_mode) + int(grid_mode) + int(q_mode) != 1)
        throw std::domain_error(
            "scan needs exactly one of --q-from, --q1-from, or --mu-from");

    if (q_mode) {
        if (f.kind == K::hardy_sobolev_system || f.kind == K::whls ||
            f.kind == K::bessel_system || f.kind == K::ckn_system)
            throw std::domain_error(
                "q-scan covers scalar families; use the --q1-from/--q2-from grid");
        const auto qs = grid(a.q_from, a.q_to, a.q_step);
        out["scan"] = {{"kind", "q"},
                       {"from", a.q_from},
                       {"to", a.q_to},
                       {"step", a.q_step},
                       {"with_shooting", a.with_shooting}};
        auto rows = parallel_rows(qs.size(), [&](std::size_t i) {
            json row;
            row["q"] = qs[i];
            row["error"] = "";
            try {
                const rat q = rat_from_double(qs[i]);
                const auto cls = families::classify(f, q);
                std::string regime = families::regime_name(cls.reg);
                if (f.kind == K::k_hessian && q <= families::serrin_exponent(f))
                    regime = "below-serrin";
                row["regime"] = regime;
                row["defect"] = rat_to_double(cls.defect);
                row["defect_exact"] = rat_to_string(cls.defect);
                row["energy_finite"] = energy_prediction(f, q);
                std::string shoot = "";
                if (a.with_shooting) {
                    shoot = "n/a";
                    if (f.kind == K::k_hessian && q > families::serrin_exponent(f)) {
                        const auto m =
                            shooting::khessian_shoot_match(f.n, f.k, qs[i], 1e-8);
                        shoot = m.matched ? "matched"
                                          : (m.bracketed ? "unmatched" : "no-bracket");
                    }
                }
                row["shoot_status"] = shoot;
            } catch (const std::exception& e) {
                row["error"] = e.what();
            }
            return row;
        });
        render_rows(a, out,
                    {"q", "regime", "defect", "defect_exact", "energy_finite",
                     "shoot_status", "error"},
                    rows);
        return 0;
    }

    if (grid_mode) {
        if (f.kind != K::ckn_system)
            throw std::domain_error("the (q1,q2) grid scan covers the ckn-system family");
        const auto g1 = grid(a.q1_from, a.q1_to, a.q1_step);
        const auto g2 = grid(a.q2_from, a.q2_to, a.q2_step);
        out["scan"] = {{"kind", "q1q2"},
                       {"q1_from", a.q1_from},
                       {"q1_to", a.q1_to},
                       {"q1_step", a.q1_step},
                       {"q2_from", a.q2_from},
                       {"q2_to", a.q2_to},
                       {"q2_step", a.q2_step}};
        auto rows = parallel_rows(g1.size() * g2.size(), [&](std::size_t idx) {
            const double q1v = g1[idx / g2.size()];
            const double q2v = g2[idx % g2.size()];
            json row;
            row["q1"] = q1v;
            row["q2"] = q2v;
            row["error"] = "";
            try {
                const auto res = families::ckn_system_invariance(
                    f.n, f.p, f.a, f.b, rat_from_double(q1v), rat_from_double(q2v));
                using tag = families::ckn_invariance_result::case_tag;
                row["case"] = res.tag == tag::hyperplane_p2 ? "hyperplane-p2"
                              : res.tag == tag::diagonal    ? "diagonal"
                                                            : "none";
                row["invariant"] = res.invariant;
                row["residual"] = rat_to_double(res.residual);
                row["qstar"] =
                    res.qstar ? json(rat_to_double(*res.qstar)) : json(nullptr);
            } catch (const std::exception& e) {
                row["error"] = e.what();
            }
            return row;
        });
        render_rows(a, out, {"q1", "q2", "case", "invariant", "residual", "qstar", "error"},
                    rows);
        return 0;
    }

    // mu-scan: measured dilation ratio of the potential energy vs prediction
    rat q_rat;
    if (!a.q.empty())
        q_rat = rat_from_string(a.q);
    else {
        const auto tgt = families::critical_exponent(f);
        if (tgt.kind != families::critical_target::form::single_exponent)
            throw std::domain_error("mu-scan needs -q for this family");
        q_rat = tgt.value;
    }
    const double qd = rat_to_double(q_rat);

    profiles::radial_profile u;
    switch (f.kind) {
        case K::lane_emden:
        case K::hardy_sobolev: {
            const double td = rat_to_double(f.t);
            u = profiles::hs_bubble(f.n, td, 1.0, 1.0);
            break;
        }
        case K::ckn:
            u = profiles::ckn_extremal(f.n, rat_to_double(f.p), rat_to_double(f.a),
                                       rat_to_double(f.b));
            break;
        case K::k_hessian: {
            const rat crit = families::critical_exponent(f).value;
            u = (q_rat == crit) ? profiles::hessian_fast(f.n, f.k)
                                : profiles::hessian_slow(f.n, f.k, qd);
            break;
        }
        default:
            throw std::domain_error("mu-scan covers the local scalar families");
    }

    const auto mus = grid(a.mu_from, a.mu_to, a.mu_step);
    out["scan"] = {{"kind", "mu"},
                   {"from", a.mu_from},
                   {"to", a.mu_to},
                   {"step", a.mu_step}};
    put_exact(out, "q", q_rat);
    auto rows = parallel_rows(mus.size(), [&](std::size_t i) {
        json row;
        row["mu"] = mus[i];
        row["error"] = "";
        try {
            const auto chk = identities::scaling_invariance_check(f, u, qd, mus[i], spec);
            row["ratio"] = chk.ratio;
            row["predicted"] = chk.predicted;
            row["gap"] = chk.gap;
        } catch (const std::exception& e) {
            row["error"] = e.what();
        }
        return row;
    });
    render_rows(a, out, {"mu", "ratio", "predicted", "gap", "error"}, rows);
    return 0;
}

// --------------------------------------------------------------------------
// shoot
// --------------------------------------------------------------------------

struct shoot_args {
    std::string problem;
    int n = 3, k = 2;
    double q = 0;
    double tol = 1e-10;
    double probe_lo = 100.0, probe_hi = 100000.0;
    std::string trajectory;
    std::string output;
};

void write_trajectory_csv(const std::string& path,
                          const std::vector<shooting::ode_node>& nodes,
                          const families::equation_family& f,
                          const profiles::radial_profile& u, double q,
                          const char* value_name) {
    std::ostringstream csv;
    csv << "r," << value_name << ",d" << value_name << ",residual\n";
    for (const auto& nd : nodes) {
        double res = std::numeric_limits<double>::quiet_NaN();
        try {
            res = radial_ops::residual(f, u, q, nd.r);
        } catch (const std::exception&) {
        }
        csv << fmt(nd.r) << "," << fmt(nd.y[0]) << "," << fmt(nd.dy[0]) << ","
            << fmt(res) << "\n";
    }
    emit(csv.str(), path);
}

int run_shoot(const shoot_args& a) {
    const quadrature::quadrature_spec spec = base_spec();

    if (a.problem == "khessian") {
        families::equation_family f;
        f.kind = K::k_hessian;
        f.n = a.n;
        f.k = a.k;
        families::throw_if_invalid(f);

        const auto m = shooting::khessian_shoot_match(a.n, a.k, a.q, a.tol);
        json out = record_head("shoot", f);
        out["problem"] = "khessian";
        out["parameters"]["q"] = a.q;
        out["parameters"]["tol"] = a.tol;
        out["A_star"] = m.A_star;
        out["bracketed"] = m.bracketed;
        out["matched"] = m.matched;
        out["target_gap"] = m.target_gap;
        out["glue_value_jump"] = m.glue_value_jump;
        out["glue_derivative_jump"] = m.glue_derivative_jump;
        out["amplitude"] = m.amplitude;
        out["beta"] = m.beta;
        out["residual_max"] = m.residual_max;
        out["evaluations"] = m.evaluations;
        out["status"] = m.matched ? "matched" : (m.bracketed ? "unmatched" : "no-bracket");
        if (m.matched) {
            try {
                const double rate = shooting::khessian_decay_probe(
                    a.n, a.k, a.q, m.A_star, a.probe_lo, a.probe_hi);
                out["decay_estimate"] = rate;
                out["decay_expected"] = m.beta;
            } catch (const std::exception& e) {
                out["decay_estimate"] = nullptr;
                out["decay_note"] = e.what();
            }
        }
        if (!a.trajectory.empty())
            write_trajectory_csv(a.trajectory, m.trajectory, f, m.profile, a.q, "f");
        emit(out.dump(2) + "\n", a.output);
        return m.matched ? 0 : 3;
    }

    if (a.problem == "schrodinger") {
        const auto gs = shooting::schrodinger_ground_state(a.n, a.q);
        families::equation_family f;
        f.kind = K::bessel_single;
        f.n = a.n;
        f.alpha = rat(2);
        json out = record_head("shoot", f);
        out["problem"] = "schrodinger";
        out["parameters"]["q"] = a.q;
        if (!gs.converged) {
            out["status"] = "no-convergence";
            emit(out.dump(2) + "\n", a.output);
            return 3;
        }
        out["u0"] = gs.u0;
        out["bisections"] = gs.bisections;
        out["tail_radius"] = gs.tail_radius;
        out["tail_coeff"] = gs.tail_coeff;
        const auto rep = identities::energy_pair(f, gs.profile, a.q, spec);
        out["identity_gap"] = rep.relative_gap;
        out["identity_tol"] = 1e-3;
        const double rate = shooting::decay_rate_estimate(
            gs.profile.value, 8.0, 14.0, profiles::decay_class::exponential);
        out["decay_estimate"] = rate;
        const bool pass = rep.relative_gap < 1e-3;
        out["status"] = pass ? "converged" : "identity-gap-exceeded";
        if (!a.trajectory.empty())
            write_trajectory_csv(a.trajectory, gs.trajectory, f, gs.profile, a.q, "u");
        emit(out.dump(2) + "\n", a.output);
        return pass ? 0 : 1;
    }

    throw std::domain_error("unknown shooting problem: " + a.problem);
}

// --------------------------------------------------------------------------
// config-file expansion
//
// A --config file holds flat key=value lines acting as defaults for the
// chosen subcommand's long options.  The file is expanded into the argument
// list ahead of parsing, and a key is dropped whenever the command line
// already carries that option, so explicit flags always win.
// --------------------------------------------------------------------------

std::vector<std::string> expand_config_defaults(std::vector<std::string> args) {
    std::string file;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw std::invalid_argument("--config expects a file path");
            file = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            args.erase(args.begin() + i);
        } else {
            ++i;
        }
    }
    if (file.empty()) return args;

    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot read config file: " + file);

    auto trim = [](const std::string& s) {
        const char* ws = " \t\r\n";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        return s.substr(b, s.find_last_not_of(ws) - b + 1);
    };

    // defaults go right after the subcommand name; without one the parser's
    // own missing-subcommand diagnostic is better than anything added here
    std::size_t at = 0;
    bool have_cmd = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            at = i + 1;
            have_cmd = true;
            break;
        }
    }
    if (!have_cmd) return args;

    auto already_given = [&args](const std::string& key) {
        const std::string lf = "--" + key;
        for (const auto& t : args) {
            if (t == lf || t.rfind(lf + "=", 0) == 0) return true;
            if (key.size() == 1 && t.size() >= 2 && t[0] == '-' && t[1] == key[0])
                return true;
        }
        return false;
    };

    std::string line;
    while (std::getline(in, line)) {
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        const auto eq = s.find('=');
        const std::string key = eq == std::string::npos ? "" : trim(s.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config file: expected key=value, got: " + s);
        std::string val = trim(s.substr(eq + 1));
        if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') ||
                                (val.front() == '\'' && val.back() == '\'')))
            val = val.substr(1, val.size() - 2);
        if (already_given(key)) continue;
        args.insert(args.begin() + at, "--" + key);
        args.insert(args.begin() + at + 1, val);
        at += 2;
    }
    return args;
}

} // namespace

// --------------------------------------------------------------------------
// entry point
// --------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{std::string(tool_name) +
                 " - critical-exponent and finite-energy verification toolkit"};
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);
    app.require_subcommand(1);

    exponent_args ea;
    verify_args va;
    scan_args sa;
    shoot_args ha;

    auto* cmd_exp = app.add_subcommand(
        "exponent", "critical exponents and conditions for an equation family");
    add_family_flags(cmd_exp, ea.ff, true);
    cmd_exp->add_option("-q,--q", ea.q, "exponent to classify (rational)");
    cmd_exp->add_option("--q2", ea.q2, "second exponent for system families (rational)");
    cmd_exp->add_option("-o,--output", ea.output, "write the JSON record to a file");
    cmd_exp->set_config("--config", "", "key=value file supplying flag defaults");

    auto* cmd_ver = app.add_subcommand(
        "verify", "check a catalog profile against its equation and identities");
    add_family_flags(cmd_ver, va.ff, false);
    cmd_ver->add_option("--profile", va.profile, "catalog profile key")->required();
    cmd_ver->add_option("-q,--q", va.q, "exponent (rational; defaults to critical)");
    cmd_ver->add_option("--tol", va.tol, "residual budget");
    cmd_ver->add_option("--energy-tol", va.energy_tol, "energy identity gap budget");
    cmd_ver->add_option("--pohozaev-tol", va.pohozaev_tol, "dilation defect budget");
    cmd_ver->add_option("-o,--output", va.output, "write the JSON record to a file");
    cmd_ver->set_config("--config", "", "key=value file supplying flag defaults");

    auto* cmd_scan =
        app.add_subcommand("scan", "tabulate classifications over a parameter grid");
    add_family_flags(cmd_scan, sa.ff, true);
    cmd_scan->add_option("-q,--q", sa.q, "exponent for the mu-scan (rational)");
    cmd_scan->add_option("--q-from", sa.q_from, "q grid lower bound");
    cmd_scan->add_option("--q-to", sa.q_to, "q grid upper bound");
    cmd_scan->add_option("--q-step", sa.q_step, "q grid step");
    cmd_scan->add_option("--q1-from", sa.q1_from, "q1 grid lower bound");
    cmd_scan->add_option("--q1-to", sa.q1_to, "q1 grid upper bound");
    cmd_scan->add_option("--q1-step", sa.q1_step, "q1 grid step");
    cmd_scan->add_option("--q2-from", sa.q2_from, "q2 grid lower bound");
    cmd_scan->add_option("--q2-to", sa.q2_to, "q2 grid upper bound");
    cmd_scan->add_option("--q2-step", sa.q2_step, "q2 grid step");
    cmd_scan->add_option("--mu-from", sa.mu_from, "mu grid lower bound");
    cmd_scan->add_option("--mu-to", sa.mu_to, "mu grid upper bound");
    cmd_scan->add_option("--mu-step", sa.mu_step, "mu grid step");
    cmd_scan->add_flag("--with-shooting", sa.with_shooting,
                       "attach a shooting status column (hessian family)");
    cmd_scan->add_option("--format", sa.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_scan->add_option("-o,--output", sa.output, "write the table to a file");
    cmd_scan->set_config("--config", "", "key=value file supplying flag defaults");

    auto* cmd_shoot =
        app.add_subcommand("shoot", "run a shooting solver and report the match");
    cmd_shoot->add_option("problem", ha.problem, "khessian | schrodinger")
        ->required()
        ->check(CLI::IsMember({"khessian", "schrodinger"}));
    cmd_shoot->add_option("-n,--n", ha.n, "dimension");
    cmd_shoot->add_option("-k,--k", ha.k, "hessian order");
    cmd_shoot->add_option("-q,--q", ha.q, "exponent")->required();
    cmd_shoot->add_option("--tol", ha.tol, "matching tolerance");
    cmd_shoot->add_option("--probe-lo", ha.probe_lo, "decay probe window start");
    cmd_shoot->add_option("--probe-hi", ha.probe_hi, "decay probe window end");
    cmd_shoot->add_option("--trajectory", ha.trajectory, "write the trajectory CSV here");
    cmd_shoot->add_option("-o,--output", ha.output, "write the JSON record to a file");
    cmd_shoot->set_config("--config", "", "key=value file supplying flag defaults");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config_defaults(std::move(args));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::vector<const char*> argp;
    argp.reserve(args.size() + 1);
    argp.push_back(argv[0]);
    for (const auto& s : args) argp.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argp.size()), argp.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cmd_exp)) return run_exponent(ea);
        if (app.got_subcommand(cmd_ver)) return run_verify(va);
        if (app.got_subcommand(cmd_scan)) return run_scan(sa, cmd_scan);
        if (app.got_subcommand(cmd_shoot)) return run_shoot(ha);
    } catch (const quadrature::divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
