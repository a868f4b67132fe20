#ifndef CRITEX_FAMILIES_HPP
#define CRITEX_FAMILIES_HPP

// Equation families and their exact exponent algebra: parameter validation,
// critical exponents / critical linear conditions, classification of a given
// exponent, scaling exponents from the equation and from the energy, and the
// weighted-system invariance case analysis.

#include "critex/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace critex {
namespace families {

// ============================================================================
// family descriptor
// ============================================================================

enum class family_kind {
    lane_emden,            // -Delta u = u^q
    hardy_sobolev,         // -Delta u = |x|^{-t} u^q
    hardy_sobolev_system,  // polyharmonic pair with |x|^{-t} weights
    whls,                  // weighted integral system, kernel order alpha
    bessel_single,         // u = g_alpha * u^q
    bessel_system,         // u = g_alpha * v^{q2}, v = g_alpha * u^{q1}
    ckn,                   // -div(|x|^{-ap}|Du|^{p-2}Du) = |x|^{-b(q+1)} u^q
    ckn_system,            // weighted p-Laplace pair
    k_hessian              // F_k[u] = (-u)^q
};

inline const char* family_name(family_kind k) {
    switch (k) {
        case family_kind::lane_emden:           return "lane-emden";
        case family_kind::hardy_sobolev:        return "hardy-sobolev";
        case family_kind::hardy_sobolev_system: return "hardy-sobolev-system";
        case family_kind::whls:                 return "whls";
        case family_kind::bessel_single:        return "bessel";
        case family_kind::bessel_system:        return "bessel-system";
        case family_kind::ckn:                  return "ckn";
        case family_kind::ckn_system:           return "ckn-system";
        case family_kind::k_hessian:            return "khessian";
    }
    return "?";
}

inline std::optional<family_kind> family_from_name(const std::string& s) {
    if (s == "lane-emden")           return family_kind::lane_emden;
    if (s == "hardy-sobolev")        return family_kind::hardy_sobolev;
    if (s == "hardy-sobolev-system") return family_kind::hardy_sobolev_system;
    if (s == "whls")                 return family_kind::whls;
    if (s == "bessel")               return family_kind::bessel_single;
    if (s == "bessel-system")        return family_kind::bessel_system;
    if (s == "ckn")                  return family_kind::ckn;
    if (s == "ckn-system")           return family_kind::ckn_system;
    if (s == "khessian")             return family_kind::k_hessian;
    return std::nullopt;
}

struct equation_family {
    family_kind kind = family_kind::lane_emden;
    int n = 3;          // dimension

    rat t = 0;          // radial weight power |x|^{-t} (hardy-sobolev families)
    rat alpha = 0;      // kernel order (whls / bessel families)
    rat beta1 = 0;      // component weight powers (whls)
    rat beta2 = 0;
    int l = 1;          // polyharmonic order (hardy-sobolev system)
    rat p = 2;          // gradient exponent (ckn families)
    rat a = 0;          // gradient weight power (ckn families)
    rat b = 0;          // right-hand-side weight power (ckn families)
    int k = 1;          // hessian order
};

// ---------------------------------------------------------------------------
// validation: one structured violation per failed bound
// ---------------------------------------------------------------------------

inline std::vector<std::string> validate(const equation_family& f) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& m) { out.push_back(m); };
    const rat n = f.n;

    switch (f.kind) {
        case family_kind::lane_emden:
            if (f.n <= 2) fail("lane-emden requires n > 2");
            break;
        case family_kind::hardy_sobolev:
            if (f.n <= 2) fail("hardy-sobolev requires n > 2");
            if (f.t < 0 || f.t >= 2) fail("hardy-sobolev requires 0 <= t < 2");
            break;
        case family_kind::hardy_sobolev_system:
            if (f.l < 1) fail("hardy-sobolev-system requires l >= 1");
            if (n <= 2 * rat(f.l)) fail("hardy-sobolev-system requires n > 2l");
            if (f.t < 0 || f.t >= 2) fail("hardy-sobolev-system requires 0 <= t < 2");
            break;
        case family_kind::whls:
            if (f.alpha <= 0 || f.alpha >= n) fail("whls requires 0 < alpha < n");
            if (f.beta1 < 0) fail("whls requires beta1 >= 0");
            if (f.beta2 < 0) fail("whls requires beta2 >= 0");
            if (f.beta1 + f.beta2 > f.alpha) fail("whls requires beta1 + beta2 <= alpha");
            break;
        case family_kind::bessel_single:
        case family_kind::bessel_system:
            if (f.alpha <= 0 || f.alpha >= n)
                fail(std::string(family_name(f.kind)) + " requires 0 < alpha < n");
            break;
        case family_kind::ckn:
            if (f.p <= 1) fail("ckn requires p > 1");
            if (f.a < 0) fail("ckn requires a >= 0");
            if (f.p > 1 && !(f.a < (n - f.p) / f.p)) fail("ckn requires a < (n-p)/p");
            if (f.b < f.a) fail("ckn requires b >= a");
            if (f.b > f.a + 1) fail("ckn requires b <= a+1");
            break;
        case family_kind::ckn_system:
            // wider box than the single equation: the system's own conditions
            // only need p > 1 and ordered weights
            if (f.p <= 1) fail("ckn-system requires p > 1");
            if (f.a < 0) fail("ckn-system requires a >= 0");
            if (f.b < f.a) fail("ckn-system requires b >= a");
            if (f.b > f.a + 1) fail("ckn-system requires b <= a+1");
            break;
        case family_kind::k_hessian:
            if (f.k < 2) fail("khessian requires k >= 2");
            if (2 * rat(f.k) >= n) fail("khessian requires k < n/2");
            break;
    }
    return out;
}

inline void throw_if_invalid(const equation_family& f) {
    auto v = validate(f);
    if (!v.empty()) {
        std::string msg = "invalid family parameters:";
        for (const auto& m : v) msg += " [" + m + "]";
        throw std::domain_error(msg);
    }
}

// ============================================================================
// critical exponent / critical condition
// ============================================================================

// A family is critical either at a single exponent q*, or along a linear
// condition 1/(q1+1) + 1/(q2+1) = A, or (ckn-system with p != 2) only on the
// diagonal q1 = q2 = q*.
struct critical_target {
    enum class form { single_exponent, linear_condition, diagonal_only };
    form kind = form::single_exponent;
    rat value;  // q* for single_exponent/diagonal_only, A for linear_condition
};

inline critical_target critical_exponent(const equation_family& f) {
    throw_if_invalid(f);
    const rat n = f.n;
    critical_target out;
    switch (f.kind) {
        case family_kind::lane_emden:
            out.kind = critical_target::form::single_exponent;
            out.value = (n + 2) / (n - 2);
            break;
        case family_kind::hardy_sobolev:
            out.kind = critical_target::form::single_exponent;
            out.value = (n + 2 - 2 * f.t) / (n - 2);
            break;
        case family_kind::hardy_sobolev_system:
            out.kind = critical_target::form::linear_condition;
            out.value = (n - 2 * rat(f.l)) / (n - f.t);
            break;
        case family_kind::whls:
            out.kind = critical_target::form::linear_condition;
            out.value = (n - f.alpha + f.beta1 + f.beta2) / n;
            break;
        case family_kind::bessel_single:
            // boundary exponent: admissible range is strictly below it
            out.kind = critical_target::form::single_exponent;
            out.value = (n + f.alpha) / (n - f.alpha);
            break;
        case family_kind::bessel_system:
            out.kind = critical_target::form::linear_condition;
            out.value = (n - f.alpha) / n;
            break;
        case family_kind::ckn: {
            const rat den = n - f.p + f.p * (f.b - f.a);
            if (den <= 0) throw std::domain_error("ckn: n - p + p(b-a) must be positive");
            out.kind = critical_target::form::single_exponent;
            out.value = n * f.p / den - 1;
            break;
        }
        case family_kind::ckn_system:
            if (f.p == 2) {
                out.kind = critical_target::form::linear_condition;
                out.value = (n + 2 * (f.b - f.a - 1)) / n;
            } else {
                const rat den = n - f.p + f.p * (f.b - f.a);
                if (den <= 0)
                    throw std::domain_error("ckn-system: n - p + p(b-a) must be positive");
                out.kind = critical_target::form::diagonal_only;
                out.value = n * f.p / den - 1;
            }
            break;
        case family_kind::k_hessian:
            out.kind = critical_target::form::single_exponent;
            out.value = (n + 2) * rat(f.k) / (n - 2 * rat(f.k));
            break;
    }
    return out;
}

// Divergence threshold for the hessian family: below it even the decaying
// power solution fails to exist.
inline rat serrin_exponent(const equation_family& f) {
    if (f.kind != family_kind::k_hessian)
        throw std::domain_error("serrin exponent is defined for the khessian family only");
    throw_if_invalid(f);
    const rat n = f.n;
    return n * rat(f.k) / (n - 2 * rat(f.k));
}

// ============================================================================
// classification
// ============================================================================

enum class regime { subcritical, critical, supercritical };

inline const char* regime_name(regime r) {
    switch (r) {
        case regime::subcritical:   return "subcritical";
        case regime::critical:      return "critical";
        case regime::supercritical: return "supercritical";
    }
    return "?";
}

struct classification {
    regime reg = regime::critical;
    rat defect;  // exactly zero iff critical
};

// Sign conventions (defect < 0 ⇒ subcritical unless noted):
//   hardy-sobolev / lane-emden:  (n-2) - 2(n-t)/(q+1)          increasing in q
//   ckn:                          n - p(a+1) - pn/(q+1) + pb    increasing in q
//   bessel (single):              n(q-1)/(q+1) - alpha          increasing in q
//   khessian:                     n/(q+1) - (n-2k)/(k+1)        decreasing in q,
//                                 defect > 0 ⇒ subcritical
//   systems:                      1/(q1+1) + 1/(q2+1) - A        decreasing in q,
//                                 defect > 0 ⇒ subcritical
inline classification classify(const equation_family& f, const rat& q,
                               std::optional<rat> q2 = std::nullopt) {
    throw_if_invalid(f);
    const rat n = f.n;
    const bool is_system = f.kind == family_kind::hardy_sobolev_system ||
                           f.kind == family_kind::whls ||
                           f.kind == family_kind::bessel_system ||
                           f.kind == family_kind::ckn_system;
    if (is_system && !q2)
        throw std::domain_error("system family requires two exponents");
    if (!is_system && q2)
        throw std::domain_error("scalar family takes a single exponent");
    if (q <= 1 || (q2 && *q2 <= 1))
        throw std::domain_error("exponents must exceed 1");

    classification out;
    rat defect;
    bool increasing = true;  // defect increasing in q (so defect < 0 ⇒ subcritical)

    switch (f.kind) {
        case family_kind::lane_emden:
            defect = (n - 2) - 2 * n / (q + 1);
            break;
        case family_kind::hardy_sobolev:
            defect = (n - 2) - 2 * (n - f.t) / (q + 1);
            break;
        case family_kind::ckn:
            defect = n - f.p * (f.a + 1) - f.p * n / (q + 1) + f.p * f.b;
            break;
        case family_kind::bessel_single:
            defect = n * (q - 1) / (q + 1) - f.alpha;
            break;
        case family_kind::k_hessian:
            defect = n / (q + 1) - (n - 2 * rat(f.k)) / (rat(f.k) + 1);
            increasing = false;
            break;
        case family_kind::hardy_sobolev_system:
        case family_kind::whls:
        case family_kind::bessel_system: {
            const rat A = critical_exponent(f).value;
            defect = rat(1) / (q + 1) + rat(1) / (*q2 + 1) - A;
            increasing = false;
            break;
        }
        case family_kind::ckn_system: {
            const auto tgt = critical_exponent(f);
            if (tgt.kind == critical_target::form::linear_condition) {  // p == 2
                defect = rat(1) / (q + 1) + rat(1) / (*q2 + 1) - tgt.value;
            } else {  // p != 2: scaling invariance exists on the diagonal only
                if (q != *q2)
                    throw std::domain_error(
                        "ckn-system with p != 2 is classified on the diagonal q1 = q2 only");
                defect = rat(2) / (q + 1) - rat(2) / (tgt.value + 1);
            }
            increasing = false;
            break;
        }
    }

    out.defect = defect;
    const int s = rat_sign(defect);
    if (s == 0)
        out.reg = regime::critical;
    else if ((s < 0) == increasing)
        out.reg = regime::subcritical;
    else
        out.reg = regime::supercritical;
    return out;
}

// ============================================================================
// scaling exponents
// ============================================================================

// sigma read from the equation (u_mu(x) = mu^sigma u(mu x) preserves the
// equation) and sigma read from the weighted energy (the natural norm is
// dilation-free); the two agree exactly when the exponent is critical.
struct scaling_pair {
    rat equation_sigma;
    rat energy_sigma;
};

struct scaling_report {
    scaling_pair first;
    std::optional<scaling_pair> second;  // systems only
};

struct unsupported_family : std::domain_error {
    using std::domain_error::domain_error;
};

inline scaling_report scaling_exponents(const equation_family& f, const rat& q,
                                        std::optional<rat> q2 = std::nullopt) {
    throw_if_invalid(f);
    const rat n = f.n;
    if (q <= 1 || (q2 && *q2 <= 1))
        throw std::domain_error("exponents must exceed 1");

    scaling_report out;
    switch (f.kind) {
        case family_kind::lane_emden:
            out.first = {rat(2) / (q - 1), n / (q + 1)};
            break;
        case family_kind::hardy_sobolev:
            out.first = {(2 - f.t) / (q - 1), (n - f.t) / (q + 1)};
            break;
        case family_kind::ckn: {
            if (q + 1 == f.p)
                throw std::domain_error("ckn scaling degenerates at q + 1 = p");
            out.first = {(f.p * (f.a + 1) - f.b * (q + 1)) / (q + 1 - f.p),
                         n / (q + 1) - f.b};
            break;
        }
        case family_kind::k_hessian:
            if (q == rat(f.k))
                throw std::domain_error("khessian scaling degenerates at q = k");
            out.first = {2 * rat(f.k) / (q - rat(f.k)), n / (q + 1)};
            break;
        case family_kind::hardy_sobolev_system: {
            if (!q2) throw std::domain_error("system family requires two exponents");
            const rat d = 2 * rat(f.l) - f.t;
            const rat det = q * (*q2) - 1;
            out.first  = {d * (*q2 + 1) / det, (n - f.t) / (q + 1)};
            out.second = scaling_pair{d * (q + 1) / det, (n - f.t) / (*q2 + 1)};
            break;
        }
        case family_kind::whls: {
            if (!q2) throw std::domain_error("system family requires two exponents");
            const rat d = f.alpha - f.beta1 - f.beta2;
            const rat det = q * (*q2) - 1;
            out.first  = {d * (*q2 + 1) / det, n / (q + 1)};
            out.second = scaling_pair{d * (q + 1) / det, n / (*q2 + 1)};
            break;
        }
        case family_kind::ckn_system: {
            if (!q2) throw std::domain_error("system family requires two exponents");
            const rat det = q * (*q2) - (f.p - 1) * (f.p - 1);
            if (det == 0)
                throw std::domain_error("ckn-system scaling degenerates at q1 q2 = (p-1)^2");
            const rat d = f.a + 1 - f.b;
            out.first  = {f.p * (*q2 + f.p - 1) * d / det - f.b, n / (q + 1) - f.b};
            out.second = scaling_pair{f.p * (q + f.p - 1) * d / det - f.b,
                                      n / (*q2 + 1) - f.b};
            break;
        }
        case family_kind::bessel_single:
        case family_kind::bessel_system:
            throw unsupported_family(
                "bessel families carry no scaling invariance (translation only)");
    }
    return out;
}

// ============================================================================
// ckn-system invariance case analysis
// ============================================================================

// For the weighted p-Laplace pair, scaling invariance of the energy holds:
//   p == 2 : along the hyperplane 1/(q1+1) + 1/(q2+1) = (n + 2(b-a-1))/n
//   p != 2 : only on the diagonal q1 = q2 = q* = np/(n-p+p(b-a)) - 1
// Off the diagonal with p != 2 the obstruction witness (q1-q2)(p-2) is
// nonzero.
struct ckn_invariance_result {
    enum class case_tag { hyperplane_p2, diagonal, none };
    case_tag tag = case_tag::none;
    bool invariant = false;
    rat residual;              // hyperplane residual / diagonal mismatch / witness
    std::optional<rat> qstar;  // diagonal case
};

inline ckn_invariance_result ckn_system_invariance(int n, const rat& p, const rat& a,
                                                   const rat& b, const rat& q1,
                                                   const rat& q2) {
    equation_family f;
    f.kind = family_kind::ckn_system;
    f.n = n; f.p = p; f.a = a; f.b = b;
    throw_if_invalid(f);
    if (q1 <= 1 || q2 <= 1) throw std::domain_error("exponents must exceed 1");

    ckn_invariance_result out;
    const rat rn = n;
    if (p == 2) {
        out.tag = ckn_invariance_result::case_tag::hyperplane_p2;
        const rat A = (rn + 2 * (b - a - 1)) / rn;
        out.residual = rat(1) / (q1 + 1) + rat(1) / (q2 + 1) - A;
        out.invariant = (out.residual == 0);
        return out;
    }
    if (q1 == q2) {
        const rat den = rn - p + p * (b - a);
        if (den <= 0)
            throw std::domain_error("ckn-system: n - p + p(b-a) must be positive");
        out.tag = ckn_invariance_result::case_tag::diagonal;
        out.qstar = rn * p / den - 1;
        out.residual = q1 - *out.qstar;
        out.invariant = (out.residual == 0);
        return out;
    }
    out.tag = ckn_invariance_result::case_tag::none;
    out.residual = (q1 - q2) * (p - 2);  // nonzero witness
    out.invariant = false;
    return out;
}

// ============================================================================
// bessel margins
// ============================================================================

// Admissibility margin for u = g_alpha * u^q: negative margin ⇔ admissible,
// the boundary itself is excluded.
inline rat bessel_margin(int n, const rat& alpha, const rat& q) {
    equation_family f;
    f.kind = family_kind::bessel_single;
    f.n = n; f.alpha = alpha;
    throw_if_invalid(f);
    if (q <= 1) throw std::domain_error("exponents must exceed 1");
    return rat(n) * (q - 1) / (q + 1) - alpha;
}

// System margin n(1/(q1+1) + 1/(q2+1)) - (n - alpha): positive ⇔ admissible.
inline rat bessel_system_margin(int n, const rat& alpha, const rat& q1, const rat& q2) {
    equation_family f;
    f.kind = family_kind::bessel_system;
    f.n = n; f.alpha = alpha;
    throw_if_invalid(f);
    if (q1 <= 1 || q2 <= 1) throw std::domain_error("exponents must exceed 1");
    return rat(n) * (rat(1) / (q1 + 1) + rat(1) / (q2 + 1)) - (rat(n) - alpha);
}

} // namespace families
} // namespace critex

#endif // CRITEX_FAMILIES_HPP
