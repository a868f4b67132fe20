#ifndef CRITEX_PROFILES_HPP
#define CRITEX_PROFILES_HPP

// Closed-form radial profiles (bubbles, extremals, power solutions) plus
// generic profile plumbing: sign/decay metadata, dilation, and a parameter
// record that serializers can surface.

#include "critex/families.hpp"
#include "critex/rational.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace critex {
namespace profiles {

enum class decay_class { algebraic, exponential };
enum class sign_class { positive, negative };

struct profile_params {
    std::string kind;
    std::vector<std::pair<std::string, double>> values;

    void set(const std::string& key, double v) { values.emplace_back(key, v); }
};

struct radial_profile {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> deriv2;
    sign_class sign = sign_class::positive;
    decay_class decay = decay_class::algebraic;
    std::optional<double> decay_power;  // |u| ~ r^{-decay_power} when algebraic
    bool singular_origin = false;
    profile_params params;
};

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

namespace detail {

// u(r) = A (B + r^s)^{-theta}; derivatives follow by direct differentiation.
// std::pow supplies the right limits at r = 0 for every s (0, 1, or inf for
// the singular-slope weighted cases).
inline radial_profile power_bubble(double A, double B, double theta, double s) {
    radial_profile u;
    u.value = [=](double r) { return A * std::pow(B + std::pow(r, s), -theta); };
    u.deriv = [=](double r) {
        const double base = B + std::pow(r, s);
        return -A * theta * s * std::pow(r, s - 1) * std::pow(base, -theta - 1);
    };
    u.deriv2 = [=](double r) {
        const double base = B + std::pow(r, s);
        return -A * theta * s *
               ((s - 1) * std::pow(r, s - 2) * std::pow(base, -theta - 1) -
                (theta + 1) * s * std::pow(r, 2 * s - 2) * std::pow(base, -theta - 2));
    };
    u.sign = A >= 0 ? sign_class::positive : sign_class::negative;
    u.decay = decay_class::algebraic;
    u.decay_power = theta * s;
    return u;
}

} // namespace detail

// ---------------------------------------------------------------------------
// hs-bubble: u(r) = c ( d / (d^2 + r^{2-t}) )^{(n-2)/(2-t)}
// ---------------------------------------------------------------------------
inline radial_profile hs_bubble(int n, double t, double c, double d) {
    if (n <= 2) throw std::domain_error("hs-bubble requires n > 2");
    if (!(t >= 0.0 && t < 2.0)) throw std::domain_error("hs-bubble requires 0 <= t < 2");
    if (!(c > 0.0 && d > 0.0)) throw std::domain_error("hs-bubble requires c, d > 0");
    const double s = 2.0 - t;
    const double theta = (n - 2.0) / s;
    radial_profile u = detail::power_bubble(c * std::pow(d, theta), d * d, theta, s);
    u.params.kind = "hs-bubble";
    u.params.set("n", n);
    u.params.set("t", t);
    u.params.set("c", c);
    u.params.set("d", d);
    return u;  // decay power theta*s = n-2
}

// ---------------------------------------------------------------------------
// hls-bubble: u(r) = a ( b / (b^2 + r^2) )^{(n-alpha)/2}
// ---------------------------------------------------------------------------
inline radial_profile hls_bubble(int n, double alpha, double a, double b) {
    if (!(alpha > 0.0 && alpha < n)) throw std::domain_error("hls-bubble requires 0 < alpha < n");
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("hls-bubble requires a, b > 0");
    const double theta = 0.5 * (n - alpha);
    radial_profile u = detail::power_bubble(a * std::pow(b, theta), b * b, theta, 2.0);
    u.params.kind = "hls-bubble";
    u.params.set("n", n);
    u.params.set("alpha", alpha);
    u.params.set("a", a);
    u.params.set("b", b);
    return u;  // decay power n - alpha
}

// ---------------------------------------------------------------------------
// ckn-extremal: the weighted p-Laplace ground state at its critical exponent
//   U(r) = c0 ( (n-p-pa) / (1 + r^E) )^M
//   E  = p (n-p-pa)(1+a-b) / ( (p-1)(n-(1+a-b)p) )
//   M  = (n - p(1+a-b)) / (p(1+a-b))
//   c0 = [ n (p-1)^{1-p} (n - p(1+a-b))^{-1} ]^{ (n-p(1+a-b)) / (p^2(1+a-b)) }
// ---------------------------------------------------------------------------
inline radial_profile ckn_extremal(int n, double p, double a, double b) {
    {
        families::equation_family f;
        f.kind = families::family_kind::ckn;
        f.n = n;
        f.p = rat_from_double(p);
        f.a = rat_from_double(a);
        f.b = rat_from_double(b);
        families::throw_if_invalid(f);
    }
    const double h = 1.0 + a - b;           // h in (0, 1]
    if (!(h > 0.0)) throw std::domain_error("ckn-extremal requires b < a + 1");
    const double nph = n - p * h;
    if (!(nph > 0.0)) throw std::domain_error("ckn-extremal requires n > p(1+a-b)");
    const double core = n - p - p * a;      // positive by a < (n-p)/p
    const double E = p * core * h / ((p - 1.0) * nph);
    const double M = nph / (p * h);
    const double c0 = std::pow(n * std::pow(p - 1.0, 1.0 - p) / nph, nph / (p * p * h));

    radial_profile u = detail::power_bubble(c0 * std::pow(core, M), 1.0, M, E);
    u.params.kind = "ckn-extremal";
    u.params.set("n", n);
    u.params.set("p", p);
    u.params.set("a", a);
    u.params.set("b", b);
    u.params.set("E", E);
    u.params.set("M", M);
    u.params.set("c0", c0);
    return u;  // decay power E*M = (n-p-pa)/(p-1)
}

// ---------------------------------------------------------------------------
// hessian constants
// ---------------------------------------------------------------------------

// Shape coefficient for the fast-decay hessian profile at the critical
// exponent: C* = ((n-2k)/k)^k (binom(n-1,k-1) + binom(n-1,k)).
inline rat hessian_cstar(int n, int k) {
    families::equation_family f;
    f.kind = families::family_kind::k_hessian;
    f.n = n;
    f.k = k;
    families::throw_if_invalid(f);
    const rat base = rat(n - 2 * k) / rat(k);
    return rat_pow(base, k) * rat(binomial(n - 1, k - 1) + binomial(n - 1, k));
}

// Exact amplitude power for the slow-decay solution -C_A r^{-beta},
// beta = 2k/(q-k):  C_A^{q-k} = beta^k (binom(n-1,k) - binom(n-1,k-1)(beta+1)).
inline rat hessian_slow_amplitude_power(int n, int k, const rat& q) {
    families::equation_family f;
    f.kind = families::family_kind::k_hessian;
    f.n = n;
    f.k = k;
    families::throw_if_invalid(f);
    if (q <= families::serrin_exponent(f))
        throw std::domain_error("slow-decay amplitude requires q above the divergence threshold");
    const rat beta = rat(2 * k) / (q - rat(k));
    return rat_pow(beta, k) *
           (rat(binomial(n - 1, k)) - rat(binomial(n - 1, k - 1)) * (beta + 1));
}

// ---------------------------------------------------------------------------
// hessian-fast: U(r) = -L (1+r^2)^{-(n-2k)/(2k)} at the critical exponent,
// L = C*^{1/(q-k)}.
// ---------------------------------------------------------------------------
inline radial_profile hessian_fast(int n, int k) {
    const rat cstar = hessian_cstar(n, k);
    families::equation_family f;
    f.kind = families::family_kind::k_hessian;
    f.n = n;
    f.k = k;
    const rat q = families::critical_exponent(f).value;
    const double qmk = rat_to_double(q - rat(k));  // = 2k(k+1)/(n-2k)
    const double L = std::pow(rat_to_double(cstar), 1.0 / qmk);
    const double theta = (n - 2.0 * k) / (2.0 * k);

    radial_profile u = detail::power_bubble(-L, 1.0, theta, 2.0);
    u.sign = sign_class::negative;
    u.params.kind = "hessian-fast";
    u.params.set("n", n);
    u.params.set("k", k);
    u.params.set("q", rat_to_double(q));
    u.params.set("L", L);
    return u;  // decay power (n-2k)/k
}

// ---------------------------------------------------------------------------
// hessian-slow: f(r) = -C_A r^{-2k/(q-k)}, exact for q above the divergence
// threshold; singular at the origin.
// ---------------------------------------------------------------------------
inline radial_profile hessian_slow(int n, int k, double q) {
    const rat qr = rat_from_double(q);
    const rat power = hessian_slow_amplitude_power(n, k, qr);  // validates q
    const double beta = 2.0 * k / (q - k);
    const double CA = std::pow(rat_to_double(power), 1.0 / (q - k));

    radial_profile u;
    u.value = [=](double r) { return -CA * std::pow(r, -beta); };
    u.deriv = [=](double r) { return CA * beta * std::pow(r, -beta - 1.0); };
    u.deriv2 = [=](double r) { return -CA * beta * (beta + 1.0) * std::pow(r, -beta - 2.0); };
    u.sign = sign_class::negative;
    u.decay = decay_class::algebraic;
    u.decay_power = beta;
    u.singular_origin = true;
    u.params.kind = "hessian-slow";
    u.params.set("n", n);
    u.params.set("k", k);
    u.params.set("q", q);
    u.params.set("beta", beta);
    u.params.set("CA", CA);
    return u;
}

// ---------------------------------------------------------------------------
// dilation: (mu, sigma) |-> mu^sigma u(mu r)
// ---------------------------------------------------------------------------
inline radial_profile scale_profile(const radial_profile& u, double mu, double sigma) {
    if (!(mu > 0.0)) throw std::domain_error("scale_profile requires mu > 0");
    radial_profile v = u;
    const double amp = std::pow(mu, sigma);
    auto uval = u.value;
    auto ud1 = u.deriv;
    auto ud2 = u.deriv2;
    v.value = [=](double r) { return amp * uval(mu * r); };
    v.deriv = [=](double r) { return amp * mu * ud1(mu * r); };
    v.deriv2 = [=](double r) { return amp * mu * mu * ud2(mu * r); };
    v.params.set("mu", mu);
    v.params.set("sigma", sigma);
    return v;
}

} // namespace profiles
} // namespace critex

#endif // CRITEX_PROFILES_HPP
