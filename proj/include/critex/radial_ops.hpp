#ifndef CRITEX_RADIAL_OPS_HPP
#define CRITEX_RADIAL_OPS_HPP

// Radial differential operators applied to profiles, pointwise equation
// residuals, coefficient extraction for power solutions, and amplitude
// fitting of a shape to its equation.

#include "critex/families.hpp"
#include "critex/profiles.hpp"
#include "critex/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace critex {
namespace radial_ops {

enum class operator_kind {
    laplace,             // -(u'' + (n-1) u'/r)
    weighted_p_laplace,  // -r^{-ap} |u'|^{p-2} ( (p-1) u'' + (n-1-ap) u'/r )
    k_hessian_radial,    // C(n-1,k-1) (u'/r)^{k-1} u'' + C(n-1,k) (u'/r)^k
    schrodinger_linear   // -laplace(u) + u
};

struct operator_spec {
    operator_kind kind = operator_kind::laplace;
    int n = 3;
    double p = 2.0;  // weighted_p_laplace
    double a = 0.0;  // weighted_p_laplace
    int k = 2;       // k_hessian_radial
};

// Apply the operator to a radial profile at radius r >= 0.  The symmetric
// origin limits (u'(0) = 0, u'/r -> u''(0)) are built in for the operators
// that admit them; the weighted p-Laplace operator refuses r = 0, where its
// weight is genuinely singular.
inline double apply(const operator_spec& op, const profiles::radial_profile& u, double r) {
    if (r < 0.0) throw std::domain_error("radius must be nonnegative");
    switch (op.kind) {
        case operator_kind::laplace: {
            if (r == 0.0) return -static_cast<double>(op.n) * u.deriv2(0.0);
            return -(u.deriv2(r) + (op.n - 1) * u.deriv(r) / r);
        }
        case operator_kind::weighted_p_laplace: {
            if (r == 0.0)
                throw std::domain_error("weighted p-laplace operator is singular at r = 0");
            const double up = u.deriv(r);
            if (up == 0.0 && op.p < 2.0)
                throw std::domain_error(
                    "weighted p-laplace operator undefined where u' = 0 for p < 2");
            const double grad = std::pow(std::abs(up), op.p - 2.0);
            return -std::pow(r, -op.a * op.p) * grad *
                   ((op.p - 1.0) * u.deriv2(r) + (op.n - 1 - op.a * op.p) * up / r);
        }
        case operator_kind::k_hessian_radial: {
            const double c1 = static_cast<double>(profiles::binomial(op.n - 1, op.k - 1));
            const double c2 = static_cast<double>(profiles::binomial(op.n - 1, op.k));
            if (r == 0.0) {
                // u'/r -> u''(0); the two terms collapse to binom(n,k) u''(0)^k
                const double d2 = u.deriv2(0.0);
                return (c1 + c2) * std::pow(d2, op.k);
            }
            const double slope = u.deriv(r) / r;
            return c1 * std::pow(slope, op.k - 1) * u.deriv2(r) + c2 * std::pow(slope, op.k);
        }
        case operator_kind::schrodinger_linear: {
            operator_spec lap{operator_kind::laplace, op.n, 2.0, 0.0, 1};
            return apply(lap, u, r) + u.value(r);
        }
    }
    throw std::logic_error("unreachable");
}

// Operator spec naturally attached to a scalar family.
inline operator_spec operator_for(const families::equation_family& f) {
    operator_spec op;
    op.n = f.n;
    switch (f.kind) {
        case families::family_kind::lane_emden:
        case families::family_kind::hardy_sobolev:
            op.kind = operator_kind::laplace;
            break;
        case families::family_kind::ckn:
            op.kind = operator_kind::weighted_p_laplace;
            op.p = rat_to_double(f.p);
            op.a = rat_to_double(f.a);
            break;
        case families::family_kind::k_hessian:
            op.kind = operator_kind::k_hessian_radial;
            op.k = f.k;
            break;
        case families::family_kind::bessel_single:
            if (f.alpha != 2)
                throw families::unsupported_family(
                    "differential form of the bessel equation exists only at alpha = 2");
            op.kind = operator_kind::schrodinger_linear;
            break;
        default:
            throw families::unsupported_family(
                "no single radial differential operator for this family");
    }
    return op;
}

// Weight power w on the right-hand side r^{-w} |u|^q of the family equation.
inline double rhs_weight_power(const families::equation_family& f, double q) {
    switch (f.kind) {
        case families::family_kind::hardy_sobolev:
            return rat_to_double(f.t);
        case families::family_kind::ckn:
            return rat_to_double(f.b) * (q + 1.0);
        default:
            return 0.0;
    }
}

// Pointwise residual Op(u)(r) - r^{-w} |u(r)|^q  (the hessian family reads
// (-u)^q on the right).
inline double residual(const families::equation_family& f,
                       const profiles::radial_profile& u, double q, double r) {
    const operator_spec op = operator_for(f);
    const double lhs = apply(op, u, r);
    const double w = rhs_weight_power(f, q);
    const double uval = u.value(r);
    const double forcing = (f.kind == families::family_kind::k_hessian)
                               ? std::pow(-uval, q)
                               : std::pow(std::abs(uval), q);
    const double weight = (w == 0.0) ? 1.0 : std::pow(r, -w);
    return lhs - weight * forcing;
}

// R(r) = F_k(u)(r) / (-u(r))^q; constant in r exactly when u is a pure power
// solution of the hessian equation shape.
inline double extract_coefficient(int n, int k, const profiles::radial_profile& u,
                                  double q, double r) {
    operator_spec op;
    op.kind = operator_kind::k_hessian_radial;
    op.n = n;
    op.k = k;
    const double num = apply(op, u, r);
    const double den = std::pow(-u.value(r), q);
    if (den == 0.0) throw std::domain_error("coefficient extraction at a zero of u");
    return num / den;
}

} // namespace radial_ops

namespace profiles {

// Fit the amplitude lambda so that lambda * shape solves the family equation
// at the anchor radius: with h the operator's homogeneity degree (1 for the
// Laplacian, p-1 for the p-Laplacian, k for the hessian operator),
//   lambda^{q-h} = Op(shape)(r0) / ( r0^{-w} |shape(r0)|^q ).
inline double fit_amplitude(const families::equation_family& f,
                            const radial_profile& shape, double q, double anchor) {
    const radial_ops::operator_spec op = radial_ops::operator_for(f);
    double h = 1.0;
    switch (op.kind) {
        case radial_ops::operator_kind::laplace:
        case radial_ops::operator_kind::schrodinger_linear:
            h = 1.0;
            break;
        case radial_ops::operator_kind::weighted_p_laplace:
            h = op.p - 1.0;
            break;
        case radial_ops::operator_kind::k_hessian_radial:
            h = static_cast<double>(op.k);
            break;
    }
    if (q == h) throw std::domain_error("amplitude fit degenerates at q equal to the operator degree");

    const double num = radial_ops::apply(op, shape, anchor);
    const double w = radial_ops::rhs_weight_power(f, q);
    const double sval = shape.value(anchor);
    const double forcing = (f.kind == families::family_kind::k_hessian)
                               ? std::pow(-sval, q)
                               : std::pow(std::abs(sval), q);
    const double weight = (w == 0.0) ? 1.0 : std::pow(anchor, -w);
    const double ratio = num / (weight * forcing);
    if (!(ratio > 0.0))
        throw std::domain_error("amplitude fit needs a positive operator/forcing ratio");
    return std::pow(ratio, 1.0 / (q - h));
}

} // namespace profiles
} // namespace critex

#endif // CRITEX_RADIAL_OPS_HPP
