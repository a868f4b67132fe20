#ifndef CRITEX_IDENTITIES_HPP
#define CRITEX_IDENTITIES_HPP

// Integral identities tying profiles to their equations: two-sided energy
// pairing with exact finiteness pre-checks, dilation bookkeeping of the
// weighted energy, a numerically differentiated dilation (pohozaev-type)
// defect, the sharp-constant functional of the critical embedding, and a
// two-component energy balance.

#include "critex/families.hpp"
#include "critex/profiles.hpp"
#include "critex/quadrature.hpp"
#include "critex/radial_ops.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace critex {
namespace identities {

using quadrature::quadrature_result;
using quadrature::quadrature_spec;
using quadrature::tail_kind;

// ===========================================================================
// energy pairing
// ===========================================================================

// For an exact solution the gradient-side and potential-side energies agree:
// pairing the equation with the solution converts one into the other.  The
// report carries exact tail/origin exponent margins (margin > 0 <=> finite);
// when either side fails its margin test no quadrature is attempted for it.
struct energy_report {
    bool lhs_finite = true;
    bool rhs_finite = true;
    double lhs = std::numeric_limits<double>::quiet_NaN();
    double rhs = std::numeric_limits<double>::quiet_NaN();
    double relative_gap = std::numeric_limits<double>::quiet_NaN();
    // tail exponent margins (+inf for exponential decay)
    double lhs_tail_margin = std::numeric_limits<double>::infinity();
    double rhs_tail_margin = std::numeric_limits<double>::infinity();
    // origin exponent margins (+inf unless the profile is singular there)
    double lhs_origin_margin = std::numeric_limits<double>::infinity();
    double rhs_origin_margin = std::numeric_limits<double>::infinity();
    int nodes_used = 0;
    bool converged = false;
};

namespace detail {

// decay exponents of the two energy densities: integrand ~ r^{-e} at infinity
// (and ~ r^{-e} at the origin for pure-power profiles); margin = e - n at the
// tail, n - e at the origin.
struct density_powers {
    double lhs;  // gradient-side density exponent
    double rhs;  // potential-side density exponent
};

inline density_powers energy_density_powers(const families::equation_family& f,
                                            double q, double beta) {
    density_powers d{};
    const double t = rat_to_double(f.t);
    const double p = rat_to_double(f.p);
    const double a = rat_to_double(f.a);
    const double b = rat_to_double(f.b);
    switch (f.kind) {
        case families::family_kind::lane_emden:
            d.lhs = 2.0 * (beta + 1.0);
            d.rhs = beta * (q + 1.0);
            break;
        case families::family_kind::hardy_sobolev:
            d.lhs = 2.0 * (beta + 1.0);
            d.rhs = beta * (q + 1.0) + t;
            break;
        case families::family_kind::ckn:
            d.lhs = p * (beta + 1.0) + a * p;
            d.rhs = (beta + b) * (q + 1.0);
            break;
        case families::family_kind::k_hessian:
            d.lhs = beta + (beta + 2.0) * f.k;
            d.rhs = beta * (q + 1.0);
            break;
        default:
            throw families::unsupported_family(
                "energy pairing supports the scalar differential families");
    }
    return d;
}

} // namespace detail

inline energy_report energy_pair(const families::equation_family& f,
                                 const profiles::radial_profile& u, double q,
                                 const quadrature_spec& spec = {}) {
    families::throw_if_invalid(f);
    energy_report rep;
    const int n = f.n;
    const bool schrodinger = (f.kind == families::family_kind::bessel_single);
    if (schrodinger && f.alpha != 2)
        throw families::unsupported_family(
            "energy pairing of the nonlocal family exists only at alpha = 2");

    const tail_kind tail = (u.decay == profiles::decay_class::exponential)
                               ? tail_kind::exponential
                               : tail_kind::algebraic;

    if (!schrodinger && u.decay == profiles::decay_class::algebraic) {
        if (!u.decay_power)
            throw std::domain_error("algebraic profile without a decay power");
        const double beta = *u.decay_power;
        const auto d = detail::energy_density_powers(f, q, beta);
        rep.lhs_tail_margin = d.lhs - n;
        rep.rhs_tail_margin = d.rhs - n;
        if (u.singular_origin) {
            rep.lhs_origin_margin = n - d.lhs;
            rep.rhs_origin_margin = n - d.rhs;
        }
        rep.lhs_finite = rep.lhs_tail_margin > 0 && rep.lhs_origin_margin > 0;
        rep.rhs_finite = rep.rhs_tail_margin > 0 && rep.rhs_origin_margin > 0;
    }

    std::function<double(double)> lhs_density, rhs_density;
    double lhs_weight = 0.0, rhs_weight = 0.0;
    switch (f.kind) {
        case families::family_kind::lane_emden:
        case families::family_kind::hardy_sobolev: {
            auto d1 = u.deriv;
            lhs_density = [d1](double r) { const double g = d1(r); return g * g; };
            auto val = u.value;
            rhs_density = [val, q](double r) { return std::pow(std::abs(val(r)), q + 1.0); };
            rhs_weight = rat_to_double(f.t);
            break;
        }
        case families::family_kind::ckn: {
            const double p = rat_to_double(f.p);
            auto d1 = u.deriv;
            lhs_density = [d1, p](double r) { return std::pow(std::abs(d1(r)), p); };
            lhs_weight = rat_to_double(f.a) * p;
            auto val = u.value;
            rhs_density = [val, q](double r) { return std::pow(std::abs(val(r)), q + 1.0); };
            rhs_weight = rat_to_double(f.b) * (q + 1.0);
            break;
        }
        case families::family_kind::k_hessian: {
            radial_ops::operator_spec op;
            op.kind = radial_ops::operator_kind::k_hessian_radial;
            op.n = n;
            op.k = f.k;
            lhs_density = [op, u](double r) {
                return -u.value(r) * radial_ops::apply(op, u, r);
            };
            auto val = u.value;
            rhs_density = [val, q](double r) { return std::pow(-val(r), q + 1.0); };
            break;
        }
        case families::family_kind::bessel_single: {
            auto d1 = u.deriv;
            auto val = u.value;
            lhs_density = [d1, val](double r) {
                const double g = d1(r), v = val(r);
                return g * g + v * v;
            };
            rhs_density = [val, q](double r) { return std::pow(std::abs(val(r)), q + 1.0); };
            break;
        }
        default:
            throw families::unsupported_family(
                "energy pairing supports the scalar differential families");
    }

    bool conv = true;
    if (rep.lhs_finite) {
        const auto res = quadrature::integrate_radial(lhs_density, n, lhs_weight, spec, tail);
        rep.lhs = res.value;
        rep.nodes_used += res.nodes_used;
        conv = conv && res.converged;
    }
    if (rep.rhs_finite) {
        const auto res = quadrature::integrate_radial(rhs_density, n, rhs_weight, spec, tail);
        rep.rhs = res.value;
        rep.nodes_used += res.nodes_used;
        conv = conv && res.converged;
    }
    rep.converged = conv;
    if (rep.lhs_finite && rep.rhs_finite)
        rep.relative_gap = std::abs(rep.lhs - rep.rhs) /
                           std::max(std::abs(rep.lhs), std::abs(rep.rhs));
    return rep;
}

// ===========================================================================
// dilation ratio of the weighted potential energy
// ===========================================================================

struct scaling_check {
    double ratio = 1.0;      // E(u_mu) / E(u)
    double predicted = 1.0;  // mu^{sigma (q+1) + w - n}
    double gap = 0.0;        // |ratio - predicted| / predicted
};

inline scaling_check scaling_invariance_check(const families::equation_family& f,
                                              const profiles::radial_profile& u,
                                              double q, double mu,
                                              const quadrature_spec& spec = {}) {
    const auto sig =
        families::scaling_exponents(f, rat_from_double(q));  // throws for nonlocal families
    const double sigma = rat_to_double(sig.first.equation_sigma);
    const double w = radial_ops::rhs_weight_power(f, q);
    const int n = f.n;
    const bool hess = (f.kind == families::family_kind::k_hessian);

    auto energy_of = [&](const profiles::radial_profile& v) {
        auto val = v.value;
        auto dens = [val, q, hess](double r) {
            const double x = val(r);
            return hess ? std::pow(-x, q + 1.0) : std::pow(std::abs(x), q + 1.0);
        };
        return quadrature::integrate_radial(dens, n, w, spec).value;
    };

    scaling_check out;
    const double base = energy_of(u);
    const double scaled = energy_of(profiles::scale_profile(u, mu, sigma));
    out.ratio = scaled / base;
    out.predicted = std::pow(mu, sigma * (q + 1.0) + w - n);
    out.gap = std::abs(out.ratio - out.predicted) / out.predicted;
    return out;
}

// ===========================================================================
// dilation (pohozaev-type) defect
// ===========================================================================

// E(mu) evaluates the natural energy functional on u(x/mu); its derivative at
// mu = 1, normalized by the potential integral, reproduces the algebraic
// criticality defect when u solves the equation.  The derivative is taken by
// central differences plus one Richardson sweep, each E(mu) by quadrature.
struct pohozaev_result {
    double algebraic_defect;
    double numerical_defect;
    double gap;
};

inline pohozaev_result pohozaev_report(const families::equation_family& f,
                                       const profiles::radial_profile& u, double q,
                                       const quadrature_spec& spec = {}) {
    families::throw_if_invalid(f);
    const int n = f.n;
    const double t = rat_to_double(f.t);
    const double p = rat_to_double(f.p);
    const double a = rat_to_double(f.a);
    const double b = rat_to_double(f.b);

    std::function<double(const profiles::radial_profile&)> grad_part, pot_part;
    double grad_coef = 0.5, pot_coef = 1.0 / (q + 1.0), normalizer = 2.0;
    double sign = 1.0;

    switch (f.kind) {
        case families::family_kind::lane_emden:
        case families::family_kind::hardy_sobolev:
            grad_part = [&](const profiles::radial_profile& v) {
                auto d1 = v.deriv;
                return quadrature::integrate_radial(
                           [d1](double r) { const double g = d1(r); return g * g; }, n,
                           0.0, spec)
                    .value;
            };
            pot_part = [&, t](const profiles::radial_profile& v) {
                auto val = v.value;
                return quadrature::integrate_radial(
                           [val, q](double r) { return std::pow(std::abs(val(r)), q + 1.0); },
                           n, t, spec)
                    .value;
            };
            grad_coef = 0.5;
            normalizer = 2.0;
            sign = 1.0;
            break;
        case families::family_kind::ckn:
            grad_part = [&, p, a](const profiles::radial_profile& v) {
                auto d1 = v.deriv;
                return quadrature::integrate_radial(
                           [d1, p](double r) { return std::pow(std::abs(d1(r)), p); }, n,
                           a * p, spec)
                    .value;
            };
            pot_part = [&, b](const profiles::radial_profile& v) {
                auto val = v.value;
                return quadrature::integrate_radial(
                           [val, q](double r) { return std::pow(std::abs(val(r)), q + 1.0); },
                           n, b * (q + 1.0), spec)
                    .value;
            };
            grad_coef = 1.0 / p;
            normalizer = p;
            sign = 1.0;
            break;
        case families::family_kind::k_hessian: {
            radial_ops::operator_spec op;
            op.kind = radial_ops::operator_kind::k_hessian_radial;
            op.n = n;
            op.k = f.k;
            grad_part = [&, op](const profiles::radial_profile& v) {
                return quadrature::integrate_radial(
                           [op, v](double r) {
                               return -v.value(r) * radial_ops::apply(op, v, r);
                           },
                           n, 0.0, spec)
                    .value;
            };
            pot_part = [&](const profiles::radial_profile& v) {
                auto val = v.value;
                return quadrature::integrate_radial(
                           [val, q](double r) { return std::pow(-val(r), q + 1.0); }, n,
                           0.0, spec)
                    .value;
            };
            grad_coef = 1.0 / (f.k + 1.0);
            normalizer = 1.0;
            sign = -1.0;  // defect convention is decreasing in q for this family
            break;
        }
        default:
            throw families::unsupported_family(
                "dilation defect supports the scalar variational families");
    }

    auto energy = [&](double mu) {
        // v(x) = u(x/mu)
        const profiles::radial_profile v = profiles::scale_profile(u, 1.0 / mu, 0.0);
        return grad_coef * grad_part(v) - pot_coef * pot_part(v);
    };

    const double F = pot_part(u);
    const double h = 1e-4;
    auto central = [&](double hh) { return (energy(1.0 + hh) - energy(1.0 - hh)) / (2.0 * hh); };
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    const double dE = (4.0 * d2 - d1) / 3.0;

    pohozaev_result out;
    out.numerical_defect = sign * normalizer * dE / F;
    out.algebraic_defect = rat_to_double(families::classify(f, rat_from_double(q)).defect);
    out.gap = std::abs(out.numerical_defect - out.algebraic_defect);
    return out;
}

// ===========================================================================
// sharp constant of the critical embedding
// ===========================================================================

// Rayleigh quotient of the standard bubble (any width b gives the same value)
// and the associated least-energy level m = c*^{n/2} / n.
struct min_energy_result {
    double c_star;
    double energy_level;
};

inline min_energy_result min_energy_critical(int n, double width = 1.0,
                                             const quadrature_spec& spec = {}) {
    if (n <= 2) throw std::domain_error("critical embedding requires n > 2");
    const profiles::radial_profile u = profiles::hs_bubble(n, 0.0, 1.0, width);
    auto d1 = u.deriv;
    auto val = u.value;
    const double grad =
        quadrature::integrate_radial([d1](double r) { const double g = d1(r); return g * g; },
                                     n, 0.0, spec)
            .value;
    const double qc = 2.0 * n / (n - 2.0);
    const double mass =
        quadrature::integrate_radial([val, qc](double r) { return std::pow(val(r), qc); }, n,
                                     0.0, spec)
            .value;
    min_energy_result out;
    out.c_star = grad / std::pow(mass, (n - 2.0) / n);
    out.energy_level = std::pow(out.c_star, 0.5 * n) / n;
    return out;
}

// ===========================================================================
// two-component energy balance
// ===========================================================================

struct balance_result {
    double first;
    double second;
    double gap;
};

inline balance_result system_energy_balance(const profiles::radial_profile& u,
                                            const profiles::radial_profile& v, int n,
                                            double t, double q1, double q2,
                                            const quadrature_spec& spec = {}) {
    auto uval = u.value;
    auto vval = v.value;
    balance_result out;
    out.first = quadrature::integrate_radial(
                    [uval, q1](double r) { return std::pow(std::abs(uval(r)), q1 + 1.0); },
                    n, t, spec)
                    .value;
    out.second = quadrature::integrate_radial(
                     [vval, q2](double r) { return std::pow(std::abs(vval(r)), q2 + 1.0); },
                     n, t, spec)
                     .value;
    out.gap = std::abs(out.first - out.second) /
              std::max(std::abs(out.first), std::abs(out.second));
    return out;
}

} // namespace identities
} // namespace critex

#endif // CRITEX_IDENTITIES_HPP
