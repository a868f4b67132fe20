#include <catch2/catch_amalgamated.hpp>

#include "critex/families.hpp"
#include "critex/profiles.hpp"
#include "critex/radial_ops.hpp"

#include <cmath>

using namespace critex;
using namespace critex::radial_ops;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

families::equation_family make(families::family_kind k, int n) {
    families::equation_family f;
    f.kind = k;
    f.n = n;
    return f;
}

} // namespace

TEST_CASE("laplacian of the standard bubble in closed form") {
    // u = (1+r^2)^{-1/2} in n = 3:  -lap u = 3 (1+r^2)^{-5/2}
    const auto u = profiles::detail::power_bubble(1.0, 1.0, 0.5, 2.0);
    operator_spec op;
    op.kind = operator_kind::laplace;
    op.n = 3;
    for (double r : {0.0, 0.5, 1.0, 4.0}) {
        const double expect = 3.0 * std::pow(1.0 + r * r, -2.5);
        CHECK_THAT(apply(op, u, r), WithinRel(expect, 1e-12));
    }
}

TEST_CASE("laplacian of a quadratic has the flat-origin limit") {
    // u = 1 - r^2:  lap u = -2n everywhere, so -lap u = 2n including r = 0
    profiles::radial_profile u;
    u.value = [](double r) { return 1.0 - r * r; };
    u.deriv = [](double r) { return -2.0 * r; };
    u.deriv2 = [](double) { return -2.0; };
    operator_spec op;
    op.kind = operator_kind::laplace;
    op.n = 7;
    CHECK_THAT(apply(op, u, 0.0), WithinRel(14.0, 1e-14));
    CHECK_THAT(apply(op, u, 2.0), WithinRel(14.0, 1e-14));
}

TEST_CASE("weighted p-laplacian on a pure power") {
    // u = r^{-m}: -r^{-ap} |u'|^{p-2} ((p-1)u'' + (n-1-ap) u'/r)
    //           = -m^{p-1} r^{-(m+1)(p-1)-1-ap} ((m+1)(p-1) - (n-1-ap))
    const int n = 5;
    const double p = 3.0, a = 0.25, m = 0.5;
    profiles::radial_profile u;
    u.value = [m](double r) { return std::pow(r, -m); };
    u.deriv = [m](double r) { return -m * std::pow(r, -m - 1.0); };
    u.deriv2 = [m](double r) { return m * (m + 1.0) * std::pow(r, -m - 2.0); };
    operator_spec op;
    op.kind = operator_kind::weighted_p_laplace;
    op.n = n;
    op.p = p;
    op.a = a;
    for (double r : {0.5, 1.0, 2.0}) {
        const double expect = -std::pow(m, p - 1.0) *
                              std::pow(r, -(m + 1.0) * (p - 1.0) - 1.0 - a * p) *
                              ((m + 1.0) * (p - 1.0) - (n - 1.0 - a * p));
        CHECK_THAT(apply(op, u, r), WithinRel(expect, 1e-12));
    }
    CHECK_THROWS_AS(apply(op, u, 0.0), std::domain_error);
}

TEST_CASE("hessian operator on radial polynomials") {
    // u = r^2 / 2: u'/r = 1, u'' = 1, so the operator equals
    // binom(n-1,k-1) + binom(n-1,k) = binom(n,k) at every r including 0
    const int n = 5, k = 2;
    profiles::radial_profile u;
    u.value = [](double r) { return 0.5 * r * r; };
    u.deriv = [](double r) { return r; };
    u.deriv2 = [](double) { return 1.0; };
    operator_spec op;
    op.kind = operator_kind::k_hessian_radial;
    op.n = n;
    op.k = k;
    for (double r : {0.0, 1.0, 3.0}) {
        CHECK_THAT(apply(op, u, r), WithinRel(10.0, 1e-13));
    }

    // u = -(1+r^2)^{-1/4} reproduces the fast-decay shape algebra:
    // u'/r = s(r), u'' = s(r)(1 - 3 r^2 / (2(1+r^2))) with s = (1+r^2)^{-9/4}/2
    const auto w = profiles::hessian_fast(n, k);
    const double q = 14.0;
    for (double r : {0.0, 0.7, 1.0, 5.0}) {
        const double lhs = apply(op, w, r);
        const double rhs = std::pow(-w.value(r), q);
        CHECK_THAT(lhs, WithinRel(rhs, 1e-12));
    }
}

TEST_CASE("schrodinger linear operator") {
    // u = e^{-r^2}: -u'' - (n-1)u'/r + u = (2n + 1 - 4r^2) e^{-r^2}
    const int n = 3;
    profiles::radial_profile u;
    u.value = [](double r) { return std::exp(-r * r); };
    u.deriv = [](double r) { return -2.0 * r * std::exp(-r * r); };
    u.deriv2 = [](double r) { return (4.0 * r * r - 2.0) * std::exp(-r * r); };
    operator_spec op;
    op.kind = operator_kind::schrodinger_linear;
    op.n = n;
    for (double r : {0.0, 1.0, 2.0}) {
        const double expect = (2.0 * n + 1.0 - 4.0 * r * r) * std::exp(-r * r);
        CHECK_THAT(apply(op, u, r), WithinRel(expect, 1e-12));
    }
}

TEST_CASE("residual vanishes on exact solutions and not otherwise") {
    auto le = make(families::family_kind::lane_emden, 3);
    const auto u = profiles::hs_bubble(3, 0.0, std::pow(3.0, 0.25), 1.0);
    for (double r : {0.0, 0.5, 1.0, 10.0}) {
        CHECK_THAT(residual(le, u, 5.0, r), WithinAbs(0.0, 1e-12));
    }
    // wrong exponent: residual has a definite size at r = 1
    CHECK(std::abs(residual(le, u, 4.0, 1.0)) > 1e-3);

    auto hs = make(families::family_kind::hardy_sobolev, 4);
    hs.t = rat(1, 2);
    const auto w = profiles::hs_bubble(4, 0.5, 1.0, 1.0);
    const double qh = rat_to_double(families::critical_exponent(hs).value);
    const double lam = profiles::fit_amplitude(hs, w, qh, 1.0);
    // the fitted amplitude multiplies the leading constant of the bubble
    const auto ws = profiles::hs_bubble(4, 0.5, lam, 1.0);
    for (double r : {0.3, 1.0, 6.0}) {
        CHECK_THAT(residual(hs, ws, qh, r), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("residual for the singular slow profile uses the weighted origin form") {
    auto kh = make(families::family_kind::k_hessian, 5);
    kh.k = 2;
    const auto u = profiles::hessian_slow(5, 2, 20.0);
    for (double r : {0.1, 1.0, 50.0}) {
        const double scale = std::pow(-u.value(r), 20.0);
        CHECK(std::abs(residual(kh, u, 20.0, r)) <= 1e-12 * scale);
    }
}

TEST_CASE("coefficient extraction recovers shape constants") {
    // on the slow profile the operator equals exactly (-u)^q: coefficient 1
    const auto u = profiles::hessian_slow(5, 2, 20.0);
    for (double r : {0.2, 1.0, 10.0}) {
        CHECK_THAT(extract_coefficient(5, 2, u, 20.0, r), WithinRel(1.0, 1e-12));
    }
    // on the bare power -r^{-beta} the coefficient is the amplitude identity
    profiles::radial_profile bare;
    const double beta = 2.0 / 9.0;
    bare.value = [beta](double r) { return -std::pow(r, -beta); };
    bare.deriv = [beta](double r) { return beta * std::pow(r, -beta - 1.0); };
    bare.deriv2 = [beta](double r) {
        return -beta * (beta + 1.0) * std::pow(r, -beta - 2.0);
    };
    bare.sign = profiles::sign_class::negative;
    bare.singular_origin = true;
    const double expect = 40.0 / 729.0;  // C_A^{q-k} for (5, 2, q=20)
    for (double r : {0.5, 2.0}) {
        CHECK_THAT(extract_coefficient(5, 2, bare, 20.0, r), WithinRel(expect, 1e-12));
    }
}

TEST_CASE("operator_for maps families to their operators") {
    CHECK(operator_for(make(families::family_kind::lane_emden, 4)).kind ==
          operator_kind::laplace);
    CHECK(operator_for(make(families::family_kind::hardy_sobolev, 4)).kind ==
          operator_kind::laplace);
    auto ckn = make(families::family_kind::ckn, 4);
    ckn.p = rat(3);
    ckn.a = rat(1, 4);
    const auto op = operator_for(ckn);
    CHECK(op.kind == operator_kind::weighted_p_laplace);
    CHECK_THAT(op.p, WithinRel(3.0, 1e-15));
    CHECK_THAT(op.a, WithinRel(0.25, 1e-15));
    auto kh = make(families::family_kind::k_hessian, 5);
    kh.k = 2;
    CHECK(operator_for(kh).kind == operator_kind::k_hessian_radial);
    CHECK_THROWS_AS(operator_for(make(families::family_kind::whls, 4)),
                    families::unsupported_family);
}

TEST_CASE("rhs weight power reflects the family weights") {
    // the equation right-hand side is r^{-w} |u|^q; w is reported positive
    auto hs = make(families::family_kind::hardy_sobolev, 4);
    hs.t = rat(3, 2);
    CHECK_THAT(rhs_weight_power(hs, 3.0), WithinRel(1.5, 1e-15));
    auto ckn = make(families::family_kind::ckn, 4);
    ckn.p = rat(2);
    ckn.b = rat(1, 2);
    const double q = 3.0;
    CHECK_THAT(rhs_weight_power(ckn, q), WithinRel(0.5 * (q + 1.0), 1e-15));
    CHECK_THAT(rhs_weight_power(make(families::family_kind::lane_emden, 3), 5.0),
               WithinAbs(0.0, 0.0));
}
