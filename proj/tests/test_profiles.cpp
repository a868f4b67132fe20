#include <catch2/catch_amalgamated.hpp>

#include "critex/profiles.hpp"
#include "critex/radial_ops.hpp"

#include <cmath>

using namespace critex;
using namespace critex::profiles;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// five-point central difference oracles for the closure derivatives
double fd1(const radial_profile& u, double r, double h) {
    return (-u.value(r + 2 * h) + 8 * u.value(r + h) - 8 * u.value(r - h) +
            u.value(r - 2 * h)) /
           (12 * h);
}
double fd2(const radial_profile& u, double r, double h) {
    return (-u.value(r + 2 * h) + 16 * u.value(r + h) - 30 * u.value(r) +
            16 * u.value(r - h) - u.value(r - 2 * h)) /
           (12 * h * h);
}

} // namespace

TEST_CASE("bubble values and derivatives match finite differences") {
    const auto u = hs_bubble(3, 0.0, 1.0, 1.0);
    CHECK_THAT(u.value(0.0), WithinRel(1.0, 1e-14));
    CHECK_THAT(u.value(1.0), WithinRel(1.0 / std::sqrt(2.0), 1e-14));
    REQUIRE(u.decay_power.has_value());
    CHECK_THAT(*u.decay_power, WithinAbs(1.0, 1e-14));

    for (double r : {0.3, 1.0, 2.7}) {
        CHECK_THAT(u.deriv(r), WithinRel(fd1(u, r, 1e-4), 1e-8));
        CHECK_THAT(u.deriv2(r), WithinRel(fd2(u, r, 1e-4), 1e-6));
    }
    CHECK(u.deriv(0.0) == 0.0);

    const auto w = hs_bubble(4, 0.5, 2.0, 1.5);
    REQUIRE(w.decay_power.has_value());
    CHECK_THAT(*w.decay_power, WithinAbs(2.0, 1e-14));  // n - 2
    for (double r : {0.5, 1.0, 3.0}) {
        CHECK_THAT(w.deriv(r), WithinRel(fd1(w, r, 1e-5), 1e-7));
        // the difference oracle's own rounding noise, 30 eps |u| / (12 h^2),
        // is a few 1e-7 absolute here, so the relative bar must sit above it
        CHECK_THAT(w.deriv2(r), WithinRel(fd2(w, r, 1e-4), 1e-5));
    }
}

TEST_CASE("weighted bubble with t = 1 has the conical slope at the origin") {
    // u = c (d/(d^2 + r))^{n-2}: u'(0) = -c theta d^{theta} d^{-2theta-2} * s, s=1
    const int n = 3;
    const double c = 2.0, d = 1.5;
    const auto u = hs_bubble(n, 1.0, c, d);
    const double theta = n - 2.0;  // (n-2)/(2-t) with t=1
    const double expect = -c * theta * std::pow(d, theta) * std::pow(d * d, -theta - 1.0);
    CHECK_THAT(u.deriv(0.0), WithinRel(expect, 1e-13));
}

TEST_CASE("hls bubble shape") {
    const auto u = hls_bubble(3, 2.0, 2.0, 1.0);
    // a (b/(b^2+r^2))^{1/2} at r = 0 is a / b^{1/2}... with b = 1: u(0) = a
    CHECK_THAT(u.value(0.0), WithinRel(2.0, 1e-14));
    REQUIRE(u.decay_power.has_value());
    CHECK_THAT(*u.decay_power, WithinAbs(1.0, 1e-14));  // n - alpha
    for (double r : {0.4, 1.3}) {
        CHECK_THAT(u.deriv(r), WithinRel(fd1(u, r, 1e-5), 1e-7));
    }
}

TEST_CASE("ckn extremal reduces to the standard bubble at p=2, a=b=0") {
    const auto u = ckn_extremal(3, 2.0, 0.0, 0.0);
    // (n(n-2))^{(n-2)/4} (1+r^2)^{-(n-2)/2} = 3^{1/4} (1+r^2)^{-1/2}
    CHECK_THAT(u.value(0.0), WithinRel(std::pow(3.0, 0.25), 1e-13));
    CHECK_THAT(u.value(1.0), WithinRel(std::pow(3.0, 0.25) / std::sqrt(2.0), 1e-13));
    REQUIRE(u.decay_power.has_value());
    CHECK_THAT(*u.decay_power, WithinAbs(1.0, 1e-13));
}

TEST_CASE("ckn extremal derived powers at a weighted point") {
    const auto u = ckn_extremal(4, 2.0, 0.5, 0.75);
    double E = 0, M = 0, c0 = 0;
    for (const auto& kv : u.params.values) {
        if (kv.first == "E") E = kv.second;
        if (kv.first == "M") M = kv.second;
        if (kv.first == "c0") c0 = kv.second;
    }
    CHECK_THAT(E, WithinRel(0.6, 1e-13));
    CHECK_THAT(M, WithinRel(5.0 / 3.0, 1e-13));
    CHECK_THAT(c0, WithinRel(std::pow(1.6, 5.0 / 6.0), 1e-13));
    REQUIRE(u.decay_power.has_value());
    CHECK_THAT(*u.decay_power, WithinAbs(1.0, 1e-12));  // (n-p-pa)/(p-1)
}

TEST_CASE("ckn extremal solves its equation pointwise") {
    // independent of the closed-form amplitudes above: plug into the operator
    struct Case { int n; double p, a, b; };
    for (const Case& c : {Case{3, 2.0, 0.0, 0.0}, Case{4, 2.0, 0.5, 0.75},
                          Case{5, 3.0, 0.0, 0.0}, Case{5, 3.0, 0.25, 0.75}}) {
        families::equation_family f;
        f.kind = families::family_kind::ckn;
        f.n = c.n;
        f.p = rat_from_double(c.p);
        f.a = rat_from_double(c.a);
        f.b = rat_from_double(c.b);
        const double q = rat_to_double(families::critical_exponent(f).value);
        const auto u = ckn_extremal(c.n, c.p, c.a, c.b);
        for (double r : {0.1, 0.7, 1.0, 3.0, 20.0}) {
            const double res = radial_ops::residual(f, u, q, r);
            const double scale = std::abs(radial_ops::apply(radial_ops::operator_for(f), u, r));
            CHECK(std::abs(res) <= 1e-9 * std::max(scale, 1e-30));
        }
    }
}

TEST_CASE("hessian shape constant and fast-profile amplitude") {
    CHECK(hessian_cstar(5, 2) == rat(5, 2));
    // q - k at the critical exponent: 2k(k+1)/(n-2k) = 12
    const auto u = hessian_fast(5, 2);
    CHECK_THAT(u.value(0.0), WithinRel(-std::pow(2.5, 1.0 / 12.0), 1e-13));
    CHECK(u.sign == sign_class::negative);
    REQUIRE(u.decay_power.has_value());
    CHECK_THAT(*u.decay_power, WithinAbs(0.5, 1e-14));  // (n-2k)/k

    CHECK(hessian_cstar(7, 3) == rat(1, 27) * (15 + 20));  // ((7-6)/3)^3 (C63+C62)... = 35/27
}

TEST_CASE("slow amplitude satisfies its exact power identity") {
    // C_A^{q-k} = beta^k (binom(n-1,k) - binom(n-1,k-1)(beta+1)), beta=2k/(q-k)
    CHECK(hessian_slow_amplitude_power(5, 2, rat(20)) == rat(40, 729));

    for (const auto& [n, k, q] : {std::tuple<int, int, int>{5, 2, 20},
                                  {7, 2, 9}, {7, 3, 30}, {9, 2, 8}}) {
        const rat qr(q);
        const rat beta = rat(2 * k) / (qr - k);
        const rat expect = rat_pow(beta, k) * (rat(binomial(n - 1, k)) -
                                               rat(binomial(n - 1, k - 1)) * (beta + 1));
        CHECK(hessian_slow_amplitude_power(n, k, qr) == expect);
        CHECK(expect > 0);  // amplitude well-defined above the threshold
    }

    // at or below the divergence threshold the construction is refused
    CHECK_THROWS_AS(hessian_slow_amplitude_power(5, 2, rat(10)), std::domain_error);
    CHECK_THROWS_AS(hessian_slow(5, 2, 9.0), std::domain_error);
}

TEST_CASE("slow profile matches its amplitude power numerically") {
    const auto u = hessian_slow(5, 2, 20.0);
    CHECK(u.singular_origin);
    REQUIRE(u.decay_power.has_value());
    CHECK_THAT(*u.decay_power, WithinRel(2.0 / 9.0, 1e-14));
    double CA = 0;
    for (const auto& kv : u.params.values)
        if (kv.first == "CA") CA = kv.second;
    CHECK_THAT(std::pow(CA, 18.0), WithinRel(40.0 / 729.0, 1e-12));
    // derivative closures against finite differences
    for (double r : {0.5, 1.0, 4.0}) {
        CHECK_THAT(u.deriv(r), WithinRel(fd1(u, r, 1e-5 * r), 1e-8));
        CHECK_THAT(u.deriv2(r), WithinRel(fd2(u, r, 1e-4 * r), 1e-6));
    }
}

TEST_CASE("scaled profile transforms value and derivatives consistently") {
    const auto u = hs_bubble(3, 0.0, 1.0, 1.0);
    const double mu = 2.5, sigma = 1.0;
    const auto v = scale_profile(u, mu, sigma);
    for (double r : {0.2, 1.0, 3.0}) {
        CHECK_THAT(v.value(r), WithinRel(std::pow(mu, sigma) * u.value(mu * r), 1e-14));
        CHECK_THAT(v.deriv(r), WithinRel(fd1(v, r, 1e-5), 1e-7));
        CHECK_THAT(v.deriv2(r), WithinRel(fd2(v, r, 1e-4), 1e-6));
    }
    CHECK(*v.decay_power == *u.decay_power);
}

TEST_CASE("amplitude fitting recovers catalog amplitudes") {
    // plain bubble: lambda * (1+r^2)^{-1/2} solves the n=3 critical equation
    // when lambda = 3^{1/4}
    families::equation_family le;
    le.kind = families::family_kind::lane_emden;
    le.n = 3;
    radial_profile shape = detail::power_bubble(1.0, 1.0, 0.5, 2.0);
    for (double anchor : {0.5, 1.0, 2.0}) {
        const double lam = fit_amplitude(le, shape, 5.0, anchor);
        CHECK_THAT(lam, WithinRel(std::pow(3.0, 0.25), 1e-12));
    }

    // hessian fast shape: lambda = C*^{1/(q-k)} = 2.5^{1/12}
    families::equation_family kh;
    kh.kind = families::family_kind::k_hessian;
    kh.n = 5;
    kh.k = 2;
    radial_profile neg_shape = detail::power_bubble(-1.0, 1.0, 0.25, 2.0);
    neg_shape.sign = sign_class::negative;
    for (double anchor : {0.3, 1.0, 4.0}) {
        const double lam = fit_amplitude(kh, neg_shape, 14.0, anchor);
        CHECK_THAT(lam, WithinRel(std::pow(2.5, 1.0 / 12.0), 1e-12));
    }

    // weighted family at t = 1, n = 3: -lap of (1+r)^{-1} is 2 r^{-1} (1+r)^{-3},
    // so lambda^{q-1} r^{-1} (1+r)^{-q} must match: at q = 3, lambda = sqrt(2)
    families::equation_family hs;
    hs.kind = families::family_kind::hardy_sobolev;
    hs.n = 3;
    hs.t = rat(1);
    radial_profile shape2 = detail::power_bubble(1.0, 1.0, 1.0, 1.0);
    const double lam2 = fit_amplitude(hs, shape2, 3.0, 0.8);
    CHECK_THAT(lam2, WithinRel(std::sqrt(2.0), 1e-12));
}

TEST_CASE("profile constructors validate their parameters") {
    CHECK_THROWS_AS(hs_bubble(2, 0.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(hs_bubble(3, 2.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(hs_bubble(3, 0.0, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(hls_bubble(3, 3.5, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ckn_extremal(3, 2.0, 0.6, 0.6), std::domain_error);  // a >= (n-p)/p
    CHECK_THROWS_AS(scale_profile(hs_bubble(3, 0.0, 1.0, 1.0), -1.0, 1.0),
                    std::domain_error);
}
