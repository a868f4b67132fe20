#include <catch2/catch_amalgamated.hpp>

#include "critex/families.hpp"

#include <optional>
#include <random>

using namespace critex;
using namespace critex::families;

namespace {

equation_family make(family_kind kind, int n) {
    equation_family f;
    f.kind = kind;
    f.n = n;
    return f;
}

// random small rational in (lo, hi), exact
rat random_rat(std::mt19937& rng, const rat& lo, const rat& hi) {
    std::uniform_int_distribution<int> den_d(1, 12);
    const int den = den_d(rng);
    const long nlo = static_cast<long>(rat_to_double(lo * den)) + 1;
    const long nhi = static_cast<long>(rat_to_double(hi * den)) - 1;
    if (nhi < nlo) return (lo + hi) / 2;
    std::uniform_int_distribution<long> num_d(nlo, nhi);
    return rat(num_d(rng), den);
}

} // namespace

TEST_CASE("critical exponents at hand-checked points") {
    CHECK(critical_exponent(make(family_kind::lane_emden, 3)).value == rat(5));
    CHECK(critical_exponent(make(family_kind::lane_emden, 5)).value == rat(7, 3));
    CHECK(critical_exponent(make(family_kind::lane_emden, 6)).value == rat(2));

    auto hs = make(family_kind::hardy_sobolev, 3);
    hs.t = rat(1);
    CHECK(critical_exponent(hs).value == rat(3));
    hs.t = rat(1, 2);
    CHECK(critical_exponent(hs).value == rat(4));

    auto kh = make(family_kind::k_hessian, 5);
    kh.k = 2;
    CHECK(critical_exponent(kh).value == rat(14));
    CHECK(serrin_exponent(kh) == rat(10));
    auto kh7 = make(family_kind::k_hessian, 7);
    kh7.k = 2;
    CHECK(critical_exponent(kh7).value == rat(6));
    CHECK(serrin_exponent(kh7) == rat(14, 3));

    auto ckn = make(family_kind::ckn, 3);
    ckn.p = rat(2);
    CHECK(critical_exponent(ckn).value == rat(5));  // reduces to the plain case
    auto ckn2 = make(family_kind::ckn, 4);
    ckn2.p = rat(2);
    ckn2.a = rat(1, 2);
    ckn2.b = rat(3, 4);
    CHECK(critical_exponent(ckn2).value == rat(11, 5));  // 2.2

    auto bs = make(family_kind::bessel_single, 3);
    bs.alpha = rat(2);
    CHECK(critical_exponent(bs).value == rat(5));

    auto hss = make(family_kind::hardy_sobolev_system, 5);
    hss.l = 1;
    CHECK(critical_exponent(hss).kind == critical_target::form::linear_condition);
    CHECK(critical_exponent(hss).value == rat(3, 5));

    auto wh = make(family_kind::whls, 3);
    wh.alpha = rat(2);
    CHECK(critical_exponent(wh).value == rat(1, 3));

    auto bsys = make(family_kind::bessel_system, 3);
    bsys.alpha = rat(2);
    CHECK(critical_exponent(bsys).value == rat(1, 3));

    auto cs = make(family_kind::ckn_system, 4);
    cs.p = rat(2);
    CHECK(critical_exponent(cs).kind == critical_target::form::linear_condition);
    CHECK(critical_exponent(cs).value == rat(1, 2));  // (4-2)/4

    auto cs3 = make(family_kind::ckn_system, 5);
    cs3.p = rat(3);
    CHECK(critical_exponent(cs3).kind == critical_target::form::diagonal_only);
    CHECK(critical_exponent(cs3).value == rat(13, 2));  // 15/2 - 1
}

TEST_CASE("validation produces one violation per failed bound") {
    auto f = make(family_kind::ckn, 3);
    f.p = rat(1, 2);  // p <= 1
    f.a = rat(-1);    // a < 0
    f.b = rat(-3);    // b < a
    const auto v = validate(f);
    CHECK(v.size() == 3);

    auto hs = make(family_kind::hardy_sobolev, 3);
    hs.t = rat(2);
    CHECK(validate(hs).size() == 1);
    hs.t = rat(0);  // boundary t = 0 is accepted
    CHECK(validate(hs).empty());

    auto kh = make(family_kind::k_hessian, 4);
    kh.k = 2;  // k < n/2 fails
    CHECK(validate(kh).size() == 1);

    auto wh = make(family_kind::whls, 3);
    wh.alpha = rat(2);
    wh.beta1 = rat(3, 2);
    wh.beta2 = rat(1);  // sum exceeds alpha
    CHECK(validate(wh).size() == 1);
}

TEST_CASE("classification signs at hand-checked points") {
    const auto le3 = make(family_kind::lane_emden, 3);
    auto c = classify(le3, rat(3));
    CHECK(c.reg == regime::subcritical);
    CHECK(c.defect == rat(-1, 2));
    c = classify(le3, rat(5));
    CHECK(c.reg == regime::critical);
    CHECK(c.defect == 0);
    c = classify(le3, rat(7));
    CHECK(c.reg == regime::supercritical);

    auto kh = make(family_kind::k_hessian, 5);
    kh.k = 2;
    CHECK(classify(kh, rat(10)).reg == regime::subcritical);  // below 14
    CHECK(classify(kh, rat(14)).reg == regime::critical);
    CHECK(classify(kh, rat(20)).reg == regime::supercritical);

    auto bs = make(family_kind::bessel_single, 3);
    bs.alpha = rat(2);
    CHECK(classify(bs, rat(3)).reg == regime::subcritical);  // admissible
    CHECK(classify(bs, rat(3)).defect == rat(-1, 2));
    CHECK(classify(bs, rat(5)).reg == regime::critical);     // boundary, excluded
    CHECK(classify(bs, rat(9)).reg == regime::supercritical);

    auto hss = make(family_kind::hardy_sobolev_system, 5);
    CHECK(classify(hss, rat(2), rat(2)).reg == regime::subcritical);
    CHECK(classify(hss, rat(7, 3), rat(7, 3)).reg == regime::critical);
    CHECK(classify(hss, rat(4), rat(4)).reg == regime::supercritical);
}

TEST_CASE("hardy-sobolev at t = 0 coincides with the unweighted family") {
    std::mt19937 rng(20240817u);
    for (int i = 0; i < 200; ++i) {
        std::uniform_int_distribution<int> nd(3, 10);
        const int n = nd(rng);
        auto hs = make(family_kind::hardy_sobolev, n);
        hs.t = rat(0);
        const auto le = make(family_kind::lane_emden, n);
        CHECK(critical_exponent(hs).value == critical_exponent(le).value);
        const rat q = random_rat(rng, rat(3, 2), rat(8));
        CHECK(classify(hs, q).defect == classify(le, q).defect);
    }
}

TEST_CASE("classify at the critical exponent gives exactly zero defect") {
    std::mt19937 rng(123456u);
    std::uniform_int_distribution<int> nd(3, 12);

    for (int i = 0; i < 1000; ++i) {
        const int n = nd(rng);

        auto le = make(family_kind::lane_emden, n);
        CHECK(classify(le, critical_exponent(le).value).defect == 0);

        auto hs = make(family_kind::hardy_sobolev, n);
        hs.t = random_rat(rng, rat(0), rat(2));
        CHECK(classify(hs, critical_exponent(hs).value).defect == 0);

        auto ckn = make(family_kind::ckn, n);
        ckn.p = random_rat(rng, rat(1), rat(n));
        const rat amax = (rat(n) - ckn.p) / ckn.p;
        if (amax > 0) {
            ckn.a = random_rat(rng, rat(0), amax);
            ckn.b = ckn.a + random_rat(rng, rat(0), rat(1));
            if (validate(ckn).empty()) {
                const auto tgt = critical_exponent(ckn);
                if (tgt.value > 1)
                    CHECK(classify(ckn, tgt.value).defect == 0);
            }
        }

        if (n >= 5) {
            auto kh = make(family_kind::k_hessian, n);
            std::uniform_int_distribution<int> kd(2, (n - 1) / 2);
            kh.k = kd(rng);
            CHECK(classify(kh, critical_exponent(kh).value).defect == 0);
        }

        auto bs = make(family_kind::bessel_single, n);
        bs.alpha = random_rat(rng, rat(0), rat(n));
        if (validate(bs).empty())
            CHECK(classify(bs, critical_exponent(bs).value).defect == 0);
    }
}

TEST_CASE("system condition: solving for q2 on the hyperplane zeroes the defect") {
    std::mt19937 rng(777u);
    std::uniform_int_distribution<int> nd(3, 12);
    int tested = 0;
    for (int i = 0; i < 1000 && tested < 400; ++i) {
        const int n = nd(rng);
        auto hss = make(family_kind::hardy_sobolev_system, n);
        hss.l = 1;
        if (n <= 2) continue;
        hss.t = random_rat(rng, rat(0), rat(2));
        const rat A = critical_exponent(hss).value;
        const rat q1 = random_rat(rng, rat(3, 2), rat(9));
        const rat rem = A - rat(1) / (q1 + 1);
        if (rem <= 0) continue;
        const rat q2 = rat(1) / rem - 1;
        if (q2 <= 1) continue;
        CHECK(classify(hss, q1, q2).defect == 0);
        ++tested;
    }
    CHECK(tested >= 100);
}

TEST_CASE("system diagonal matches the single-equation critical exponent") {
    // second-order system with no weight: diagonal of the hyperplane equals
    // the scalar critical exponent
    for (int n = 3; n <= 10; ++n) {
        auto hss = make(family_kind::hardy_sobolev_system, n);
        hss.l = 1;
        hss.t = rat(0);
        const rat A = critical_exponent(hss).value;
        const rat qd = rat(2) / A - 1;  // 2/(q+1) = A
        CHECK(qd == critical_exponent(make(family_kind::lane_emden, n)).value);

        auto cs = make(family_kind::ckn_system, n);
        cs.p = rat(2);
        const rat Ac = critical_exponent(cs).value;
        CHECK(rat(2) / Ac - 1 ==
              critical_exponent(make(family_kind::lane_emden, n)).value);
    }
}

TEST_CASE("scaling exponents agree exactly iff the exponent is critical") {
    std::mt19937 rng(424242u);
    std::uniform_int_distribution<int> nd(3, 10);
    for (int i = 0; i < 300; ++i) {
        const int n = nd(rng);

        auto le = make(family_kind::lane_emden, n);
        const rat qc = critical_exponent(le).value;
        auto sc = scaling_exponents(le, qc);
        CHECK(sc.first.equation_sigma == sc.first.energy_sigma);
        const rat qoff = qc + rat(1, 7);
        sc = scaling_exponents(le, qoff);
        CHECK(sc.first.equation_sigma != sc.first.energy_sigma);

        auto hs = make(family_kind::hardy_sobolev, n);
        hs.t = random_rat(rng, rat(0), rat(2));
        const rat qhs = critical_exponent(hs).value;
        sc = scaling_exponents(hs, qhs);
        CHECK(sc.first.equation_sigma == sc.first.energy_sigma);

        if (n >= 5) {
            auto kh = make(family_kind::k_hessian, n);
            kh.k = 2;
            const rat qk = critical_exponent(kh).value;
            sc = scaling_exponents(kh, qk);
            CHECK(sc.first.equation_sigma == sc.first.energy_sigma);
        }
    }
}

TEST_CASE("system scaling exponents agree on the critical hyperplane") {
    std::mt19937 rng(999u);
    int tested = 0;
    for (int i = 0; i < 500 && tested < 150; ++i) {
        std::uniform_int_distribution<int> nd(3, 10);
        const int n = nd(rng);
        auto wh = make(family_kind::whls, n);
        wh.alpha = random_rat(rng, rat(1, 2), rat(n));
        wh.beta1 = rat(0);
        wh.beta2 = rat(0);
        if (!validate(wh).empty()) continue;
        const rat A = critical_exponent(wh).value;
        const rat q1 = random_rat(rng, rat(3, 2), rat(9));
        const rat rem = A - rat(1) / (q1 + 1);
        if (rem <= 0) continue;
        const rat q2 = rat(1) / rem - 1;
        if (q2 <= 1) continue;
        const auto sc = scaling_exponents(wh, q1, q2);
        CHECK(sc.first.equation_sigma == sc.first.energy_sigma);
        REQUIRE(sc.second.has_value());
        CHECK(sc.second->equation_sigma == sc.second->energy_sigma);
        ++tested;
    }
    CHECK(tested >= 50);
}

TEST_CASE("nonlocal families refuse scaling exponents") {
    auto bs = make(family_kind::bessel_single, 3);
    bs.alpha = rat(2);
    CHECK_THROWS_AS(scaling_exponents(bs, rat(3)), unsupported_family);
}

TEST_CASE("ckn-system invariance case analysis") {
    // p = 2: hyperplane residual, exact
    auto r = ckn_system_invariance(4, rat(2), rat(0), rat(0), rat(3), rat(3));
    CHECK(r.tag == ckn_invariance_result::case_tag::hyperplane_p2);
    CHECK(r.invariant);
    CHECK(r.residual == 0);

    r = ckn_system_invariance(4, rat(2), rat(0), rat(0), rat(3), rat(4));
    CHECK(!r.invariant);
    CHECK(r.residual == rat(1, 4) + rat(1, 5) - rat(1, 2));

    // p != 2 diagonal: q* = np/(n-p+p(b-a)) - 1
    r = ckn_system_invariance(5, rat(3), rat(0), rat(0), rat(13, 2), rat(13, 2));
    CHECK(r.tag == ckn_invariance_result::case_tag::diagonal);
    CHECK(r.invariant);
    REQUIRE(r.qstar.has_value());
    CHECK(*r.qstar == rat(13, 2));

    r = ckn_system_invariance(5, rat(3), rat(0), rat(0), rat(6), rat(6));
    CHECK(r.tag == ckn_invariance_result::case_tag::diagonal);
    CHECK(!r.invariant);

    // p != 2 off the diagonal: never invariant, witness (q1-q2)(p-2)
    r = ckn_system_invariance(5, rat(3), rat(0), rat(0), rat(4), rat(6));
    CHECK(r.tag == ckn_invariance_result::case_tag::none);
    CHECK(!r.invariant);
    CHECK(r.residual == rat(-2));
}

TEST_CASE("bessel margins") {
    CHECK(bessel_margin(3, rat(2), rat(3)) == rat(-1, 2));   // admissible
    CHECK(bessel_margin(3, rat(2), rat(5)) == rat(0));       // boundary
    CHECK(bessel_margin(3, rat(2), rat(9)) == rat(2, 5));    // excluded

    CHECK(bessel_system_margin(3, rat(2), rat(2), rat(2)) == rat(1));
    // on the boundary hyperplane the margin vanishes
    CHECK(bessel_system_margin(3, rat(2), rat(5), rat(5)) == rat(0));
}

TEST_CASE("systems demand two exponents, scalars exactly one") {
    auto hss = make(family_kind::hardy_sobolev_system, 5);
    CHECK_THROWS_AS(classify(hss, rat(2)), std::domain_error);
    const auto le = make(family_kind::lane_emden, 3);
    CHECK_THROWS_AS(classify(le, rat(2), rat(2)), std::domain_error);
    CHECK_THROWS_AS(classify(le, rat(1)), std::domain_error);  // q must exceed 1
}

TEST_CASE("ckn-system with p != 2 classifies only on the diagonal") {
    auto cs = make(family_kind::ckn_system, 5);
    cs.p = rat(3);
    CHECK(classify(cs, rat(13, 2), rat(13, 2)).defect == 0);
    CHECK_THROWS_AS(classify(cs, rat(4), rat(6)), std::domain_error);
}

TEST_CASE("degenerate ckn-system denominator is reported") {
    auto cs = make(family_kind::ckn_system, 3);
    cs.p = rat(4);
    cs.a = rat(0);
    cs.b = rat(0);  // n - p + p(b-a) = -1
    CHECK_THROWS_WITH(critical_exponent(cs),
                      Catch::Matchers::ContainsSubstring("must be positive"));
}
