#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlslab/error.hpp"
#include "nlslab/params.hpp"

#include <cmath>
#include <limits>

using namespace nlslab;

TEST_CASE("regime examples") {
    auto r = validate_regime({3, -0.2, 2, -1});
    CHECK(r.hardy_ok);
    CHECK(r.intercritical_ok);
    CHECK(r.main_theorem_ok);
    CHECK(r.critical_lwp_ok);
    CHECK(r.exact);

    r = validate_regime({3, -0.25, 2, -1});
    CHECK_FALSE(r.hardy_ok);
    CHECK_FALSE(r.main_theorem_ok);
    bool boundary_msg = false;
    for (const auto& m : r.messages) boundary_msg |= m.find("boundary") != std::string::npos;
    CHECK(boundary_msg);

    // -1 + (1 - 2/3)^2 = -8/9 > -0.9
    r = validate_regime({4, -0.9, 1.5, 1});
    CHECK(r.hardy_ok);
    CHECK(r.intercritical_ok);
    CHECK_FALSE(r.main_theorem_ok);
    CHECK_FALSE(r.messages.empty());
}

TEST_CASE("unsupported dimension is its own error") {
    try {
        validate_regime({7, 0, 1, -1});
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedDimension);
    }
    CHECK_THROWS_AS(validate_regime({2, 0, 3, -1}), UnsupportedDimension);
}

TEST_CASE("main_theorem_ok implies hardy and intercritical, monotone in a") {
    for (int d = 3; d <= 6; ++d)
        for (double al : {0.7, 0.9, 1.0, 1.2, 1.5, 2.0, 2.5, 3.0})
            for (int i = -40; i <= 10; ++i) {
                const double a = 0.05 * i;
                auto r = validate_regime({d, a, al, -1});
                if (r.main_theorem_ok) {
                    CHECK(r.hardy_ok);
                    CHECK(r.intercritical_ok);
                    CHECK(validate_regime({d, a + 0.05, al, -1}).main_theorem_ok);
                }
            }
}

TEST_CASE("exponents d=3 alpha=2") {
    auto e = exponents({3, 0, 2, -1});
    CHECK(e.s_c == doctest::Approx(0.5));
    CHECK(e.sigma == doctest::Approx(1.0));
    CHECK(e.q0 == doctest::Approx(5.0));
    CHECK(e.r0 == doctest::Approx(30.0 / 11.0));
    CHECK(e.rho_heat == 0.0);
    auto q = q0_r0_exact(3, 2.0);
    REQUIRE(q);
    CHECK(to_string(q->q) == "5");
    CHECK(to_string(q->r) == "30/11");
    CHECK(is_admissible(q->q, q->r, 3));
}

TEST_CASE("rho_heat") {
    CHECK(rho_heat(3, -3.0 / 16.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(exponents({3, 0, 2, 1}).rho_heat == 0.0);
    CHECK(rho_heat(3, 0.5) < 0);
}

TEST_CASE("admissible pairs and exponent invariants") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(is_admissible(inf, 2.0, 3));
    CHECK_FALSE(is_admissible(4.0, 4.0, 3));
    CHECK_FALSE(is_admissible(2.0, 2.0, 2));
    CHECK(is_admissible(2.0, 6.0, 3));
    for (int d = 3; d <= 6; ++d)
        for (double al : {0.9, 1.0, 1.25, 1.5, 2.0, 2.5}) {
            if (!(al > 4.0 / d && al < 4.0 / (d - 2))) continue;
            auto q = q0_r0_exact(d, al);
            REQUIRE(q);
            CHECK(is_admissible(q->q, q->r, d));
            // dual pair: 1/rho' + ... checked in the rational form 2/rho + d/gamma = d/2 + 2
            auto dp = dual_pair_exact(d, al);
            REQUIRE(dp);
            CHECK(Rational(2) / dp->q + Rational(d) / dp->r == Rational(d, 2) + 2);
            // independent of a
            auto e1 = exponents({d, 0.0, al, -1});
            auto e2 = exponents({d, 0.3, al, 1});
            CHECK(e1.s_c == e2.s_c);
            CHECK(e1.q0 == e2.q0);
            CHECK(e1.r0 == e2.r0);
        }
}

TEST_CASE("sobolev equivalence ranges") {
    auto iv = sobolev_equiv_range(1.0, {3, 0, 2, -1}, Direction::Forward);
    CHECK(iv.lo == doctest::Approx(1.0 / 3.0));
    CHECK(iv.hi == doctest::Approx(1.0));

    iv = sobolev_equiv_range(0.5, {3, -3.0 / 16.0, 2, -1}, Direction::Forward);
    CHECK(iv.lo == doctest::Approx(0.25));
    CHECK(iv.hi == doctest::Approx(11.0 / 12.0));

    // rho_heat = 0.2: 1/2 - sqrt(1/4 + a) = 0.2 gives a = 0.09 - 0.25
    iv = sobolev_equiv_range(1.9, {3, 0.09 - 0.25, 2, -1}, Direction::Forward);
    CHECK(iv.lo == doctest::Approx(0.7));
    CHECK(iv.hi == doctest::Approx(14.0 / 15.0));
    CHECK_FALSE(iv.empty());

    iv = sobolev_equiv_range(0.5, {3, -3.0 / 16.0, 2, -1}, Direction::Reverse);
    CHECK(iv.lo == doctest::Approx(1.0 / 6.0));
    CHECK_THROWS_AS(sobolev_equiv_range(2.0, {3, 0, 2, -1}, Direction::Forward), ConfigError);
}

TEST_CASE("exact decimals") {
    auto x = exact_decimal(-0.2);
    REQUIRE(x);
    CHECK(*x == Rational(-1, 5));
    CHECK_FALSE(exact_decimal(1.0 / 3.0));
    auto r = validate_regime({3, 1.0 / 3.0 - 0.5, 2, -1});
    CHECK_FALSE(r.exact);
    CHECK(r.main_theorem_ok);
}

TEST_CASE("a_eff") {
    CHECK(a_eff(5, 0.0) == 2.0);
    CHECK(a_eff(3, -0.2) == -0.2);
    CHECK(hardy_constant(4) == 1.0);
}
