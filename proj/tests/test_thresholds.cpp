// Closed-form calculators: thresholds, exponents, Gronwall recursion.

#include <catch2/catch_amalgamated.hpp>

#include "gzk/thresholds.hpp"

using namespace gzk;

TEST_CASE("rational arithmetic") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(4) * (Rational(1) - Rational(9, 16))) == Rational(7, 4));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(1, -2).str() == "-1/2");
    CHECK(parse_rational("11/13") == Rational(11, 13));
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("GWP thresholds are the exact rationals of the theorems") {
    CHECK(*thresholds(1, Domain::cylinder, Rational(9, 10)).gwp_threshold == Rational(11, 13));
    CHECK(*thresholds(2, Domain::cylinder, Rational(4, 5)).gwp_threshold == Rational(36, 49));
    CHECK(*thresholds(2, Domain::plane, Rational(4, 5)).gwp_threshold == Rational(2, 3));
}

TEST_CASE("epsilon-tilde threshold formulas") {
    // ZK: s > (11 + 4e)/(13 - 4e); at e = 0 this is 11/13
    CHECK(*thresholds(1, Domain::cylinder, Rational(9, 10), Rational(0)).epsilon_threshold == Rational(11, 13));
    CHECK(*thresholds(1, Domain::cylinder, Rational(9, 10), Rational(1, 100)).epsilon_threshold ==
          Rational(11 * 100 + 4, 13 * 100 - 4));
    // mZK cylinder: s > 3/(49/12 - e) = 36/(49 - 12e)
    CHECK(*thresholds(2, Domain::cylinder, Rational(4, 5), Rational(0)).epsilon_threshold == Rational(36, 49));
    CHECK(*thresholds(2, Domain::cylinder, Rational(4, 5), Rational(1, 12)).epsilon_threshold == Rational(36, 48));
    // mZK plane: s > 3/(9/2 - e) = 6/(9 - 2e)
    CHECK(*thresholds(2, Domain::plane, Rational(4, 5), Rational(0)).epsilon_threshold == Rational(2, 3));
    CHECK(*thresholds(2, Domain::plane, Rational(4, 5), Rational(1, 2)).epsilon_threshold == Rational(6, 8));
}

TEST_CASE("lambda, N(T), and growth exponents") {
    // ZK at s = 9/10
    auto zk = thresholds(1, Domain::cylinder, Rational(9, 10));
    CHECK(*zk.lambda_exponent == Rational(1, 19));                 // (1-s)/(1+s)
    CHECK(*zk.N_of_T_exponent == Rational(4 * 19, 10) / Rational(7, 10));  // 4(1+s)/(13s-11)
    CHECK(*zk.N_of_T_exponent == Rational(76, 7));
    CHECK(*zk.growth_exponent == Rational(38, 35));               // 4(1-s^2)/(13s-11)
    // mZK cylinder at s = 4/5
    auto mc = thresholds(2, Domain::cylinder, Rational(4, 5));
    CHECK(*mc.lambda_exponent == Rational(1, 4));                  // (1-s)/s
    CHECK(*mc.N_of_T_exponent == Rational(12, 1) * Rational(4, 5) / Rational(16, 5));
    CHECK(*mc.N_of_T_exponent == Rational(3));
    CHECK(*mc.growth_exponent == Rational(3, 5));                 // 12s(1-s)/(49s-36)
    // mZK plane at s = 4/5
    auto mp = thresholds(2, Domain::plane, Rational(4, 5));
    CHECK(*mp.N_of_T_exponent == Rational(2, 1) * Rational(4, 5) / Rational(6, 5));
    CHECK(*mp.N_of_T_exponent == Rational(4, 3));
    CHECK(*mp.growth_exponent == Rational(4, 15));                // 2s(1-s)/(3(3s-2))
}

TEST_CASE("growth exponents diverge toward the threshold") {
    double prev = 0.0;
    for (long long d : {100, 1000, 10000, 100000}) {
        // s = 11/13 + 1/d, approaching from above
        const Rational s = Rational(11, 13) + Rational(1, d);
        const double g = thresholds(1, Domain::cylinder, s).growth_exponent->value();
        CHECK(g > prev);
        prev = g;
    }
    CHECK(prev > 1e3);
}

TEST_CASE("s at or below the threshold is rejected with the threshold named") {
    CHECK_THROWS_WITH(thresholds(1, Domain::cylinder, Rational(11, 13)),
                      Catch::Matchers::ContainsSubstring("11/13"));
    CHECK_THROWS_WITH(thresholds(2, Domain::cylinder, Rational(1, 2)),
                      Catch::Matchers::ContainsSubstring("36/49"));
    CHECK_THROWS_WITH(thresholds(2, Domain::plane, Rational(3, 5)),
                      Catch::Matchers::ContainsSubstring("2/3"));
}

TEST_CASE("alpha(k,s) and the interpolation exponents theta") {
    auto a12 = thresholds(1, Domain::cylinder, Rational(2));
    CHECK(*a12.alpha_growth == Rational(4));        // 4(s-1) at s=2
    CHECK(*a12.theta_interpolation == Rational(1, 4));
    auto a34 = thresholds(3, Domain::cylinder, Rational(4));
    CHECK(*a34.alpha_growth == Rational(3));        // s-1 at s=4
    CHECK(*a34.theta_interpolation == Rational(1, 3));
    auto a22 = thresholds(2, Domain::cylinder, Rational(2));
    CHECK(*a22.alpha_growth == Rational(1));
    CHECK(*a22.theta_interpolation == Rational(1));
    // theta = 1/(4(s-1)) for k=1
    auto a16 = thresholds(1, Domain::cylinder, Rational(6));
    CHECK(*a16.theta_interpolation == Rational(1, 20));
}

TEST_CASE("gronwall_check") {
    SECTION("bound holds for (eps, d) = (1/2, 2.1)") {
        GronwallReport rep = gronwall_check(1.0, 0.5, 0.0, 100000, 2.1);
        CHECK(rep.bound_holds);
        CHECK(rep.stabilized);
        CHECK(std::isfinite(rep.K2));
        CHECK(std::abs(rep.empirical_exponent - 2.0) <= 0.1);
    }
    SECTION("bound holds for (eps, d) = (1/4, 4.1)") {
        GronwallReport rep = gronwall_check(1.0, 0.25, 0.0, 100000, 4.1);
        CHECK(rep.bound_holds);
        CHECK(std::abs(rep.empirical_exponent - 4.0) <= 0.2);
    }
    SECTION("negative control d = 1/eps - 0.5 diverges") {
        GronwallReport rep = gronwall_check(1.0, 0.5, 0.0, 100000, 1.5);
        CHECK_FALSE(rep.bound_holds);
        CHECK(rep.K2 > 1.5 * rep.K2_half_history);  // still growing at M
    }
    SECTION("empirical exponent approaches 1/eps from below") {
        double prev = 0.0;
        for (long M : {1000L, 10000L, 100000L}) {
            GronwallReport rep = gronwall_check(1.0, 0.5, 0.0, M, 2.1);
            CHECK(rep.empirical_exponent > prev);
            CHECK(rep.empirical_exponent < 2.0);
            prev = rep.empirical_exponent;
        }
    }
    SECTION("domain validation") {
        CHECK_THROWS_AS(gronwall_check(0.0, 0.5, 0.0, 1000, 2.1), std::invalid_argument);
        CHECK_THROWS_AS(gronwall_check(1.0, 1.5, 0.0, 1000, 2.1), std::invalid_argument);
    }
}
