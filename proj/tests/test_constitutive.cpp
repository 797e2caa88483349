#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "forchheimer/constitutive.hpp"

using namespace forch;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
ForchheimerLaw two_term() { return parse_law("1+s"); }       // Forchheimer two-term
ForchheimerLaw three_term() { return parse_law("1+s+s^2"); } // three-term
}  // namespace

TEST_CASE("law parsing and validation") {
    auto law = two_term();
    REQUIRE(law.exponents == std::vector<double>{0.0, 1.0});
    REQUIRE(law.coefficients == std::vector<double>{1.0, 1.0});
    REQUIRE(law.degree() == 1.0);
    REQUIRE(law.degeneracy() == 0.5);

    auto law3 = three_term();
    REQUIRE(law3.degree() == 2.0);
    REQUIRE_THAT(law3.degeneracy(), WithinRel(2.0 / 3.0, 1e-15));

    auto frac = parse_law("2+0.5*s^1.5");
    REQUIRE(frac.exponents == std::vector<double>{0.0, 1.5});
    REQUIRE(frac.coefficients == std::vector<double>{2.0, 0.5});

    REQUIRE(parse_law(law_to_string(frac)).exponents == frac.exponents);

    REQUIRE_THROWS_AS(parse_law("s"), std::invalid_argument);      // a_0 = 0
    REQUIRE_THROWS_AS(parse_law("1"), std::invalid_argument);      // N = 0
    REQUIRE_THROWS_AS(parse_law(""), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_law("1+x"), std::invalid_argument);

    ForchheimerLaw bad;
    bad.exponents = {0.0, 1.0};
    bad.coefficients = {1.0, -1.0};
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("eval_g") {
    REQUIRE(eval_g(two_term(), 0.0) == 1.0);
    REQUIRE(eval_g(two_term(), 1.0) == 2.0);
    REQUIRE(eval_g(three_term(), 2.0) == 7.0);
    REQUIRE_THROWS_AS(eval_g(two_term(), -1.0), std::domain_error);

    // s^alpha at s = 0 is 0 for alpha > 0; the constant term carries g(0).
    auto frac = parse_law("2+3*s^0.5");
    REQUIRE(eval_g(frac, 0.0) == 2.0);
}

TEST_CASE("invert_sg closed forms") {
    auto law = two_term();
    REQUIRE(invert_sg(law, 0.0) == 0.0);
    REQUIRE_THAT(invert_sg(law, 2.0), WithinAbs(1.0, 1e-11));  // s + s^2 = 2
    REQUIRE_THAT(invert_sg(law, 6.0), WithinAbs(2.0, 1e-11));
    REQUIRE_THROWS_AS(invert_sg(law, -0.5), std::domain_error);
}

TEST_CASE("invert_sg residual property over a wide scan") {
    for (auto law : {two_term(), three_term(), parse_law("1+0.4*s^0.5+2*s^3")}) {
        double hint = -1.0;
        for (double xi : make_scan_grid(1e-8, 1e8, 400)) {
            const double s = invert_sg(law, xi, 1e-12, hint);
            hint = s;
            REQUIRE(std::abs(s * eval_g(law, s) - xi) <= 1e-10 * (1.0 + xi));
        }
    }
}

TEST_CASE("eval_K closed forms") {
    auto law = two_term();
    const auto k0 = eval_K(law, 0.0);
    REQUIRE(k0.K == 1.0);  // K(0) = 1/a_0
    REQUIRE(k0.Kprime * 0.0 == 0.0);

    const auto k2 = eval_K(law, 2.0);
    REQUIRE_THAT(k2.K, WithinAbs(0.5, 1e-12));
    REQUIRE_THAT(k2.Kprime, WithinAbs(-1.0 / 12.0, 1e-12));
    const double ratio = k2.Kprime * 2.0 / k2.K;
    REQUIRE_THAT(ratio, WithinAbs(-1.0 / 3.0, 1e-11));
    REQUIRE(ratio >= -law.degeneracy());
    REQUIRE(ratio <= 0.0);
}

TEST_CASE("K derivative matches central differences at order ~2") {
    for (auto law : {two_term(), three_term()}) {
        const double xi = 3.0;
        const double exact = eval_K(law, xi).Kprime;
        double prev_err = 0.0;
        int checked = 0;
        for (double h : {1e-2, 5e-3, 2.5e-3}) {
            const double fd = (eval_K(law, xi + h).K - eval_K(law, xi - h).K) / (2.0 * h);
            const double err = std::abs(fd - exact);
            if (checked > 0) {
                const double order = std::log2(prev_err / err);
                REQUIRE(order >= 1.9);
            }
            prev_err = err;
            ++checked;
        }
    }
}

TEST_CASE("eval_H closed form and sandwich") {
    auto law = two_term();
    REQUIRE(eval_H(law, 0.0) == 0.0);
    // integrand is sqrt(1+4 tau) - 1, antiderivative gives H(2) = 7/3
    REQUIRE_THAT(eval_H(law, 2.0), WithinAbs(7.0 / 3.0, 1e-9));

    const double K2 = eval_K(law, 2.0).K;
    const double H2 = eval_H(law, 2.0);
    REQUIRE(H2 >= K2 * 4.0 - 1e-9);
    REQUIRE(H2 <= 2.0 * K2 * 4.0 + 1e-9);
}

TEST_CASE("cumulative H matches pointwise H") {
    auto law = three_term();
    std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 5.0, 25.0};
    const auto H = cumulative_H(law, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        REQUIRE_THAT(H[k], WithinAbs(eval_H(law, grid[k]), 1e-8));
}

TEST_CASE("verify_constitutive clean scan") {
    auto grid = make_scan_grid(1e-6, 1e6, 2000);
    for (auto law : {two_term(), three_term()}) {
        const auto rep = verify_constitutive(law, grid);
        CAPTURE(law_to_string(law));
        for (const auto& v : rep.violations) { CAPTURE(v.xi, v.check, v.residual); }
        REQUIRE(rep.ok());
        REQUIRE(rep.fitted_C1 <= rep.fitted_C2);
        REQUIRE(rep.fitted_C1 > 0.0);
        REQUIRE(rep.fitted_C3 > 0.0);
    }
}

TEST_CASE("K monotone decreasing, s monotone increasing") {
    auto law = parse_law("1+0.2*s^0.7+s^2");
    double prevK = 2.0, prevS = -1.0, hint = -1.0;
    for (double xi : make_scan_grid(1e-4, 1e4, 300)) {
        const auto kv = eval_K(law, xi, 1e-12, hint);
        hint = kv.s;
        REQUIRE(kv.K < prevK);
        REQUIRE(kv.s > prevS);
        prevK = kv.K;
        prevS = kv.s;
    }
}

TEST_CASE("envelope is pinched for the two-term law") {
    // K(xi)(1+xi)^{1/2} stays within fitted bounds away from zero.
    auto law = two_term();
    const auto rep = verify_constitutive(law, make_scan_grid(1e-3, 1e5, 500));
    const double a = law.degeneracy();
    for (double xi : {0.1, 1.0, 10.0, 1e3}) {
        const double env = eval_K(law, xi).K * std::pow(1.0 + xi, a);
        REQUIRE(env >= rep.fitted_C1 - 1e-12);
        REQUIRE(env <= rep.fitted_C2 + 1e-12);
    }
}
