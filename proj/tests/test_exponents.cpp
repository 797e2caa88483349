#include <catch2/catch_amalgamated.hpp>

#include <boost/rational.hpp>
#include <cmath>

#include "forchheimer/constitutive.hpp"
#include "forchheimer/exponents.hpp"

using namespace forch;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent exact-fraction evaluation of the whole table, used as an
// oracle when (n, a, alpha, s0) are rational.
using Rat = boost::rational<long long>;

struct RatTable {
    Rat a, alpha, s0;
    Rat alpha_star, r0, kappa0, delta1, delta2, kappa1, kappa2;
    Rat s0_star, s1, nu2, nu3, s2, s3, nu4, s4;
    Rat kappa3, kappa4, kappa5, kappa6, kappa7, kappa8, kappa9, kappa10, kappa11, kappa12;
};

RatTable rational_table(long long n, Rat a, Rat alpha, Rat s0) {
    RatTable t;
    t.a = a;
    t.alpha = alpha;
    t.s0 = s0;
    const Rat two(2), one(1);
    t.alpha_star = a * n / (two - a);
    t.r0 = Rat(n) * (two - a) / ((two - a) * (n + 1) - n);
    t.kappa0 = alpha * (one + (two - a) / n) - a;
    t.delta1 = one - alpha / t.kappa0;
    t.delta2 = (one - a / alpha) * (one - t.alpha_star / alpha);
    t.kappa1 = one / t.delta1;
    t.kappa2 = one / t.delta2;
    t.s0_star = Rat(n) * s0 / (Rat(n) - s0);
    t.s1 = one / (one - two / t.s0_star);
    t.nu2 = Rat(4) * (one - one / t.s0_star);
    t.nu3 = one - two / t.nu2;
    t.s2 = std::max(two, a * s0 / (two - s0));
    t.s3 = t.s1 * (two - s0) / s0 + one;
    t.nu4 = t.s3 - one;
    t.s4 = a * t.s3 + one;
    t.kappa3 = (t.s2 + a - two) * (one + two * t.kappa1 / (alpha - a));
    t.kappa4 = one + t.s1 + t.kappa3 * t.s3;
    t.kappa5 = t.kappa2 * (t.s2 - two + a);
    t.kappa6 = one + t.s1 + t.kappa3 * (t.s3 - one);
    t.kappa7 = (t.s3 - one) * (t.kappa5 + one) + one;
    t.kappa8 = (t.s3 - one) * t.kappa5;
    t.kappa9 = (t.s3 - one) * (t.kappa5 + alpha / 2) + alpha / 2;
    t.kappa10 = a * t.kappa4 + one;
    t.kappa11 = a * t.s3 * (t.kappa5 + alpha / 2) + alpha / 2;
    t.kappa12 = a * t.s3 * t.kappa5 + alpha / 2;
    return t;
}

double val(Rat r) { return double(r.numerator()) / double(r.denominator()); }

void compare(const ExponentTable& t, const RatTable& r) {
    auto close = [](double x, double y) {
        REQUIRE_THAT(x, WithinRel(y, 1e-12) || WithinAbs(y, 1e-14));
    };
    close(t.alpha_star, val(r.alpha_star));
    close(t.r0, val(r.r0));
    close(t.kappa0, val(r.kappa0));
    close(t.delta1, val(r.delta1));
    close(t.delta2, val(r.delta2));
    close(t.kappa1, val(r.kappa1));
    close(t.kappa2, val(r.kappa2));
    close(t.s0_star, val(r.s0_star));
    close(t.s1, val(r.s1));
    close(t.nu2, val(r.nu2));
    close(t.nu3, val(r.nu3));
    close(t.s2, val(r.s2));
    close(t.s3, val(r.s3));
    close(t.nu4, val(r.nu4));
    close(t.s4, val(r.s4));
    close(t.kappa3, val(r.kappa3));
    close(t.kappa4, val(r.kappa4));
    close(t.kappa5, val(r.kappa5));
    close(t.kappa6, val(r.kappa6));
    close(t.kappa7, val(r.kappa7));
    close(t.kappa8, val(r.kappa8));
    close(t.kappa9, val(r.kappa9));
    close(t.kappa10, val(r.kappa10));
    close(t.kappa11, val(r.kappa11));
    close(t.kappa12, val(r.kappa12));
}

}  // namespace

TEST_CASE("sobolev conjugate and rho") {
    REQUIRE_THAT(sobolev_conjugate(1.5, 2), WithinRel(6.0, 1e-15));
    REQUIRE_THAT(rho_of(1.5, 2), WithinRel(10.0 / 3.0, 1e-15));
    REQUIRE_THAT(sobolev_conjugate(1.0, 2), WithinRel(2.0, 1e-15));
    REQUIRE_THAT(rho_of(1.0, 2), WithinRel(2.0, 1e-15));
    REQUIRE_THROWS_AS(sobolev_conjugate(2.0, 2), std::domain_error);
    REQUIRE_THROWS_AS(sobolev_conjugate(3.5, 3), std::domain_error);
}

TEST_CASE("reference table for n=2, two-term law, alpha=2, s0=1.5") {
    const auto law = parse_law("1+s");
    const auto t = build_table(2, law, 2.0, 1.5);

    auto close = [](double x, double y) { REQUIRE_THAT(x, WithinAbs(y, 1e-12)); };
    close(t.a, 0.5);
    close(t.alpha_star, 2.0 / 3.0);
    close(t.r0, 1.2);
    close(t.kappa0, 3.0);
    close(t.delta1, 1.0 / 3.0);
    close(t.kappa1, 3.0);
    close(t.delta2, 0.5);
    close(t.kappa2, 2.0);
    close(t.s0_star, 6.0);
    close(t.s1, 1.5);
    close(t.nu2, 10.0 / 3.0);
    close(t.nu3, 0.4);
    close(t.s2, 2.0);
    close(t.s3, 1.5);
    close(t.nu4, 0.5);
    close(t.s4, 1.75);
    close(t.kappa3, 2.5);
    close(t.kappa4, 6.25);
    close(t.kappa5, 1.0);
    close(t.kappa6, 3.75);
    close(t.kappa7, 2.0);
    close(t.kappa8, 0.5);
    close(t.kappa9, 2.0);
    close(t.kappa10, 4.125);
    close(t.kappa11, 2.5);
    close(t.kappa12, 1.75);
    close(t.mu1(2.0), 3.5);
    close(t.mu2(2.0), 2.0);
}

TEST_CASE("table matches exact rational arithmetic") {
    {
        const auto law = parse_law("1+s");  // a = 1/2
        compare(build_table(2, law, 2.0, 1.5), rational_table(2, Rat(1, 2), Rat(2), Rat(3, 2)));
        compare(build_table(2, law, 3.0, 1.25), rational_table(2, Rat(1, 2), Rat(3), Rat(5, 4)));
    }
    {
        const auto law = parse_law("1+s+s^2");  // a = 2/3
        compare(build_table(3, law, 3.0, 1.75), rational_table(3, Rat(2, 3), Rat(3), Rat(7, 4)));
        compare(build_table(2, law, 2.0, 1.5), rational_table(2, Rat(2, 3), Rat(2), Rat(3, 2)));
    }
    {
        const auto law = parse_law("1+s^4");  // a = 4/5
        compare(build_table(3, law, 4.0, 1.6), rational_table(3, Rat(4, 5), Rat(4), Rat(8, 5)));
    }
}

TEST_CASE("alpha admissibility") {
    {
        const auto chk = validate_alpha(2, parse_law("1+s"), 2.0);
        REQUIRE(chk.admissible);
        REQUIRE_THAT(chk.alpha_star, WithinAbs(2.0 / 3.0, 1e-15));
    }
    {
        // a = 9/10: alpha_* = 0.9*3/1.1 > 2, so alpha = 2 fails.
        const auto chk = validate_alpha(3, parse_law("1+s^9"), 2.0);
        REQUIRE_FALSE(chk.admissible);
        REQUIRE(chk.alpha_star > 2.0);
    }
    REQUIRE_FALSE(validate_alpha(2, parse_law("1+s"), 1.5).admissible);

    REQUIRE_THROWS_AS(build_table(2, parse_law("1+s"), 1.5, 1.5), std::invalid_argument);
    REQUIRE_THROWS_AS(build_table(2, parse_law("1+s"), 2.0, 0.9), std::invalid_argument);
    REQUIRE_THROWS_AS(build_table(2, parse_law("1+s"), 2.0, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(build_table(1, parse_law("1+s"), 2.0, 1.5), std::invalid_argument);
}

TEST_CASE("structural inequalities hold across admissible inputs") {
    for (const char* gs : {"1+s", "1+s+s^2", "1+0.3*s^0.5+s^3"}) {
        const auto law = parse_law(gs);
        for (int n : {2, 3, 4}) {
            const double alpha = default_alpha(n, law);
            const double s0 = default_s0(n);
            const auto t = build_table(n, law, alpha, s0);
            CAPTURE(gs, n, alpha, s0);
            REQUIRE(t.delta1 > 0.0);
            REQUIRE(t.delta1 < 1.0);
            REQUIRE(t.delta2 > 0.0);
            REQUIRE(t.delta2 < 1.0);
            REQUIRE(t.kappa1 > 1.0);
            REQUIRE(t.kappa2 > 1.0);
            REQUIRE(t.kappa0 > t.alpha);  // interpolation slot alpha < p
            REQUIRE(t.nu2 > 2.0);
            REQUIRE(t.nu3 > 0.0);
            REQUIRE(t.nu3 < 1.0);
            REQUIRE(t.s0_star > 2.0);
            REQUIRE(t.nu4 == t.s3 - 1.0);
            REQUIRE(t.s2 >= 2.0);
        }
    }
}

TEST_CASE("defaults") {
    REQUIRE_THAT(default_s0(2), WithinAbs(1.5, 1e-15));
    REQUIRE_THAT(default_s0(3), WithinAbs(1.6, 1e-15));
    REQUIRE(default_alpha(2, parse_law("1+s")) == 2.0);
    REQUIRE(default_alpha(3, parse_law("1+s^9")) == 4.0);  // ceil(2.4545....) + 1
}
