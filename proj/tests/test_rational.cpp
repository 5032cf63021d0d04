#include "sunkcost/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace sunkcost;

TEST_CASE("parse_rat handles fractions, integers and decimals") {
    CHECK(parse_rat("7") == Rat(7));
    CHECK(parse_rat("-3/4") == Rat(-3, 4));
    CHECK(parse_rat("2/4") == Rat(1, 2));
    CHECK(parse_rat("0.76") == Rat(76, 100));
    CHECK(parse_rat("-0.5") == Rat(-1, 2));
    CHECK(parse_rat("10/5") == Rat(2));
}

TEST_CASE("parse_rat rejects malformed input") {
    CHECK_THROWS_AS(parse_rat(""), ParseError);
    CHECK_THROWS_AS(parse_rat("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rat("abc"), ParseError);
    CHECK_THROWS_AS(parse_rat("1."), ParseError);
    CHECK_THROWS_AS(parse_rat("1/2/3"), ParseError);
}

TEST_CASE("rat_to_string is canonical") {
    CHECK(rat_to_string(Rat(2, 4)) == "1/2");
    CHECK(rat_to_string(Rat(-2, 4)) == "-1/2");
    CHECK(rat_to_string(Rat(5)) == "5");
    CHECK(rat_to_string(Rat(0)) == "0");
}

TEST_CASE("rat_to_decimal renders 12 significant digits") {
    CHECK(rat_to_decimal(Rat(0)) == "0");
    CHECK(rat_to_decimal(Rat(1, 2)) == "0.5");
    CHECK(rat_to_decimal(Rat(1, 3)) == "0.333333333333");
    CHECK(rat_to_decimal(Rat(5, 27)) == "0.185185185185");
    CHECK(rat_to_decimal(Rat(-1, 4)) == "-0.25");
    CHECK(rat_to_decimal(Rat(100)) == "100");
}

TEST_CASE("addition matches cross-multiplication on random rationals") {
    std::mt19937_64 gen(12345);
    for (int i = 0; i < 1000; ++i) {
        long long a = static_cast<long long>(gen() % 2001) - 1000;
        long long b = static_cast<long long>(gen() % 999) + 1;
        long long c = static_cast<long long>(gen() % 2001) - 1000;
        long long d = static_cast<long long>(gen() % 999) + 1;
        Rat sum = Rat(a, b) + Rat(c, d);
        Rat cross(a * d + c * b, b * d);
        REQUIRE(sum == cross);
    }
}

TEST_CASE("rat_pow") {
    CHECK(rat_pow(Rat(2, 3), 0) == 1);
    CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(rat_pow(Rat(-1, 2), 2) == Rat(1, 4));
}

TEST_CASE("rational square root brackets the true value") {
    Rat prec(1, 1000000);
    for (const Rat& x : {Rat(2), Rat(3, 7), Rat(1 + Rat(1, 2)), Rat(100), Rat(0)}) {
        Rat lo = rat_sqrt_lower(x, prec);
        Rat hi = rat_sqrt_upper(x, prec);
        CHECK(lo * lo <= x);
        CHECK(hi * hi >= x);
        CHECK(hi - lo <= prec);
    }
    CHECK(rat_sqrt_lower(Rat(4), prec) == 2);
    CHECK(rat_sqrt_upper(Rat(4), prec) == 2);
    CHECK_THROWS_AS(rat_sqrt_lower(Rat(-1), prec), std::domain_error);
}

TEST_CASE("inv_e matches the known decimal expansion") {
    Rat reference = parse_rat("0.367879441171442321595523770161");
    CHECK(rat_abs(inv_e() - reference) < Rat(1, Int("1000000000000000000000000")));
}
