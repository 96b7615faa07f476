#include <catch2/catch_amalgamated.hpp>

#include "tcft/rational.hpp"

using tcft::GaussianRational;
using tcft::Rational;

TEST_CASE("rational arithmetic is exact") {
    Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(Rational(-4, -6) == Rational(2, 3));
    CHECK(Rational(0, 5) == Rational(0));

    // no drift under long chains of operations
    Rational s(0);
    for (int i = 1; i <= 50; ++i) s += Rational(1, i) - Rational(1, i + 1);
    CHECK(s == Rational(1) - Rational(1, 51));
}

TEST_CASE("rational throws on zero denominator and division by zero") {
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);
}

TEST_CASE("gaussian rational arithmetic") {
    GaussianRational i(Rational(0), Rational(1));
    CHECK(i * i == GaussianRational(Rational(-1)));
    GaussianRational z(Rational(1, 2), Rational(-1, 3));
    CHECK(z / z == GaussianRational(Rational(1)));
    CHECK((z * i).re == Rational(1, 3));
    CHECK((z * i).im == Rational(1, 2));
}
