#include <doctest.h>

#include <random>

#include "rg/phase.hpp"

using rg::Phase;

TEST_CASE("phase normalizes into [0, 2pi)") {
    CHECK(Phase(4, 2) == Phase(0, 1));
    CHECK(Phase(5, 2) == Phase(1, 2));
    CHECK(Phase(-1, 2) == Phase(3, 2));
    CHECK(Phase(-7, 2) == Phase(1, 2));
    CHECK(Phase(6, 4) == Phase(3, 2));
    CHECK(Phase(0, 7) == Phase::zero());
}

TEST_CASE("phase reduction keeps gcd 1 and positive denominator") {
    Phase p(10, 4);
    CHECK(p.num() == 1);
    CHECK(p.den() == 2);
    CHECK_THROWS_AS(Phase(1, 0), rg::InputError);
    CHECK_THROWS_AS(Phase(1, -2), rg::InputError);
}

TEST_CASE("phase arithmetic") {
    CHECK(Phase::pi() + Phase::pi() == Phase::zero());
    CHECK(Phase(1, 2) + Phase(1, 3) == Phase(5, 6));
    CHECK(-Phase(1, 2) == Phase(3, 2));
    CHECK(-Phase::zero() == Phase::zero());
    CHECK(-Phase::pi() == Phase::pi());
    CHECK(Phase(3, 2) - Phase(1, 2) == Phase::pi());
    CHECK(Phase::pi().is_pi());
    CHECK(Phase::zero().is_zero());
}

TEST_CASE("phase addition is associative and commutative mod 2pi") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> num(-20, 20);
    std::uniform_int_distribution<std::int64_t> den(1, 12);
    for (int i = 0; i < 200; ++i) {
        Phase a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + Phase::zero() == a);
        CHECK(a + (-a) == Phase::zero());
    }
}

TEST_CASE("radians") {
    CHECK(Phase::pi().radians() == doctest::Approx(3.14159265358979));
    CHECK(Phase(1, 2).radians() == doctest::Approx(1.57079632679490));
}
