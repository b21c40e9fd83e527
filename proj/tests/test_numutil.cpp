#include "cmk3/numutil.hpp"

#include <doctest.h>

using namespace cmk3;

TEST_CASE("euler phi and moebius basics") {
    CHECK(euler_phi(7) == 6);
    CHECK(euler_phi(9) == 6);
    CHECK(euler_phi(44) == 20);
    CHECK(euler_phi(1) == 1);
    CHECK(moebius(1) == 1);
    CHECK(moebius(6) == 1);
    CHECK(moebius(30) == -1);
    CHECK(moebius(12) == 0);
}

TEST_CASE("rational wire format round-trips") {
    CHECK(rat_str(Rat(3, 4)) == "3/4");
    CHECK(rat_str(Rat(-5)) == "-5");
    CHECK(rat_parse("22/7") == Rat(22, 7));
    CHECK(rat_parse("-6/4") == Rat(-3, 2));
    CHECK_THROWS(rat_parse("x"));
}

TEST_CASE("factor handles smooth integers and rejects rough ones") {
    auto f = factor(Int(448));
    CHECK(f[2] == 6);
    CHECK(f[7] == 1);
    auto g = factor(Int(-125));
    CHECK(g[5] == 3);
    CHECK_THROWS(factor(Int(0)));
}

TEST_CASE("legendre symbol") {
    CHECK(legendre(Int(-1), 7) == -1);
    CHECK(legendre(Int(2), 7) == 1);
    CHECK(legendre(Int(2), 5) == -1);
    CHECK(legendre(Int(3), 17) == -1);
    CHECK(legendre(Int(2), 17) == 1);
}

TEST_CASE("integer square root and squares") {
    CHECK(isqrt(Int(0)) == 0);
    CHECK(isqrt(Int(99)) == 9);
    Int r;
    CHECK(is_square(Int(1849), &r));
    CHECK(r == 43);
    CHECK(!is_square(Int(1850)));
}

TEST_CASE("divisors are sorted and complete") {
    auto d = divisors(44);
    CHECK(d == std::vector<long>{1, 2, 4, 11, 22, 44});
}
