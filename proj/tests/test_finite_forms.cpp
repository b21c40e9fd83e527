#include "cmk3/finite_forms.hpp"

#include "cmk3/lattice.hpp"
#include "cmk3/trace_lattices.hpp"

#include <doctest.h>

#include <random>

using namespace cmk3;

namespace {

FiniteQuadraticForm hyperbolic_mod_p(long p) {
    MatQ b(2, 2);
    b(0, 1) = Rat(1, p);
    b(1, 0) = Rat(1, p);
    return FiniteQuadraticForm({Int(p), Int(p)}, b);
}

}  // namespace

TEST_CASE("p-primary decomposition") {
    // Z/6 with b = 1/6 splits into a 2-part and a 3-part
    MatQ b(1, 1);
    b(0, 0) = Rat(1, 6);
    FiniteQuadraticForm f({Int(6)}, b);
    auto parts = p_primary_decompose(f);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].first == 2);
    CHECK(parts[0].second.orders() == std::vector<Int>{2});
    CHECK(parts[1].first == 3);
    CHECK(parts[1].second.orders() == std::vector<Int>{3});
    // reassembly carries the same witt class and group order
    FiniteQuadraticForm sum = parts[0].second.direct_sum(parts[1].second);
    CHECK(sum.group_order() == f.group_order());
    CHECK(witt_equal(sum, f));

    // prime-power input decomposes to itself
    FiniteQuadraticForm g = standard_form(3, 2, 1);
    auto parts9 = p_primary_decompose(g);
    REQUIRE(parts9.size() == 1);
    CHECK(parts9[0].second.orders() == std::vector<Int>{9});
}

TEST_CASE("witt class basics") {
    // (Z/3, 1/3) + (Z/3, -1/3) is metabolic
    FiniteQuadraticForm f = standard_form(3, 1, 1).direct_sum(standard_form(3, 1, -1));
    CHECK(witt_class(f).parts.empty());

    // four copies of (Z/3, 1/3) vanish
    FiniteQuadraticForm t = standard_form(3, 1, 1);
    FiniteQuadraticForm four = t.direct_sum(t).direct_sum(t).direct_sum(t);
    CHECK(witt_class(four).parts.empty());

    // two copies: nonzero iff p = 3 mod 4
    FiniteQuadraticForm two3 = t.direct_sum(t);
    CHECK(witt_class(two3).parts.at(3).rank == 2);
    FiniteQuadraticForm t5 = standard_form(5, 1, 1);
    CHECK(witt_class(t5.direct_sum(t5)).parts.empty());

    // hyperbolic forms are metabolic
    CHECK(witt_class(hyperbolic_mod_p(7)).parts.empty());
}

TEST_CASE("witt order of (Z/p, a/p): 4 when p = 3 mod 4, 2 when p = 1 mod 4") {
    for (long p : {3L, 7L, 11L}) {
        FiniteQuadraticForm t = standard_form(p, 1, 1);
        FiniteQuadraticForm acc = t;
        int order = 1;
        while (!witt_class(acc).parts.empty()) {
            acc = acc.direct_sum(t);
            ++order;
            REQUIRE(order <= 4);
        }
        CHECK(order == 4);
    }
    for (long p : {5L, 13L}) {
        FiniteQuadraticForm t = standard_form(p, 1, 2);
        CHECK(witt_class(t.direct_sum(t)).parts.empty());
    }
}

TEST_CASE("witt class is stable under adding metabolic summands") {
    std::mt19937 rng(7);
    for (long p : {3L, 5L, 7L, 11L, 13L}) {
        std::uniform_int_distribution<long> dist(1, p - 1);
        FiniteQuadraticForm base = standard_form(p, 1, dist(rng));
        WittClass w = witt_class(base);
        for (int trial = 0; trial < 3; ++trial) {
            long a = dist(rng);
            FiniteQuadraticForm meta =
                standard_form(p, 1, a).direct_sum(standard_form(p, 1, p - a));
            CHECK(witt_class(base.direct_sum(meta)) == w);
            CHECK(witt_class(base.direct_sum(hyperbolic_mod_p(p))) == w);
        }
    }
}

TEST_CASE("witt classes separate square and nonsquare") {
    CHECK(!witt_equal(standard_form(7, 1, 1), standard_form(7, 1, -1)));
    CHECK(witt_equal(standard_form(7, 1, 1), standard_form(7, 1, 2)));  // 2 = 3^2 mod 7
    CHECK(witt_equal(standard_form(17, 1, 3), standard_form(17, 1, 5)));  // both nonsquares
}

TEST_CASE("negation flips the witt class") {
    FiniteQuadraticForm f = discriminant_form(standard_A(2));
    FiniteQuadraticForm g = discriminant_form(standard_A(2).rescaled(-1));
    CHECK(witt_equal(f.negate(), g));
    // A2 disc is (-1/3): nonsquare class; its negative is the square class
    CHECK(witt_class(f).parts.at(3).chi == -1);
    CHECK(witt_class(g).parts.at(3).chi == 1);
}

TEST_CASE("anti-isometry search") {
    FiniteQuadraticForm f = discriminant_form(standard_A(2));
    FiniteQuadraticForm g = discriminant_form(standard_A(2).rescaled(-1));
    CHECK(find_anti_isometry(f, g).has_value());
    CHECK(!find_anti_isometry(f, f).has_value());  // -(-1/3) = 1/3 not isometric to -1/3

    // higher p-power: Z/9 forms
    FiniteQuadraticForm n9 = standard_form(3, 2, 1);
    CHECK(find_anti_isometry(n9, n9.negate()).has_value());
}

TEST_CASE("degenerate forms are rejected by witt_class") {
    MatQ b(1, 1);  // b = 0 on Z/3: degenerate
    FiniteQuadraticForm f({Int(3)}, b);
    CHECK(!f.is_nondegenerate());
    CHECK_THROWS(witt_class(f));
}

TEST_CASE("p-primary parts of a twisted disc form match the construction") {
    // Lambda_{1,J}(7) with J the norm-169 prime: 7-part Z/7, 13-part (Z/13)^2
    PrimeTable& tab = prime_table(7);
    IdealSpec j;
    j.exponents[{13, tab.primes_above(13)[0].index}] = 1;
    TraceLattice l = twist(lambda_a(7, 1, 1), j);
    auto parts = p_primary_decompose(discriminant_form(l.lattice));
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].first == 7);
    CHECK(parts[0].second.orders() == std::vector<Int>{7});
    CHECK(parts[1].first == 13);
    CHECK(parts[1].second.orders() == std::vector<Int>{13, 13});
}
