#include "cmk3/lattice.hpp"

#include <doctest.h>

using namespace cmk3;

TEST_CASE("standard lattices") {
    CHECK(standard_U().determinant() == -1);
    Signature s = signature(standard_U());
    CHECK(s.pos == 1);
    CHECK(s.neg == 1);

    s = signature(standard_E8(-1));
    CHECK(s.pos == 0);
    CHECK(s.neg == 8);
    CHECK(standard_E8().determinant() == 1);
    CHECK(standard_E6().determinant() == 3);

    IntegerLattice m10 = standard_M(10);
    s = signature(m10);
    CHECK(s.pos == 1);
    CHECK(s.neg == 9);
    CHECK(abs(m10.determinant()) == 1);
    CHECK(standard_M(2).rank() == 2);
    IntegerLattice m18 = standard_M(18);
    s = signature(m18);
    CHECK(s.pos == 1);
    CHECK(s.neg == 17);
    CHECK_THROWS(standard_M(12));

    // K3 lattice realization U^3 + E8(-1)^2 has signature (3,19)
    IntegerLattice k3 = standard_U().direct_sum(standard_U()).direct_sum(standard_U())
                            .direct_sum(standard_E8(-1))
                            .direct_sum(standard_E8(-1));
    s = signature(k3);
    CHECK(s.pos == 3);
    CHECK(s.neg == 19);
    CHECK(abs(k3.determinant()) == 1);
}

TEST_CASE("discriminant groups") {
    DiscriminantGroup d = discriminant_group(standard_A(2));
    CHECK(d.invariant_factors == std::vector<Int>{3});

    d = discriminant_group(standard_U(5));
    CHECK(d.invariant_factors == std::vector<Int>{5, 5});

    d = discriminant_group(standard_E8());
    CHECK(d.invariant_factors.empty());

    // |det| = product of invariant factors, lifts have the right order
    for (const IntegerLattice& l : {standard_A(4), standard_E6(), standard_U(6)}) {
        DiscriminantGroup dg = discriminant_group(l);
        CHECK(dg.order() == abs(l.determinant()));
        MatQ g = to_rat(l.gram());
        for (size_t i = 0; i < dg.invariant_factors.size(); ++i) {
            // d_i * lift is integral (in L)
            for (int j = 0; j < l.rank(); ++j) {
                Rat v = dg.generator_lifts(static_cast<int>(i), j) * Rat(dg.invariant_factors[i]);
                CHECK(v.get_den() == 1);
            }
        }
    }
}

TEST_CASE("discriminant forms") {
    FiniteQuadraticForm f = discriminant_form(standard_A(2));
    CHECK(f.orders() == std::vector<Int>{3});
    CHECK(f.bilinear()(0, 0) == Rat(2, 3));  // = -1/3 mod 1

    f = discriminant_form(standard_U());
    CHECK(f.num_gens() == 0);

    f = discriminant_form(standard_U(5));
    CHECK(f.orders() == std::vector<Int>{5, 5});
    // Gram [[0,1/5],[1/5,0]] up to generator ordering
    CHECK(f.bilinear()(0, 0) == 0);
    CHECK(f.bilinear()(1, 1) == 0);
    Rat off = f.bilinear()(0, 1);
    CHECK(off.get_den() == 5);
}

TEST_CASE("dual of dual: Gram inverse involution") {
    for (const IntegerLattice& l : {standard_A(3), standard_E6(), standard_M(10)}) {
        MatQ ginv = inverse(to_rat(l.gram()));
        MatQ back = inverse(ginv);
        CHECK(back == to_rat(l.gram()));
    }
}

TEST_CASE("root enumeration") {
    CHECK(root_count(standard_A(2).rescaled(-1)) == 6);
    CHECK(root_count(standard_E6().rescaled(-1)) == 72);
    CHECK(root_count(standard_E8(-1)) == 240);
    CHECK(root_count(standard_A(6).rescaled(-1)) == 42);
    CHECK_THROWS(roots(standard_U()));  // indefinite
}

TEST_CASE("short vector enumeration agrees with theta series of A2") {
    // A2: 6 vectors of norm 2, 0 of norm 4 at |x| <= 2... theta = 1 + 6q + 0q^2 + 6q^3
    std::vector<std::vector<Int>> v = short_vectors(standard_A(2), 3);
    long n2 = 0, n3 = 0;
    MatQ g = to_rat(standard_A(2).gram());
    for (const auto& x : v) {
        Rat q = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) q += Rat(x[i] * x[j]) * g(i, j);
        if (q == 2) ++n2;
        if (q == 3) ++n3;
    }
    CHECK(n2 == 6);
    CHECK(n3 == 0);
}

TEST_CASE("overlattice on the A2 + A2(-1) glue") {
    IntegerLattice sum = standard_A(2).direct_sum(standard_A(2).rescaled(-1));
    // glue vector (1/3, 2/3, 1/3, 2/3): graph of the identity on Z/3
    MatQ glue(1, 4);
    glue(0, 0) = Rat(1, 3);
    glue(0, 1) = Rat(2, 3);
    glue(0, 2) = Rat(1, 3);
    glue(0, 3) = Rat(2, 3);
    IntegerLattice over = overlattice(sum, glue);
    CHECK(abs(over.determinant()) == 1);
    CHECK(over.is_even());
    // determinant law |det| / |H|^2
    CHECK(abs(sum.determinant()) == 9);

    // trivial glue returns the same lattice
    IntegerLattice same = overlattice(sum, MatQ(0, 4));
    CHECK(same.gram() == sum.gram());

    // non-isotropic glue rejected
    MatQ bad(1, 4);
    bad(0, 0) = Rat(1, 3);
    bad(0, 1) = Rat(2, 3);
    CHECK_THROWS(overlattice(sum, bad));
}

TEST_CASE("glue_even_unimodular on small cases") {
    GlueResult r = glue_even_unimodular(standard_A(2), standard_A(2).rescaled(-1));
    REQUIRE(r.ok());
    Signature s = signature(r.glued);
    CHECK(s.pos == 2);
    CHECK(s.neg == 2);
    CHECK(abs(r.glued.determinant()) == 1);
    CHECK(r.glued.is_even());

    // mismatched determinants refuse to glue
    GlueResult bad = glue_even_unimodular(standard_A(2), standard_A(4).rescaled(-1));
    CHECK(!bad.ok());
}

TEST_CASE("overlattice determinant law: |det| divides by |H|^2 exactly") {
    // index-3 glue on A2 + A2(-1), index-5 glue on U(5)-style examples
    IntegerLattice sum = standard_A(2).direct_sum(standard_A(2).rescaled(-1));
    MatQ glue(1, 4);
    glue(0, 0) = Rat(1, 3);
    glue(0, 1) = Rat(2, 3);
    glue(0, 2) = Rat(1, 3);
    glue(0, 3) = Rat(2, 3);
    IntegerLattice over = overlattice(sum, glue);
    CHECK(abs(sum.determinant()) == abs(over.determinant()) * 9);

    // length is bounded by the rank
    for (const IntegerLattice& l : {standard_A(4), standard_U(6), standard_E6()})
        CHECK(discriminant_group(l).length() <= l.rank());
}

TEST_CASE("glue containment index squared equals det T times det S") {
    IntegerLattice t = standard_A(2);
    IntegerLattice s = standard_A(2).rescaled(-1);
    GlueResult r = glue_even_unimodular(t, s);
    REQUIRE(r.ok());
    Int prod = abs(t.determinant()) * abs(s.determinant());
    // glued is unimodular, so index^2 = det T * det S
    Int index2 = prod / abs(r.glued.determinant());
    Int root;
    CHECK(is_square(index2, &root));
    CHECK(root == 3);
}

TEST_CASE("odd lattices are detected") {
    MatI g(1, 1);
    g(0, 0) = 1;
    IntegerLattice l(g);
    CHECK(!l.is_even());
    CHECK(standard_A(2).is_even());
}

TEST_CASE("equivariant glue on A2 with its order-3 rotation") {
    IntegerLattice t = standard_A(2);
    IntegerLattice s = t.rescaled(-1);
    // rotation of A2: e1 -> e2, e2 -> -e1-e2 (order 3, Gram-preserving)
    MatI rot(2, 2);
    rot(0, 1) = -1;
    rot(1, 0) = 1;
    rot(1, 1) = -1;
    MatQ g = to_rat(t.gram());
    MatQ rq = to_rat(rot);
    REQUIRE(rq.transpose() * g * rq == g);
    GlueResult r = glue_even_unimodular(t, s, rot, rot);
    REQUIRE(r.ok());
    CHECK(r.equivariant);
    CHECK(abs(r.glued.determinant()) == 1);
}
