#include "cmk3/k3_oracle.hpp"

#include <doctest.h>

using namespace cmk3;

TEST_CASE("check_disc_conditions on the worked examples") {
    // (Q(zeta_7), (2,4), P) passes; O_E fails (iv)
    DiscriminantIdeal p1 = discriminant_ideal(lambda_a(7, 1, 1));
    CHECK(check_disc_conditions(7, 2, 4, p1).admissible);

    DiscriminantIdeal triv;
    triv.m = 7;
    DiscVerdict v = check_disc_conditions(7, 2, 4, triv);
    CHECK(!v.admissible);
    CHECK(v.reason().find("(iv)") != std::string::npos);

    // (Q(zeta_44), (2,18), trivial) passes: -16 = 4*0 mod 8
    DiscriminantIdeal triv44;
    triv44.m = 44;
    CHECK(check_disc_conditions(44, 2, 18, triv44).admissible);

    // odd signature components fail (i)
    CHECK(!check_disc_conditions(7, 1, 5, p1).admissible);
}

TEST_CASE("enumerate_admissible minimal cases") {
    auto one = enumerate_admissible(7, 2, 4, Int(7));
    REQUIRE(one.size() == 1);
    CHECK(one[0].label() == "P");

    auto three = enumerate_admissible(7, 2, 4, Int(343));
    REQUIRE(three.size() == 2);
    CHECK(three[0].label() == "P");
    CHECK(three[1].label() == "P^3");
    CHECK(three[1].norm() == 343);

    auto u44 = enumerate_admissible(44, 2, 18, Int(1));
    REQUIRE(u44.size() == 1);
    CHECK(u44[0].factors.empty());
}

TEST_CASE("existence trichotomy") {
    ExistenceVerdict v = exists_maximal_cm_k3(field_from_subgroup(51, {16}));
    CHECK(v.kind == ExistenceVerdict::Kind::none);
    CHECK(v.reason.find("f=8") != std::string::npos);

    for (long m : {3L, 7L, 16L, 25L, 44L, 66L})
        CHECK(exists_maximal_cm_k3(cyclotomic_field(m)).kind ==
              ExistenceVerdict::Kind::infinitely_many);

    CHECK_THROWS(exists_maximal_cm_k3(field_from_subgroup(17, {-1})));  // not CM

    // inherent gap band: criterion fails, non-existence test also fails
    ExistenceVerdict gap = exists_maximal_cm_k3(field_from_subgroup(55, {34}));
    CHECK(gap.kind == ExistenceVerdict::Kind::undetermined);
    CHECK(!gap.offending_primes.empty());
}

TEST_CASE("embedding predicates") {
    // Lambda_3(7): rank 6, l((Z/7)^3) = 3 <= 20 - 12 = 8
    TraceLattice lam = lambda_a(7, 1, 3);
    EmbeddingPredicates ep = embedding_predicates(lam.lattice, 3);
    CHECK(ep.length == 3);
    CHECK(ep.primitively_embeds);
    CHECK(ep.uniquely_embeds);

    // Lambda_1(19): l = 1 <= 20 - 18 = 2
    TraceLattice l19 = lambda_a(19, 1, 1);
    ep = embedding_predicates(l19.lattice, 9);
    CHECK(ep.length == 1);
    CHECK(ep.primitively_embeds);
    CHECK(ep.uniquely_embeds);

    CHECK_THROWS(embedding_predicates(standard_U(), 1));  // wrong signature
}

TEST_CASE("degree-20 special case of the embedding predicate") {
    // unimodular rank-20 over Q(zeta_44) twisted by a split pair: G = (F_p)^2
    DiscriminantIdeal triv;
    triv.m = 44;
    std::string why;
    auto uni = realize_admissible(44, 2, 18, triv, &why);
    REQUIRE_MESSAGE(uni.has_value(), why);
    PrimeTable& tab = prime_table(44);
    const PrimeIdeal& q = tab.primes_above(89)[0];  // 89 splits completely
    IdealSpec j89;
    j89.exponents[{89, q.index}] = 1;
    j89.exponents[{89, q.conj_index}] = 1;
    TraceLattice t = twist(*uni, j89);
    EmbeddingPredicates ep = embedding_predicates(t.lattice, 10);
    CHECK(ep.length == 2);
    CHECK(ep.primitively_embeds);  // via the (F_p)^2 determinant -p^2 route
    CHECK(!ep.uniquely_embeds);
}

TEST_CASE("picard classification for m = 44, 66, 25") {
    PicardVerdict v = picard_classify(44, Int(1));
    CHECK(v.kind == PicardVerdict::Kind::U_N);
    CHECK(v.n == 1);
    CHECK(v.note == "Kondo");

    v = picard_classify(44, Int(89) * 89);
    CHECK(v.kind == PicardVerdict::Kind::U_N);

    v = picard_classify(44, Int(43) * 43);
    CHECK(v.kind == PicardVerdict::Kind::not_realizable);

    v = picard_classify(44, Int(43) * 43 * 43 * 43);  // even S2 sum
    CHECK(v.kind == PicardVerdict::Kind::U_N);

    v = picard_classify(25, Int(5));
    CHECK(v.kind == PicardVerdict::Kind::q_I);
    CHECK(v.d == 5);
    CHECK(v.c == 1);
    CHECK(v.note == "Vorontsov");
    CHECK(det(v.gram) == -5);

    CHECK_THROWS(picard_classify(7, Int(1)));  // degree != 20
}

TEST_CASE("surface records") {
    K3SurfaceRecord x1 = surface_X(7, 1, IdealSpec::trivial());
    CHECK(x1.t.lattice.determinant() == 7);
    CHECK(x1.glue_verified);
    CHECK(x1.delta_roots == 42);  // Delta_1(7) = A6(-1) has roots

    K3SurfaceRecord x3 = surface_X(7, 3, IdealSpec::trivial());
    CHECK(abs(x3.t.lattice.determinant()) == 343);
    CHECK(x3.glue_verified);
    CHECK(x3.delta_roots == 0);  // Mordell-Weil lattice root-free

    // Brandhorst-Elkies record
    PrimeTable& tab = prime_table(7);
    IdealSpec j;
    j.exponents[{13, tab.primes_above(13)[0].index}] = 1;
    K3SurfaceRecord be = surface_X(7, 1, j);
    CHECK(abs(be.t.lattice.determinant()) == 7 * 169);
    CHECK(be.embeds_unique);
    CHECK(be.glue_verified);
    REQUIRE(be.s.has_value());
    CHECK(abs(be.s->determinant()) == 7 * 169);
    CHECK(be.delta_roots == 0);

    CHECK_THROWS(surface_X(13, 1, IdealSpec::trivial()));  // p out of range
    CHECK_THROWS(surface_X(7, 2, IdealSpec::trivial()));   // even a
}

TEST_CASE("surfaces_equal compares discriminant modules up to Galois") {
    K3SurfaceRecord a = surface_X(7, 1, IdealSpec::trivial());
    K3SurfaceRecord b = surface_X(7, 1, IdealSpec::trivial());
    CHECK(surfaces_equal(a, b) == SurfaceComparison::equal);

    K3SurfaceRecord c = surface_X(7, 3, IdealSpec::trivial());
    CHECK(surfaces_equal(a, c) == SurfaceComparison::different);

    // twists by the two primes of a swapped pair give Galois-equivalent modules
    PrimeTable& tab = prime_table(5);
    auto& above11 = tab.primes_above(11);  // 11 = 1 mod 5: full split, f = 1
    REQUIRE(above11.size() == 4);
    IdealSpec j1, j2;
    j1.exponents[{11, above11[0].index}] = 1;
    j1.exponents[{11, above11[0].conj_index}] = 1;
    j2.exponents[{11, above11[1].index}] = 1;
    j2.exponents[{11, above11[1].conj_index}] = 1;
    TraceLattice t1 = twist(lambda_a(5, 1, 1), j1);
    TraceLattice t2 = twist(lambda_a(5, 1, 1), j2);
    CHECK(ideals_galois_equivalent(discriminant_ideal(t1), discriminant_ideal(t2)));
    CHECK(!(discriminant_ideal(t1) == discriminant_ideal(t2)));
}

TEST_CASE("enumeration is ordered by norm then label") {
    auto ideals = enumerate_admissible(5, 2, 2, Int(2000));
    for (size_t i = 0; i + 1 < ideals.size(); ++i) {
        Int a = ideals[i].norm(), b = ideals[i + 1].norm();
        CHECK(a <= b);
        if (a == b) CHECK(ideals[i].label() < ideals[i + 1].label());
    }
}

TEST_CASE("surface records satisfy the structural invariants") {
    for (long p : {3L, 5L, 7L, 11L}) {
        K3SurfaceRecord r = surface_X(p, 3, IdealSpec::trivial());
        long n2 = euler_phi(p);
        CHECK(r.t.rank() == n2);
        Signature s = signature(r.t.lattice);
        CHECK(s.pos == 2);
        CHECK(s.neg == n2 - 2);
        CHECK(r.length <= 22 - n2);
        if (p == 5) {
            CHECK(!r.s.has_value());  // no even unimodular M_14 companion
        } else {
            REQUIRE(r.s.has_value());
            CHECK(abs(r.s->determinant()) == abs(r.t.lattice.determinant()));
            CHECK(r.glue_verified);
        }
    }
}

TEST_CASE("the X_a family is pairwise distinct but isogenous") {
    std::vector<K3SurfaceRecord> fam;
    for (long a : {1L, 3L, 5L}) fam.push_back(surface_X(7, a, IdealSpec::trivial()));
    for (size_t i = 0; i < fam.size(); ++i)
        for (size_t j = i + 1; j < fam.size(); ++j) {
            CHECK(surfaces_equal(fam[i], fam[j]) == SurfaceComparison::different);
            CHECK(isogenous_over_Q(fam[i].t, fam[j].t));
        }
    CHECK(surfaces_equal(fam[0], surface_X(7, 1, IdealSpec::trivial())) ==
          SurfaceComparison::equal);
}
