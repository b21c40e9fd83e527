#include "cmk3/cyclotomic.hpp"

#include "cmk3/abelian_fields.hpp"

#include <doctest.h>

using namespace cmk3;

namespace {

// independent oracle for traces of roots of unity:
// Tr(zeta_m^a) = mu(m/g) phi(m) / phi(m/g), g = gcd(a, m)
Rat trace_mu_formula(long m, long a) {
    long g = gcd_long(mod_norm(a, m) == 0 ? m : mod_norm(a, m), m);
    return Rat(moebius(m / g)) * euler_phi(m) / euler_phi(m / g);
}

}  // namespace

TEST_CASE("ring arithmetic identities") {
    CyclotomicElement z = CyclotomicElement::zeta_power(7, 1);
    CHECK(z * CyclotomicElement::zeta_power(7, 6) == CyclotomicElement::one(7));

    // (1 - zeta_3)(1 - zeta_3^2) = 3
    CyclotomicElement a = CyclotomicElement::one(3) - CyclotomicElement::zeta_power(3, 1);
    CyclotomicElement b = CyclotomicElement::one(3) - CyclotomicElement::zeta_power(3, 2);
    CHECK((a * b).rational_value() == 3);

    CHECK(CyclotomicElement::from_rational(5, Rat(2)).inverse().rational_value() == Rat(1, 2));
    CHECK_THROWS(CyclotomicElement::zero(5).inverse());

    // a * a^-1 = 1 for a nontrivial element
    CyclotomicElement x(9, {Rat(1), Rat(2), Rat(0), Rat(-1)});
    CHECK(x * x.inverse() == CyclotomicElement::one(9));
}

TEST_CASE("galois action and conjugation") {
    CyclotomicElement z7 = CyclotomicElement::zeta_power(7, 1);
    CHECK(conjugate(z7) == CyclotomicElement::zeta_power(7, 6));
    CHECK(galois_apply(2, z7) == CyclotomicElement::zeta_power(7, 2));

    CyclotomicElement real9 =
        CyclotomicElement::zeta_power(9, 1) + CyclotomicElement::zeta_power(9, 8);
    CHECK(conjugate(real9) == real9);

    // involution and composition laws on a scattered sample
    for (long m : {7L, 9L, 12L, 44L}) {
        CyclotomicElement x(m, {Rat(1), Rat(-2), Rat(1, 3)});
        CHECK(conjugate(conjugate(x)) == x);
        for (long j : {2L, 3L, 5L})
            for (long k : {2L, 5L}) {
                if (gcd_long(j, m) != 1 || gcd_long(k, m) != 1) continue;
                CHECK(galois_apply(j, galois_apply(k, x)) == galois_apply(mod_norm(j * k, m), x));
            }
    }
    CHECK_THROWS(galois_apply(7, CyclotomicElement::one(7)));
}

TEST_CASE("traces match the mu-formula for all m <= 66 and all a") {
    for (long m = 3; m <= 66; ++m) {
        if (m % 4 == 2) continue;
        for (long a = 0; a < m; ++a) {
            CHECK(trace_to_Q(CyclotomicElement::zeta_power(m, a)) == trace_mu_formula(m, a));
        }
    }
}

TEST_CASE("trace examples") {
    CHECK(trace_to_Q(CyclotomicElement::one(7)) == 6);
    CHECK(trace_to_Q(CyclotomicElement::zeta_power(7, 1)) == -1);
    CHECK(trace_to_Q(CyclotomicElement::zeta_power(9, 1)) == 0);
}

TEST_CASE("embedding signs certified") {
    CHECK(embedding_signs(CyclotomicElement::one(7)) == std::vector<int>{1, 1, 1});
    CyclotomicElement eta =
        CyclotomicElement::zeta_power(7, 1) + CyclotomicElement::zeta_power(7, 6);
    CHECK(embedding_signs(eta) == std::vector<int>{1, -1, -1});
    CHECK(embedding_signs(CyclotomicElement::from_rational(7, Rat(-1))) ==
          std::vector<int>{-1, -1, -1});
    CHECK_THROWS(embedding_signs(CyclotomicElement::zeta_power(7, 1)));  // not real
    CHECK_THROWS(embedding_signs(CyclotomicElement::zero(7)));
}

TEST_CASE("find_sign_unit returns a unit with the prescribed pattern") {
    CHECK(find_sign_unit(3) == CyclotomicElement::one(3));
    for (long m : {7L, 11L, 9L, 13L}) {
        CyclotomicElement u = find_sign_unit(m);
        Rat n = norm_to_Q(u);
        CHECK(n == 1);  // N_{E/Q} = N_{F/Q}^2
        std::vector<int> signs = embedding_signs(u);
        CHECK(signs[0] == 1);
        for (size_t i = 1; i < signs.size(); ++i) CHECK(signs[i] == -1);
    }
}

TEST_CASE("ideal_power_basis index identities") {
    // index of P^k in O_E is p^k: determinant of the coordinate matrix
    IdealBasis p0 = ideal_power_basis(3, 1, 0);
    CHECK(p0.norm() == 1);
    IdealBasis p1 = ideal_power_basis(7, 1, 1);
    CHECK(p1.norm() == 7);
    IdealBasis pm9 = ideal_power_basis(3, 2, -9);
    CHECK(Rat(1) / pm9.norm() == Rat(19683));  // 3^9

    // C_{k+2n} = p C_k as ideals: (1-zeta)^{k+2n} = p (1-zeta)^k * unit
    CyclotomicElement lhs = ideal_power_basis(7, 1, 2 + 6).gen;
    CyclotomicElement rhs = ideal_power_basis(7, 1, 2).gen *
                            CyclotomicElement::from_rational(7, Rat(7));
    CHECK(associates(lhs, rhs));
}

TEST_CASE("split_prime_generator finds prime generators") {
    // q = 7 splits in Q(zeta_3); norm of a generator is 7
    CyclotomicElement g = split_prime_generator(3, 7);
    CHECK(abs(norm_to_Q(g)) == 7);

    // q = 13 in Q(zeta_7): f = 2, conjugation-fixed prime of norm 169
    CyclotomicElement g13 = split_prime_generator(7, 13);
    CHECK(abs(norm_to_Q(g13)) == 169);

    // q = 2 in Q(zeta_7): f = 3
    CyclotomicElement g2 = split_prime_generator(7, 2);
    CHECK(abs(norm_to_Q(g2)) == 8);
    CHECK(!associates(g2, conjugate(g2)));  // the two primes above 2 are swapped

    CHECK_THROWS(split_prime_generator(7, 7));  // ramified
}

TEST_CASE("valuations at principal primes") {
    CyclotomicElement pi = ideal_power_basis(7, 1, 1).gen;
    CHECK(valuation_at(pi, pi) == 1);
    CHECK(valuation_at(CyclotomicElement::from_rational(7, Rat(7)), pi) == 6);
    CHECK(valuation_at(CyclotomicElement::from_rational(7, Rat(1, 7)), pi) == -6);
    CHECK(valuation_at(CyclotomicElement::one(7), pi) == 0);
}

TEST_CASE("different generator has the right valuation") {
    // v_P(D_E) = 5 for Q(zeta_7), 9 for Q(zeta_9)
    CHECK(valuation_at(different_generator(7), ideal_power_basis(7, 1, 1).gen) == 5);
    CHECK(valuation_at(different_generator(9), ideal_power_basis(3, 2, 1).gen) == 9);
}
