#pragma once

#include "cmk3/matrix.hpp"
#include "cmk3/numutil.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmk3 {

// Exact arithmetic in Q(zeta_m). Elements are dense rational coefficient
// vectors in the power basis 1, zeta, ..., zeta^{phi(m)-1}, reduced mod the
// cyclotomic polynomial Phi_m.
class CyclotomicElement {
  public:
    CyclotomicElement() : m_(1) {}
    CyclotomicElement(long m, std::vector<Rat> coeffs);
    static CyclotomicElement zero(long m);
    static CyclotomicElement one(long m);
    static CyclotomicElement from_rational(long m, const Rat& q);
    static CyclotomicElement zeta_power(long m, long k);

    long modulus() const { return m_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;
    Rat rational_value() const;  // requires is_rational
    bool is_integral() const;    // all coefficients integers (O_E = Z[zeta])

    CyclotomicElement operator+(const CyclotomicElement& o) const;
    CyclotomicElement operator-(const CyclotomicElement& o) const;
    CyclotomicElement operator-() const;
    CyclotomicElement operator*(const CyclotomicElement& o) const;
    CyclotomicElement operator*(const Rat& q) const;
    bool operator==(const CyclotomicElement& o) const { return m_ == o.m_ && c_ == o.c_; }

    CyclotomicElement inverse() const;  // throws on zero
    CyclotomicElement pow(long k) const;

    std::string str() const;  // polynomial in z

  private:
    long m_;
    std::vector<Rat> c_;
};

// Galois action zeta -> zeta^k, gcd(k, m) = 1.
CyclotomicElement galois_apply(long k, const CyclotomicElement& x);
CyclotomicElement conjugate(const CyclotomicElement& x);
bool is_conjugation_fixed(const CyclotomicElement& x);

// Trace and norm over Q(zeta_m)/Q.
Rat trace_to_Q(const CyclotomicElement& x);
Rat norm_to_Q(const CyclotomicElement& x);

// Phi_m as an integer polynomial (constant term first, monic).
std::vector<Int> cyclotomic_polynomial(long m);

// Representatives of the real embeddings of Q(zeta_m)^+, one k per coset
// {+-k} H... i.e. k in [1, m/2), gcd(k, m) = 1, increasing. sigma_0 is k=1.
std::vector<long> real_embedding_reps(long m);

// Certified signs of a nonzero conjugation-fixed element at each real
// embedding, in the order of real_embedding_reps.
std::vector<int> embedding_signs(const CyclotomicElement& x);

// A fractional ideal of Z[zeta_m], held by a principal generator; the Z-span
// is gen * zeta^i, i = 0..phi(m)-1.
struct IdealBasis {
    CyclotomicElement gen;
    std::string label;

    long modulus() const { return gen.modulus(); }
    std::vector<CyclotomicElement> basis_vectors() const;
    Rat norm() const { return abs(norm_to_Q(gen)); }
};

IdealBasis ring_of_integers(long m);
// P^k for the ramified prime P = (1 - zeta) of a prime-power cyclotomic.
IdealBasis ideal_power_basis(long p, long r, long k);

// Search bound (coefficient height) and budget (candidates examined) for
// unit / generator enumeration; overridden by the CMK3_SEARCH_BOUND and
// CMK3_SEARCH_BUDGET environment variables.
long default_search_bound();
long default_search_budget();

// A unit u of O_F, F = Q(zeta_m)^+, with sigma_0(u) > 0 and sigma(u) < 0 at
// every other real embedding, smallest in the documented search order.
// Throws std::runtime_error when the search bound is exhausted.
CyclotomicElement find_sign_unit(long m, long sigma0_rep = 1, long height_bound = 0);

// gamma in Z[zeta_m] generating one prime ideal above the unramified prime q
// (|N(gamma)| = q^f). `orbit` selects among the Galois orbit of primes in the
// canonical labeling. Throws when the bounded search fails.
CyclotomicElement split_prime_generator(long m, long q, int orbit = 0, long bound = 0);

// true if x/y is a unit of Z[zeta_m], i.e. (x) = (y) as ideals.
bool associates(const CyclotomicElement& x, const CyclotomicElement& y);

// Largest v with x in P^v, P principal with generator pi (x nonzero).
long valuation_at(const CyclotomicElement& x, const CyclotomicElement& pi);

// Different of Q(zeta_m)/Q as a principal generator Phi_m'(zeta).
CyclotomicElement different_generator(long m);

}  // namespace cmk3
