#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmk3 {

using Int = mpz_class;
using Rat = mpq_class;

// Exact fraction string "a/b" (or "a" when b = 1), the wire format used
// throughout the JSON interfaces.
std::string rat_str(const Rat& q);
Rat rat_parse(const std::string& s);

inline Int int_of(long v) { return Int(v); }

long euler_phi(long n);
int moebius(long n);
long gcd_long(long a, long b);
long power_mod(long base, long exp, long mod);
long mod_inverse(long a, long m);
bool is_prime_long(long n);
std::vector<long> primes_up_to(long bound);

// Trial-division factorization; throws if a cofactor above the trial bound
// remains (callers only factor integers assembled from known small primes).
std::map<long, long> factor(const Int& n, long trial_bound = 1000000);

// Floor of the square root; exact for nonnegative Int.
Int isqrt(const Int& n);
bool is_square(const Int& n, Int* root = nullptr);

// Legendre symbol (a/p) for odd prime p.
int legendre(const Int& a, long p);

// Largest e with d^e | n (n != 0).
long valuation(Int n, const Int& d);

// Divisors of n in increasing order.
std::vector<long> divisors(long n);

// x mod m normalized to [0, m).
long mod_norm(long x, long m);

}  // namespace cmk3
