#pragma once

#include "cmk3/abelian_fields.hpp"
#include "cmk3/cyclotomic.hpp"
#include "cmk3/lattice.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace cmk3 {

// One prime ideal of Z[zeta_m], held by a principal generator. Indices
// within the Galois orbit above p are assigned deterministically from the
// generator search (index 0 first, conjugates in increasing Galois order).
struct PrimeIdeal {
    long p;
    int index;
    long f;          // absolute residual degree
    long e;          // absolute ramification index
    bool conj_fixed;
    int conj_index;
    bool rel_ramified;  // the F-place below ramifies in E/F
    CyclotomicElement gen;

    std::string label() const;
    Int norm() const;  // p^f
};

// Cache of prime data per cyclotomic field; generator searches run on
// demand and are reused.
class PrimeTable {
  public:
    explicit PrimeTable(long m);
    long modulus() const { return m_; }
    const std::vector<PrimeIdeal>& primes_above(long p);
    const PrimeIdeal& prime(long p, int index);
    // units used to adjust signs of conjugation-fixed elements:
    // -1 and the Galois conjugates of the sign unit (when one is found)
    const std::vector<CyclotomicElement>& sign_units();

  private:
    long m_;
    std::recursive_mutex mu_;
    std::map<long, std::vector<PrimeIdeal>> cache_;
    std::optional<std::vector<CyclotomicElement>> sign_units_;
};

PrimeTable& prime_table(long m);  // shared per-field instance

// A conjugation-stable exponent map over labeled primes; the object
// D = prod P^{e_P}.
struct DiscriminantIdeal {
    struct Factor {
        long p;
        int index;
        long f;
        long e_ram;
        bool conj_fixed;
        int conj_index;
        long exponent;  // >= 1
        bool operator<(const Factor& o) const {
            return std::pair(p, index) < std::pair(o.p, o.index);
        }
        bool operator==(const Factor& o) const {
            return p == o.p && index == o.index && f == o.f && e_ram == o.e_ram &&
                   conj_fixed == o.conj_fixed && conj_index == o.conj_index &&
                   exponent == o.exponent;
        }
    };
    long m = 0;
    std::vector<Factor> factors;  // sorted, exponents >= 1

    Int norm() const;
    long length() const;  // minimal number of generators of O_E / D
    // multiset of prime-power cyclic orders of the group O_E / D
    std::vector<Int> abelian_invariants() const;
    std::string label() const;
    bool operator==(const DiscriminantIdeal& o) const { return m == o.m && factors == o.factors; }
};

// D1 * D2 (disjoint or overlapping supports).
DiscriminantIdeal ideal_product(const DiscriminantIdeal& a, const DiscriminantIdeal& b);

// An O_E-lattice (I, alpha) with Gram Tr_{E/Q}(alpha x ybar).
struct TraceLattice {
    long m = 0;  // E = Q(zeta_m)
    IdealBasis ideal;
    CyclotomicElement alpha;
    IntegerLattice lattice;

    long rank() const { return lattice.rank(); }
};

TraceLattice trace_lattice(long m, const IdealBasis& ideal, const CyclotomicElement& alpha);

// Craig-like lattices over Q(zeta_{p^r}): C_k = (P^k, 1); Lambda_a = (P^k, u)
// with k = (a - delta)/2 and u the sign unit; Delta_a = C_k(-1).
TraceLattice craig_C(long p, int r, long k);
TraceLattice lambda_a(long p, int r, long a);
TraceLattice delta_a(long p, int r, long a);

// delta = v_P(D_E) for the ramified prime of Q(zeta_{p^r}).
long delta_of(long p, int r);

DiscriminantIdeal discriminant_ideal(const TraceLattice& l);

// Twist specification: exponents over (p, index) slots; must be
// conjugation-stable and coprime to the discriminant ideal of the lattice
// being twisted.
struct IdealSpec {
    std::map<std::pair<long, int>, long> exponents;
    static IdealSpec trivial() { return {}; }
    bool empty() const { return exponents.empty(); }
};

TraceLattice twist(const TraceLattice& l, const IdealSpec& j);

struct EvennessCertificate {
    bool even;
    std::string reason;
};
EvennessCertificate is_even(const TraceLattice& l);

bool isogenous_over_Q(const TraceLattice& a, const TraceLattice& b);

// Matrix of multiplication by zeta^k on the ideal basis; Gram-preserving.
MatI zeta_isometry(const TraceLattice& l, long k);

// Constructive converse of the admissibility conditions: search for
// (I, alpha) with the given signature and discriminant ideal. On failure
// returns nullopt and stores the reason.
std::optional<TraceLattice> realize_admissible(long m, int sig_pos, int sig_neg,
                                               const DiscriminantIdeal& target,
                                               std::string* failure = nullptr);

// Signature of alpha at the real embeddings fixed to the target pattern by
// multiplying sign units; nullopt when the unit sign group cannot reach it.
std::optional<CyclotomicElement> fix_signs(long m, const CyclotomicElement& alpha,
                                           const std::vector<int>& target_signs);

}  // namespace cmk3
