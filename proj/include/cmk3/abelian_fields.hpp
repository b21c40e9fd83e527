#pragma once

#include "cmk3/numutil.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cmk3 {

// An abelian number field, stored as (conductor m, subgroup H of (Z/m)^*).
// The field is the fixed field of H acting on Q(zeta_m); constructors
// minimize the conductor, so equality of fields is equality of the stored
// data.
class AbelianField {
  public:
    // H = subgroup generated by `gens` (residues coprime to m).
    AbelianField(long m, const std::vector<long>& gens);

    long conductor() const { return m_; }
    const std::vector<long>& subgroup() const { return subgroup_; }
    long degree() const { return degree_; }

    bool is_cyclotomic() const { return subgroup_.size() == 1; }
    bool is_totally_real() const;
    bool is_cm() const;
    // n with [E:Q] = 2n; throws unless the degree is even.
    long half_degree() const;

    AbelianField maximal_real_subfield() const;

    bool contains_residue(long x) const;

    bool operator==(const AbelianField& o) const {
        return m_ == o.m_ && subgroup_ == o.subgroup_;
    }
    bool operator<(const AbelianField& o) const {
        if (m_ != o.m_) return m_ < o.m_;
        return subgroup_ < o.subgroup_;
    }

    std::string describe() const;

  private:
    long m_;
    std::vector<long> subgroup_;  // sorted, closed under multiplication mod m
    long degree_;
};

AbelianField cyclotomic_field(long m);
AbelianField field_from_subgroup(long m, const std::vector<long>& gens);

struct PrimeSplitting {
    long p;
    long e;  // ramification index
    long f;  // residual degree
    long g;  // number of primes above p
    long frobenius_coset;  // generator of the unramified quotient of D_p
};

PrimeSplitting prime_splitting(const AbelianField& k, long p);

// v_w(D_K) at the places w above p (equal for all of them), from the
// conductor-discriminant formula.
long different_exponent(const AbelianField& k, long p);

// v_p(disc K) = sum over characters of (Z/m)^*/H of v_p(cond chi).
long disc_valuation(const AbelianField& k, long p);

// Rational primes that ramify in K/Q.
std::vector<long> ramified_primes(const AbelianField& k);

enum class PlaceBehavior { split, inert, ramified };

struct RelativePlaceData {
    long p;
    long num_places_F;          // g_F
    long f_F, e_F;              // data of each F-place over p
    PlaceBehavior behavior;     // behavior of each F-place in E/F
    long f_E, e_E, g_E;
    long v_E_of_different;      // v_w(D_E) for E-places above p (absolute different)
};

RelativePlaceData relative_place_data(const AbelianField& e, long p);

// Summary of the ramification sets the existence criterion consumes.
struct RamificationSets {
    std::vector<long> ram;       // rational p with an F-place ramified in E/F
    std::vector<long> ram_odd;   // subset of ram with v_E(D_E) odd
    std::vector<long> int_primes;  // rational p with F-places inert in E/F
    std::vector<long> int_odd;
    long t;  // |Int_odd| counted over F-places
    long s;  // = n for CM fields
};
RamificationSets ramification_sets(const AbelianField& e);

// f(p) = sum of residual degrees f_w over Ram(p). For p = 2 this uses the
// relative reading (dyadic F-places ramified in E/F); the absolute variant
// is exposed separately below.
long f_of_p(const AbelianField& e, long p);

// Dyadic places of E with w(D_E) > 0 in the absolute sense: returns the sum
// of their residual degrees (0 when 2 is unramified in E/Q).
long f_of_2_absolute(const AbelianField& e);

enum class SClass { S1, S2, S3, none };
SClass s1_s2_s3_membership(const AbelianField& e, long p);

// Whether the primes of E above p are fixed by the involution.
bool primes_above_conj_fixed(const AbelianField& e, long p);

// --- subgroup utilities on (Z/m)^* ------------------------------------

std::vector<long> units_mod(long m);
std::vector<long> subgroup_closure(long m, std::vector<long> gens);
// {x in (Z/m)^* : x = 1 mod f} for f | m.
std::vector<long> reduction_kernel(long m, long f);

}  // namespace cmk3
