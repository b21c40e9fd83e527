#include "cmk3/abelian_fields.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmk3 {

std::vector<long> units_mod(long m) {
    std::vector<long> u;
    for (long x = 1; x < m; ++x)
        if (gcd_long(x, m) == 1) u.push_back(x);
    if (m == 1) u.push_back(0);  // degenerate, not used in practice
    return u;
}

std::vector<long> subgroup_closure(long m, std::vector<long> gens) {
    std::set<long> h{1 % m};
    for (long& g : gens) {
        g = mod_norm(g, m);
        if (gcd_long(g, m) != 1)
            throw std::invalid_argument("subgroup generator not coprime to modulus");
    }
    bool grew = true;
    std::vector<long> elems(h.begin(), h.end());
    while (grew) {
        grew = false;
        std::vector<long> cur(h.begin(), h.end());
        for (long a : cur)
            for (long g : gens) {
                long x = (a * g) % m;
                if (h.insert(x).second) grew = true;
            }
        // close under products of existing elements (gens may not suffice
        // when called with a full element list)
        std::vector<long> cur2(h.begin(), h.end());
        for (long a : cur2)
            for (long b : cur2) {
                long x = (a * b) % m;
                if (h.insert(x).second) grew = true;
            }
    }
    return {h.begin(), h.end()};
}

std::vector<long> reduction_kernel(long m, long f) {
    std::vector<long> k;
    for (long x = 1; x < m; ++x)
        if (gcd_long(x, m) == 1 && x % f == 1 % f) k.push_back(x);
    if (k.empty()) k.push_back(1 % m);
    return k;
}

namespace {

bool subset_of(const std::vector<long>& a, const std::vector<long>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

AbelianField::AbelianField(long m, const std::vector<long>& gens) {
    if (m < 1) throw std::invalid_argument("conductor must be positive");
    if (m % 4 == 2) m /= 2;  // (Z/m)^* = (Z/(m/2))^* for m = 2 mod 4
    std::vector<long> h = subgroup_closure(m, gens);
    // conductor minimization: smallest f | m with ker(m -> f) contained in H
    for (long f : divisors(m)) {
        if (f % 4 == 2) continue;
        std::vector<long> ker = reduction_kernel(m, f);
        if (!subset_of(ker, h)) continue;
        // project H into (Z/f)^*
        std::set<long> hf;
        for (long x : h) hf.insert(f == 1 ? 0 : x % f);
        m_ = f;
        subgroup_ = {hf.begin(), hf.end()};
        degree_ = (f == 1) ? 1 : euler_phi(f) / static_cast<long>(subgroup_.size());
        return;
    }
    throw std::logic_error("conductor minimization failed");
}

bool AbelianField::contains_residue(long x) const {
    x = mod_norm(x, m_);
    return std::binary_search(subgroup_.begin(), subgroup_.end(), x);
}

bool AbelianField::is_totally_real() const {
    return m_ <= 2 || contains_residue(m_ - 1);
}

bool AbelianField::is_cm() const {
    return !is_totally_real() && degree_ % 2 == 0;
}

long AbelianField::half_degree() const {
    if (degree_ % 2 != 0) throw std::domain_error("field has odd degree");
    return degree_ / 2;
}

AbelianField AbelianField::maximal_real_subfield() const {
    if (is_totally_real())
        throw std::domain_error("maximal_real_subfield: field already totally real");
    std::vector<long> gens = subgroup_;
    gens.push_back(m_ - 1);
    return AbelianField(m_, gens);
}

std::string AbelianField::describe() const {
    std::string s = "(" + std::to_string(m_) + ", {";
    for (size_t i = 0; i < subgroup_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(subgroup_[i]);
    }
    return s + "})";
}

AbelianField cyclotomic_field(long m) {
    if (m % 4 == 2) m /= 2;
    if (m < 3) throw std::invalid_argument("cyclotomic conductor must be >= 3");
    return AbelianField(m, {1});
}

AbelianField field_from_subgroup(long m, const std::vector<long>& gens) {
    return AbelianField(m, gens);
}

namespace {

// order of x*S in (Z/m)^*/S where S is a sorted subgroup element list
long coset_order(long m, const std::vector<long>& s, long x) {
    long y = mod_norm(x, m);
    long ord = 1;
    while (!std::binary_search(s.begin(), s.end(), y)) {
        y = (y * mod_norm(x, m)) % m;
        ++ord;
        if (ord > m) throw std::logic_error("coset_order runaway");
    }
    return ord;
}

// subgroup of (Z/m)^* generated by H and the inertia group at p, i.e. the
// kernel of reduction to the prime-to-p part of m
std::vector<long> inertia_extended(const AbelianField& k, long p) {
    long m = k.conductor();
    long m1 = m;
    while (m1 % p == 0) m1 /= p;
    std::vector<long> gens = k.subgroup();
    for (long x : reduction_kernel(m, m1)) gens.push_back(x);
    return subgroup_closure(m, gens);
}

// a residue representing Frobenius at p modulo inertia: = p on the
// prime-to-p part of m, = 1 on the p-part
long frobenius_residue(long m, long p) {
    long pv = 1, m1 = m;
    while (m1 % p == 0) {
        m1 /= p;
        pv *= p;
    }
    if (m1 == 1) return 1;
    // CRT: x = p mod m1, x = 1 mod pv
    long x = mod_norm(p, m1);
    if (pv == 1) return x;
    long inv = mod_inverse(m1 % pv, pv);
    long r = (x + m1 * (((1 - x) % pv + pv) % pv * inv % pv)) % m;
    return mod_norm(r, m);
}

}  // namespace

PrimeSplitting prime_splitting(const AbelianField& k, long p) {
    if (!is_prime_long(p)) throw std::invalid_argument("prime_splitting: p not prime");
    long m = k.conductor();
    PrimeSplitting out;
    out.p = p;
    if (m == 1) return {p, 1, 1, 1, 1};
    std::vector<long> ih = inertia_extended(k, p);
    out.e = static_cast<long>(ih.size()) / static_cast<long>(k.subgroup().size());
    long fr = frobenius_residue(m, p);
    out.f = coset_order(m, ih, fr);
    out.g = k.degree() / (out.e * out.f);
    out.frobenius_coset = fr;
    return out;
}

long disc_valuation(const AbelianField& k, long p) {
    long m = k.conductor();
    long n = k.degree();
    // N(f) = number of characters of (Z/m)^*/H with conductor dividing f
    //      = degree of the subfield fixed by <H, ker(m->f)>
    // count with conductor exactly f via Moebius inversion over divisors
    long v = 0;
    std::vector<long> divs = divisors(m);
    auto nof = [&](long f) -> long {
        std::vector<long> gens = k.subgroup();
        for (long x : reduction_kernel(m, f)) gens.push_back(x);
        return n * static_cast<long>(k.subgroup().size()) /
               static_cast<long>(subgroup_closure(m, gens).size());
    };
    for (long f : divs) {
        if (f % p != 0) continue;
        long pf = valuation(Int(f), Int(p));
        long count = 0;
        for (long d : divisors(f)) count += moebius(f / d) * nof(d);
        v += count * pf;
    }
    return v;
}

long different_exponent(const AbelianField& k, long p) {
    long vdisc = disc_valuation(k, p);
    if (vdisc == 0) return 0;
    PrimeSplitting sp = prime_splitting(k, p);
    if (vdisc % (sp.f * sp.g) != 0)
        throw std::logic_error("conductor-discriminant inconsistency");
    return vdisc / (sp.f * sp.g);
}

std::vector<long> ramified_primes(const AbelianField& k) {
    std::vector<long> out;
    long m = k.conductor();
    for (long p = 2; p <= m; ++p)
        if (m % p == 0 && is_prime_long(p) && prime_splitting(k, p).e > 1) out.push_back(p);
    return out;
}

RelativePlaceData relative_place_data(const AbelianField& e, long p) {
    if (!e.is_cm()) throw std::domain_error("relative_place_data: field not CM");
    AbelianField f = e.maximal_real_subfield();
    PrimeSplitting se = prime_splitting(e, p);
    PrimeSplitting sf = prime_splitting(f, p);
    RelativePlaceData out;
    out.p = p;
    out.num_places_F = sf.g;
    out.f_F = sf.f;
    out.e_F = sf.e;
    out.f_E = se.f;
    out.e_E = se.e;
    out.g_E = se.g;
    if (se.e == 2 * sf.e)
        out.behavior = PlaceBehavior::ramified;
    else if (se.f == 2 * sf.f)
        out.behavior = PlaceBehavior::inert;
    else
        out.behavior = PlaceBehavior::split;
    out.v_E_of_different = different_exponent(e, p);
    return out;
}

RamificationSets ramification_sets(const AbelianField& e) {
    RamificationSets out;
    out.t = 0;
    out.s = e.half_degree();
    // Ram and Int_odd both require p | conductor (v_E(D_E) > 0 needs E/Q
    // ramified); int_primes records only the inert conductor divisors, the
    // full inert set being infinite.
    for (long p = 2; p <= e.conductor(); ++p) {
        if (e.conductor() % p != 0 || !is_prime_long(p)) continue;
        RelativePlaceData d = relative_place_data(e, p);
        if (d.behavior == PlaceBehavior::ramified) {
            out.ram.push_back(p);
            if (d.v_E_of_different % 2 == 1) out.ram_odd.push_back(p);
        } else if (d.behavior == PlaceBehavior::inert) {
            out.int_primes.push_back(p);
            if (d.v_E_of_different % 2 == 1) {
                out.int_odd.push_back(p);
                out.t += d.num_places_F;
            }
        }
    }
    return out;
}

long f_of_p(const AbelianField& e, long p) {
    if (!e.is_cm()) throw std::domain_error("f_of_p: field not CM");
    RelativePlaceData d = relative_place_data(e, p);
    if (d.behavior != PlaceBehavior::ramified) return 0;
    // Ram(p) = places of E above the F-places that ramify in E/F; each
    // E-place above such a v is unique and has residual degree f_E
    return d.num_places_F * d.f_E;
}

long f_of_2_absolute(const AbelianField& e) {
    if (different_exponent(e, 2) == 0) return 0;
    PrimeSplitting sp = prime_splitting(e, 2);
    return sp.g * sp.f;
}

bool primes_above_conj_fixed(const AbelianField& e, long p) {
    long m = e.conductor();
    std::vector<long> dp = inertia_extended(e, p);
    long fr = frobenius_residue(m, p);
    std::vector<long> gens = dp;
    gens.push_back(fr);
    std::vector<long> dec = subgroup_closure(m, gens);
    return std::binary_search(dec.begin(), dec.end(), mod_norm(-1, m));
}

SClass s1_s2_s3_membership(const AbelianField& e, long p) {
    if (e.degree() != 20) throw std::domain_error("s1_s2_s3: field degree must be 20");
    if (!e.is_cm()) throw std::domain_error("s1_s2_s3: field not CM");
    PrimeSplitting sp = prime_splitting(e, p);
    bool fixed = primes_above_conj_fixed(e, p);
    if (sp.f == 1 && !fixed) return SClass::S1;
    if (sp.f == 2 && fixed) return SClass::S2;
    if (sp.f == 1 && fixed) return SClass::S3;
    return SClass::none;
}

}  // namespace cmk3
