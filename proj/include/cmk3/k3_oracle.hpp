#pragma once

#include "cmk3/trace_lattices.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmk3 {

// Per-condition report for the discriminant-ideal criteria (i)-(v).
struct DiscVerdict {
    bool admissible = true;
    struct Item {
        std::string condition;  // "i" .. "v"
        bool pass;
        std::string detail;
    };
    std::vector<Item> items;
    std::string reason() const;
};

DiscVerdict check_disc_conditions(long m, int sig_pos, int sig_neg, const DiscriminantIdeal& d);

// All admissible discriminant ideals of norm <= bound, increasing norm then
// label. Triggers prime-generator searches for the slots it touches.
std::vector<DiscriminantIdeal> enumerate_admissible(long m, int sig_pos, int sig_neg,
                                                    const Int& norm_bound);

struct ExistenceVerdict {
    enum class Kind { infinitely_many, none, undetermined } kind;
    std::string reason;
    std::vector<long> offending_primes;
};
ExistenceVerdict exists_maximal_cm_k3(const AbelianField& e);

struct EmbeddingPredicates {
    bool primitively_embeds;
    bool uniquely_embeds;
    long length;
};
EmbeddingPredicates embedding_predicates(const IntegerLattice& t, long half_degree);

struct PicardVerdict {
    enum class Kind { U_N, q_I, not_realizable } kind;
    Int n;        // U(N)
    Int d, c;     // q_I: K = Q(sqrt d), order conductor c
    MatI gram;    // representative binary Gram for q_I
    std::string note;
    std::string reason;
};
PicardVerdict picard_classify(long m, const Int& det_value);

struct K3SurfaceRecord {
    long m = 0;
    long p = 0;
    long a = 0;
    std::string j_label;
    TraceLattice t;                     // transcendental side
    DiscriminantIdeal disc;
    long length = 0;
    bool embeds = false;
    bool embeds_unique = false;
    std::optional<IntegerLattice> s;    // glued Picard side, p in {3, 7, 11}
    bool glue_verified = false;
    bool glue_equivariant = false;      // multiplication by zeta extends to the glue
    TraceLattice delta;                 // Delta_{a,J}
    long delta_roots = 0;               // Mordell-Weil root-freeness data
    std::string provenance;
};

// J given as exponents over (p, index) prime slots of Q(zeta_p).
K3SurfaceRecord surface_X(long p, long a, const IdealSpec& j);

enum class SurfaceComparison { equal, different, undetermined };
SurfaceComparison surfaces_equal(const K3SurfaceRecord& a, const K3SurfaceRecord& b);

// O_E-module comparison of exponent maps up to Galois relabeling.
bool ideals_galois_equivalent(const DiscriminantIdeal& a, const DiscriminantIdeal& b);

}  // namespace cmk3
