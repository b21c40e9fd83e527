#pragma once

#include "cmk3/finite_forms.hpp"
#include "cmk3/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmk3 {

// A nondegenerate integral lattice given by its Gram matrix.
class IntegerLattice {
  public:
    IntegerLattice() = default;
    explicit IntegerLattice(MatI gram, std::vector<std::string> labels = {});

    int rank() const { return gram_.rows(); }
    const MatI& gram() const { return gram_; }
    const std::vector<std::string>& labels() const { return labels_; }

    Int determinant() const;
    bool is_even() const;
    IntegerLattice rescaled(const Int& n) const;  // L(n)
    IntegerLattice direct_sum(const IntegerLattice& o) const;

  private:
    MatI gram_;
    std::vector<std::string> labels_;
};

Signature signature(const IntegerLattice& l);

// Discriminant group G_L = L^sharp / L via Smith normal form.
struct DiscriminantGroup {
    std::vector<Int> invariant_factors;  // nontrivial d1 | d2 | ...
    MatQ generator_lifts;                // row i = lift of generator i, coords in L basis
    MatI u;                              // SNF row transform of the Gram matrix
    std::vector<int> kept;               // SNF indices with d_i > 1
    long length() const { return static_cast<long>(invariant_factors.size()); }
    Int order() const {
        Int n = 1;
        for (const Int& d : invariant_factors) n *= d;
        return n;
    }
    // generator coordinates of an element of L^sharp given in L-basis coords
    std::vector<Int> coords(const MatQ& gram, const std::vector<Rat>& x) const;
};
DiscriminantGroup discriminant_group(const IntegerLattice& l);

// Discriminant form (bilinear mod 1; quadratic mod 2 when L is even).
FiniteQuadraticForm discriminant_form(const IntegerLattice& l);

// Complete enumeration of nonzero vectors with |q(x,x)| <= bound on a
// definite lattice, canonical order.
std::vector<std::vector<Int>> short_vectors(const IntegerLattice& l, const Int& bound);
// Vectors of norm -2 of a negative definite even lattice.
std::vector<std::vector<Int>> roots(const IntegerLattice& l);
long root_count(const IntegerLattice& l);

// U, U(N), A_n, E6, E8, E8(-1), and M_r = U + E8(-1)^{(r-2)/8}.
IntegerLattice standard_U(const Int& n = 1);
IntegerLattice standard_A(int n);
IntegerLattice standard_E6();
IntegerLattice standard_E8(int sign = +1);
IntegerLattice standard_M(int r);

// Overlattice generated by L and lifts of an isotropic subgroup H of G_L
// (rows = rational coordinates in the basis of L). Checks integrality and,
// for even L, evenness of the glue vectors. basis_out, when given, receives
// the basis of the overlattice in L-coordinates.
IntegerLattice overlattice(const IntegerLattice& l, const MatQ& glue_vectors,
                           MatQ* basis_out = nullptr);

struct GlueResult {
    IntegerLattice glued;
    MatI anti_isometry;   // generator images, rows indexed by G_T generators
    std::string failure;  // nonempty when gluing failed; names the prime
    bool equivariant = false;  // set when prescribed isometries extend
    MatQ glued_basis;     // rows = basis of the glue in T+S coordinates
    bool ok() const { return failure.empty(); }
};

// Even unimodular overlattice of T + S through an anti-isometry of the
// discriminant forms, searched per p-primary component. When isometries
// act_t of T and act_s of S are supplied, the anti-isometry is required to
// intertwine their induced actions on the discriminant groups, so the glued
// lattice carries an isometry restricting to both.
GlueResult glue_even_unimodular(const IntegerLattice& t, const IntegerLattice& s,
                                const std::optional<MatI>& act_t = std::nullopt,
                                const std::optional<MatI>& act_s = std::nullopt);

}  // namespace cmk3
