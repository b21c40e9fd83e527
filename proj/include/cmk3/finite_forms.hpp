#pragma once

#include "cmk3/matrix.hpp"
#include "cmk3/numutil.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cmk3 {

// A symmetric bilinear form on a finite abelian group, values in Q/Z, with
// optional quadratic refinement in Q/2Z (present when the form comes from an
// even lattice). Generators are independent: G = (+) Z/orders[i].
class FiniteQuadraticForm {
  public:
    FiniteQuadraticForm() = default;
    FiniteQuadraticForm(std::vector<Int> orders, MatQ bilinear,
                        std::optional<std::vector<Rat>> quadratic = std::nullopt);

    const std::vector<Int>& orders() const { return orders_; }
    const MatQ& bilinear() const { return bil_; }
    bool has_quadratic() const { return quad_.has_value(); }
    const std::vector<Rat>& quadratic() const { return *quad_; }

    int num_gens() const { return static_cast<int>(orders_.size()); }
    Int group_order() const;
    long length() const { return static_cast<long>(orders_.size()); }

    // values at arbitrary elements (exponent vectors)
    Rat b_value(const std::vector<Int>& x, const std::vector<Int>& y) const;  // mod 1
    Rat q_value(const std::vector<Int>& x) const;                             // mod 2

    Int element_order(const std::vector<Int>& x) const;
    bool is_nondegenerate() const;

    FiniteQuadraticForm negate() const;
    FiniteQuadraticForm direct_sum(const FiniteQuadraticForm& o) const;

    // all group elements, canonical (odometer) order; first is zero
    std::vector<std::vector<Int>> all_elements() const;

  private:
    std::vector<Int> orders_;
    MatQ bil_;
    std::optional<std::vector<Rat>> quad_;
};

// orthogonal splitting by prime; reassembling the parts gives the original
std::vector<std::pair<long, FiniteQuadraticForm>> p_primary_decompose(const FiniteQuadraticForm& f);

// Witt class in W(Q/Z) = (+)_p W(F_p): per prime the anisotropic rank (0, 1
// or 2); rank one carries the square class of the diagonal value.
struct WittClass {
    struct Local {
        int rank = 0;
        int chi = 0;  // rank 1, odd p: Legendre character of the value's numerator
    };
    std::map<long, Local> parts;  // only nontrivial primes

    bool operator==(const WittClass& o) const;
    std::string label() const;
};

WittClass witt_class(const FiniteQuadraticForm& f);
bool witt_equal(const FiniteQuadraticForm& f, const FiniteQuadraticForm& g);

// (Z/p^k, (a/p^k) xy), gcd(a, p) = 1; quadratic refinement uses the even
// numerator lift for odd p.
FiniteQuadraticForm standard_form(long p, int k, long a);

// Generator images in g defining an anti-isometry (q_g(im) = -q_f(x),
// bilinear negated); nullopt when none exists. Row i = image of generator i.
// When act_f, act_g are given (columns = images of generators under a group
// automorphism), the anti-isometry must intertwine them.
std::optional<MatI> find_anti_isometry(const FiniteQuadraticForm& f, const FiniteQuadraticForm& g,
                                       const std::optional<MatI>& act_f = std::nullopt,
                                       const std::optional<MatI>& act_g = std::nullopt);

}  // namespace cmk3
