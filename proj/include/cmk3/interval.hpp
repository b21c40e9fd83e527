#pragma once

#include "cmk3/numutil.hpp"

#include <vector>

namespace cmk3 {

// Real embeddings of cyclotomic integers are evaluated through certified
// dyadic intervals (MPFR with outward rounding). The only consumers are
// sign determinations, which refine precision until 0 is excluded.

// Encloses sum_j coeffs[j] * cos(2*pi*mult*j/m) at the given precision.
// Returns [lo, hi] as exact rationals (dyadic endpoints).
struct RatInterval {
    Rat lo, hi;
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    int sign() const { return lo > 0 ? 1 : (hi < 0 ? -1 : 0); }
};

RatInterval cos_combination(const std::vector<Rat>& coeffs, long mult, long m, int precision_bits);

// Certified sign of sum_j coeffs[j] * cos(2*pi*mult*j/m); the value must be
// nonzero (refinement diverges otherwise), capped by max_bits.
int certified_sign(const std::vector<Rat>& coeffs, long mult, long m, int max_bits = 4096);

}  // namespace cmk3
