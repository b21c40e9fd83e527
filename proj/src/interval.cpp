#include "cmk3/interval.hpp"

#include <mpfr.h>

#include <stdexcept>

namespace cmk3 {

namespace {

Rat rat_from_mpfr(mpfr_t x) {
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, x);
    Rat r(q);
    mpq_clear(q);
    return r;
}

}  // namespace

RatInterval cos_combination(const std::vector<Rat>& coeffs, long mult, long m, int prec) {
    mpfr_t pi_d, pi_u, ang_d, ang_u, c_d, c_u, acc_d, acc_u, t;
    mpfr_inits2(prec, pi_d, pi_u, ang_d, ang_u, c_d, c_u, acc_d, acc_u, t, nullptr);
    mpfr_const_pi(pi_d, MPFR_RNDD);
    mpfr_const_pi(pi_u, MPFR_RNDU);
    mpfr_set_zero(acc_d, 0);
    mpfr_set_zero(acc_u, 0);

    for (size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == 0) continue;
        long k = mod_norm(mult * static_cast<long>(j), m);
        // angle = 2*pi*k/m, enclosed with directed rounding
        mpfr_mul_si(ang_d, pi_d, 2 * k, MPFR_RNDD);
        mpfr_div_si(ang_d, ang_d, m, MPFR_RNDD);
        mpfr_mul_si(ang_u, pi_u, 2 * k, MPFR_RNDU);
        mpfr_div_si(ang_u, ang_u, m, MPFR_RNDU);
        // cos over the tiny angle interval: evaluate both endpoints outward
        // and widen by the interval width (|cos'| <= 1)
        mpfr_cos(c_d, ang_d, MPFR_RNDD);
        mpfr_cos(c_u, ang_u, MPFR_RNDD);
        if (mpfr_cmp(c_u, c_d) < 0) mpfr_swap(c_u, c_d);
        mpfr_sub(t, ang_u, ang_d, MPFR_RNDU);
        mpfr_sub(c_d, c_d, t, MPFR_RNDD);
        mpfr_nextbelow(c_d);
        mpfr_add(c_u, c_u, t, MPFR_RNDU);
        mpfr_nextabove(c_u);
        // multiply by the exact rational coefficient
        mpfr_t lo, hi;
        mpfr_inits2(prec, lo, hi, nullptr);
        if (sgn(coeffs[j]) >= 0) {
            mpfr_mul_q(lo, c_d, coeffs[j].get_mpq_t(), MPFR_RNDD);
            mpfr_mul_q(hi, c_u, coeffs[j].get_mpq_t(), MPFR_RNDU);
        } else {
            mpfr_mul_q(lo, c_u, coeffs[j].get_mpq_t(), MPFR_RNDD);
            mpfr_mul_q(hi, c_d, coeffs[j].get_mpq_t(), MPFR_RNDU);
        }
        mpfr_add(acc_d, acc_d, lo, MPFR_RNDD);
        mpfr_add(acc_u, acc_u, hi, MPFR_RNDU);
        mpfr_clears(lo, hi, nullptr);
    }

    RatInterval out{rat_from_mpfr(acc_d), rat_from_mpfr(acc_u)};
    mpfr_clears(pi_d, pi_u, ang_d, ang_u, c_d, c_u, acc_d, acc_u, t, nullptr);
    return out;
}

int certified_sign(const std::vector<Rat>& coeffs, long mult, long m, int max_bits) {
    for (int prec = 64; prec <= max_bits; prec *= 2) {
        RatInterval iv = cos_combination(coeffs, mult, m, prec);
        if (!iv.contains_zero()) return iv.sign();
    }
    throw std::runtime_error("certified_sign: interval refinement exhausted (value may be zero)");
}

}  // namespace cmk3
