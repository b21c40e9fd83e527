#include "cmk3/numutil.hpp"

#include <algorithm>

namespace cmk3 {

std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat rat_parse(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

long euler_phi(long n) {
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

int moebius(long n) {
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

long gcd_long(long a, long b) {
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

long power_mod(long base, long exp, long mod) {
    long result = 1 % mod;
    base = mod_norm(base, mod);
    while (exp > 0) {
        if (exp & 1) result = (result * base) % mod;
        base = (base * base) % mod;
        exp >>= 1;
    }
    return result;
}

long mod_inverse(long a, long m) {
    long t = 0, newt = 1, r = m, newr = mod_norm(a, m);
    while (newr != 0) {
        long q = r / newr;
        long tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: not a unit");
    return mod_norm(t, m);
}

bool is_prime_long(long n) {
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::vector<long> primes_up_to(long bound) {
    std::vector<bool> sieve(bound + 1, true);
    std::vector<long> out;
    for (long i = 2; i <= bound; ++i) {
        if (sieve[i]) {
            out.push_back(i);
            for (long j = i * i; j <= bound; j += i) sieve[j] = false;
        }
    }
    return out;
}

std::map<long, long> factor(const Int& n, long trial_bound) {
    std::map<long, long> out;
    Int m = abs(n);
    if (m == 0) throw std::invalid_argument("factor(0)");
    for (long p = 2; Int(p) * p <= m && p <= trial_bound; p == 2 ? p = 3 : p += 2) {
        while (m % p == 0) {
            out[p]++;
            m /= p;
        }
    }
    if (m > 1) {
        if (!m.fits_slong_p() || !is_prime_long(m.get_si()))
            throw std::runtime_error("factor: cofactor " + m.get_str() + " above trial bound");
        out[m.get_si()]++;
    }
    return out;
}

Int isqrt(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Int& n, Int* root) {
    if (n < 0) return false;
    Int r = isqrt(n);
    if (r * r == n) {
        if (root) *root = r;
        return true;
    }
    return false;
}

int legendre(const Int& a, long p) {
    Int pp(p);
    int r = mpz_legendre(a.get_mpz_t(), pp.get_mpz_t());
    return r;
}

long valuation(Int n, const Int& d) {
    if (n == 0) throw std::invalid_argument("valuation of 0");
    if (abs(d) <= 1) throw std::invalid_argument("valuation base must have |d| > 1");
    long v = 0;
    while (n % d == 0) {
        n /= d;
        ++v;
    }
    return v;
}

std::vector<long> divisors(long n) {
    std::vector<long> out;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d != n / d) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

long mod_norm(long x, long m) {
    long r = x % m;
    return r < 0 ? r + m : r;
}

}  // namespace cmk3
