#include "cmk3/cyclotomic.hpp"

#include "cmk3/abelian_fields.hpp"
#include "cmk3/interval.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cmk3 {

namespace {

// integer polynomial division: num / den with den monic; returns quotient,
// num becomes the remainder
std::vector<Int> poly_divmod_monic(std::vector<Int>& num, const std::vector<Int>& den) {
    int dn = static_cast<int>(num.size()) - 1;
    int dd = static_cast<int>(den.size()) - 1;
    if (dn < dd) return {};
    std::vector<Int> q(dn - dd + 1);
    for (int i = dn; i >= dd; --i) {
        Int f = num[i];
        if (f == 0) continue;
        q[i - dd] = f;
        for (int j = 0; j <= dd; ++j) num[i - dd + j] -= f * den[j];
    }
    while (num.size() > 1 && num.back() == 0) num.pop_back();
    return q;
}

struct FieldData {
    long m = 0;
    long deg = 0;
    std::vector<Int> phi;                   // Phi_m, monic
    std::vector<std::vector<Rat>> zpow;     // zeta^j reduced, j in [0, m)
    std::vector<Rat> basis_trace;           // Tr(zeta^i), i < deg
    std::vector<long> units;                // (Z/m)^*
};

std::vector<Rat> reduce_poly(const std::vector<Rat>& raw, const FieldData& fd) {
    std::vector<Rat> r = raw;
    int dd = static_cast<int>(fd.deg);
    for (int i = static_cast<int>(r.size()) - 1; i >= dd; --i) {
        Rat f = r[i];
        if (f == 0) continue;
        for (int j = 0; j <= dd; ++j) r[i - dd + j] -= f * Rat(fd.phi[j]);
    }
    r.resize(dd);
    return r;
}

const FieldData& field_data(long m) {
    static std::map<long, FieldData> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    FieldData fd;
    fd.m = m;
    fd.phi = cyclotomic_polynomial(m);
    fd.deg = static_cast<long>(fd.phi.size()) - 1;
    fd.units = units_mod(m);

    fd.zpow.resize(m);
    std::vector<Rat> cur(1, Rat(1));
    for (long j = 0; j < m; ++j) {
        std::vector<Rat> red = cur;
        if (static_cast<long>(red.size()) > fd.deg) red = reduce_poly(red, fd);
        red.resize(fd.deg);
        fd.zpow[j] = red;
        cur.insert(cur.begin(), Rat(0));  // multiply by x
    }

    fd.basis_trace.assign(fd.deg, Rat(0));
    for (long i = 0; i < fd.deg; ++i) {
        std::vector<Rat> acc(fd.deg, Rat(0));
        for (long k : fd.units) {
            const std::vector<Rat>& z = fd.zpow[(i * k) % m];
            for (long t = 0; t < fd.deg; ++t) acc[t] += z[t];
        }
        for (long t = 1; t < fd.deg; ++t)
            if (acc[t] != 0) throw std::logic_error("basis trace not rational");
        fd.basis_trace[i] = acc[0];
    }
    return cache.emplace(m, std::move(fd)).first->second;
}

}  // namespace

std::vector<Int> cyclotomic_polynomial(long m) {
    // x^m - 1 divided by all Phi_d, d | m, d < m
    std::vector<Int> num(m + 1);
    num[0] = -1;
    num[m] = 1;
    for (long d : divisors(m)) {
        if (d == m) continue;
        std::vector<Int> phid = cyclotomic_polynomial(d);
        std::vector<Int> q = poly_divmod_monic(num, phid);
        if (num.size() > 1 || num[0] != 0)
            throw std::logic_error("cyclotomic polynomial division not exact");
        num = q;
    }
    return num;
}

CyclotomicElement::CyclotomicElement(long m, std::vector<Rat> coeffs) : m_(m) {
    const FieldData& fd = field_data(m);
    if (static_cast<long>(coeffs.size()) > fd.deg)
        c_ = reduce_poly(coeffs, fd);
    else {
        c_ = std::move(coeffs);
        c_.resize(fd.deg);
    }
}

CyclotomicElement CyclotomicElement::zero(long m) {
    return CyclotomicElement(m, std::vector<Rat>(field_data(m).deg));
}
CyclotomicElement CyclotomicElement::one(long m) { return from_rational(m, Rat(1)); }
CyclotomicElement CyclotomicElement::from_rational(long m, const Rat& q) {
    std::vector<Rat> c(field_data(m).deg);
    c[0] = q;
    return CyclotomicElement(m, std::move(c));
}
CyclotomicElement CyclotomicElement::zeta_power(long m, long k) {
    return CyclotomicElement(m, field_data(m).zpow[mod_norm(k, m)]);
}

bool CyclotomicElement::is_zero() const {
    for (const Rat& x : c_)
        if (x != 0) return false;
    return true;
}

bool CyclotomicElement::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rat CyclotomicElement::rational_value() const {
    if (!is_rational()) throw std::domain_error("element not rational");
    return c_.empty() ? Rat(0) : c_[0];
}

bool CyclotomicElement::is_integral() const {
    for (const Rat& x : c_)
        if (x.get_den() != 1) return false;
    return true;
}

CyclotomicElement CyclotomicElement::operator+(const CyclotomicElement& o) const {
    if (m_ != o.m_) throw std::invalid_argument("modulus mismatch");
    std::vector<Rat> r = c_;
    for (size_t i = 0; i < r.size(); ++i) r[i] += o.c_[i];
    return CyclotomicElement(m_, std::move(r));
}

CyclotomicElement CyclotomicElement::operator-(const CyclotomicElement& o) const {
    if (m_ != o.m_) throw std::invalid_argument("modulus mismatch");
    std::vector<Rat> r = c_;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= o.c_[i];
    return CyclotomicElement(m_, std::move(r));
}

CyclotomicElement CyclotomicElement::operator-() const {
    std::vector<Rat> r = c_;
    for (Rat& x : r) x = -x;
    return CyclotomicElement(m_, std::move(r));
}

CyclotomicElement CyclotomicElement::operator*(const CyclotomicElement& o) const {
    if (m_ != o.m_) throw std::invalid_argument("modulus mismatch");
    std::vector<Rat> raw(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) {
            if (o.c_[j] == 0) continue;
            raw[i + j] += c_[i] * o.c_[j];
        }
    }
    return CyclotomicElement(m_, std::move(raw));
}

CyclotomicElement CyclotomicElement::operator*(const Rat& q) const {
    std::vector<Rat> r = c_;
    for (Rat& x : r) x *= q;
    return CyclotomicElement(m_, std::move(r));
}

CyclotomicElement CyclotomicElement::inverse() const {
    if (is_zero()) throw std::domain_error("inversion of zero");
    const FieldData& fd = field_data(m_);
    // extended euclid over Q[x]: s * this + t * Phi = gcd = const
    std::vector<Rat> r0(fd.phi.size());
    for (size_t i = 0; i < fd.phi.size(); ++i) r0[i] = Rat(fd.phi[i]);
    std::vector<Rat> r1 = c_;
    while (r1.size() > 1 && r1.back() == 0) r1.pop_back();
    std::vector<Rat> s0(1, Rat(0)), s1(1, Rat(1));
    auto deg_of = [](const std::vector<Rat>& p) {
        int d = static_cast<int>(p.size()) - 1;
        while (d > 0 && p[d] == 0) --d;
        return d;
    };
    while (true) {
        int d1 = deg_of(r1);
        if (d1 == 0) break;
        int d0 = deg_of(r0);
        if (d0 < d1) {
            std::swap(r0, r1);
            std::swap(s0, s1);
            continue;
        }
        Rat f = r0[d0] / r1[d1];
        int shift = d0 - d1;
        for (int j = 0; j <= d1; ++j) r0[j + shift] -= f * r1[j];
        if (static_cast<int>(s0.size()) < shift + static_cast<int>(s1.size()))
            s0.resize(shift + s1.size());
        for (size_t j = 0; j < s1.size(); ++j) s0[j + shift] -= f * s1[j];
    }
    if (r1[0] == 0) throw std::domain_error("element not invertible");
    Rat inv_c = Rat(1) / r1[0];
    for (Rat& x : s1) x *= inv_c;
    return CyclotomicElement(m_, std::move(s1));
}

CyclotomicElement CyclotomicElement::pow(long k) const {
    CyclotomicElement base = k < 0 ? inverse() : *this;
    long e = k < 0 ? -k : k;
    CyclotomicElement acc = one(m_);
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

std::string CyclotomicElement::str() const {
    std::string out;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        std::string term = rat_str(c_[i]);
        if (i > 0) {
            if (term == "1") term = "";
            else if (term == "-1") term = "-";
            term += "z";
            if (i > 1) term += "^" + std::to_string(i);
        }
        if (!first && term[0] != '-') out += "+";
        out += term;
        first = false;
    }
    return first ? "0" : out;
}

CyclotomicElement galois_apply(long k, const CyclotomicElement& x) {
    long m = x.modulus();
    if (gcd_long(mod_norm(k, m), m) != 1) throw std::invalid_argument("galois_apply: k not a unit");
    const FieldData& fd = field_data(m);
    std::vector<Rat> acc(fd.deg);
    for (long i = 0; i < fd.deg; ++i) {
        const Rat& ci = x.coeffs()[i];
        if (ci == 0) continue;
        const std::vector<Rat>& z = fd.zpow[mod_norm(i * k, m)];
        for (long t = 0; t < fd.deg; ++t) acc[t] += ci * z[t];
    }
    return CyclotomicElement(m, std::move(acc));
}

CyclotomicElement conjugate(const CyclotomicElement& x) { return galois_apply(-1, x); }

bool is_conjugation_fixed(const CyclotomicElement& x) { return conjugate(x) == x; }

Rat trace_to_Q(const CyclotomicElement& x) {
    const FieldData& fd = field_data(x.modulus());
    Rat t = 0;
    for (long i = 0; i < fd.deg; ++i)
        if (x.coeffs()[i] != 0) t += x.coeffs()[i] * fd.basis_trace[i];
    return t;
}

Rat norm_to_Q(const CyclotomicElement& x) {
    const FieldData& fd = field_data(x.modulus());
    CyclotomicElement acc = CyclotomicElement::one(x.modulus());
    for (long k : fd.units) acc = acc * galois_apply(k, x);
    return acc.rational_value();
}

std::vector<long> real_embedding_reps(long m) {
    std::vector<long> reps;
    for (long k = 1; 2 * k < m || m <= 2; ++k) {
        if (gcd_long(k, m) == 1) reps.push_back(k);
        if (m <= 2) break;
    }
    return reps;
}

std::vector<int> embedding_signs(const CyclotomicElement& x) {
    if (x.is_zero()) throw std::domain_error("embedding_signs of zero");
    if (!is_conjugation_fixed(x)) throw std::domain_error("embedding_signs: element not real");
    std::vector<int> out;
    for (long k : real_embedding_reps(x.modulus()))
        out.push_back(certified_sign(x.coeffs(), k, x.modulus()));
    return out;
}

std::vector<CyclotomicElement> IdealBasis::basis_vectors() const {
    long m = gen.modulus();
    const FieldData& fd = field_data(m);
    std::vector<CyclotomicElement> out;
    out.reserve(fd.deg);
    for (long i = 0; i < fd.deg; ++i) out.push_back(gen * CyclotomicElement::zeta_power(m, i));
    return out;
}

IdealBasis ring_of_integers(long m) {
    return IdealBasis{CyclotomicElement::one(m), "O_E"};
}

IdealBasis ideal_power_basis(long p, long r, long k) {
    long m = 1;
    for (int i = 0; i < r; ++i) m *= p;
    if (!is_prime_long(p) || r < 1) throw std::invalid_argument("ideal_power_basis: need prime power");
    if (m < 3) throw std::invalid_argument("ideal_power_basis: conductor < 3");
    CyclotomicElement pi = CyclotomicElement::one(m) - CyclotomicElement::zeta_power(m, 1);
    std::string label = (k == 0) ? "O_E" : ("P^" + std::to_string(k));
    return IdealBasis{pi.pow(k), label};
}

long default_search_bound() {
    if (const char* env = std::getenv("CMK3_SEARCH_BOUND")) {
        long b = std::atol(env);
        if (b > 0) return b;
    }
    return 8;
}

long default_search_budget() {
    if (const char* env = std::getenv("CMK3_SEARCH_BUDGET")) {
        long b = std::atol(env);
        if (b > 0) return b;
    }
    return 4000000;  // candidates examined per bounded search
}

bool associates(const CyclotomicElement& x, const CyclotomicElement& y) {
    if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
    CyclotomicElement t = x * y.inverse();
    if (!t.is_integral()) return false;
    Rat n = norm_to_Q(t);
    return n == 1 || n == -1;
}

long valuation_at(const CyclotomicElement& x, const CyclotomicElement& pi) {
    if (x.is_zero()) throw std::domain_error("valuation of zero");
    CyclotomicElement inv = pi.inverse();
    // normalize x to an integral element first by scaling with the
    // denominator (a rational integer d has known valuation v_P(d))
    Int den = 1;
    for (const Rat& c : x.coeffs()) den = lcm(den, c.get_den());
    long shift = 0;
    if (den > 1) {
        // v_P(den) = v_P(p) * v_p(den) summed over the rational factorization
        std::map<long, long> df = factor(den);
        for (auto& [p, vp] : df) {
            // e_P per rational p: v_P(p)
            CyclotomicElement pe = CyclotomicElement::from_rational(x.modulus(), Rat(p));
            long e = 0;
            CyclotomicElement cur = pe;
            while (true) {
                cur = cur * inv;
                if (!cur.is_integral()) break;
                ++e;
            }
            shift += e * vp;
        }
    }
    CyclotomicElement y = x * CyclotomicElement::from_rational(x.modulus(), Rat(den));
    long v = 0;
    while (true) {
        y = y * inv;
        if (!y.is_integral()) break;
        ++v;
        if (v > 100000) throw std::logic_error("valuation runaway (pi is a unit?)");
    }
    return v - shift;
}

CyclotomicElement different_generator(long m) {
    const FieldData& fd = field_data(m);
    // Phi_m'(zeta)
    std::vector<Rat> d(fd.deg);
    for (long i = 1; i <= fd.deg; ++i) d[i - 1] = Rat(fd.phi[i] * i);
    return CyclotomicElement(m, std::move(d));
}

// ---- bounded searches -------------------------------------------------

namespace {

// next vector in the canonical enumeration of Z^n with max-norm exactly h:
// odometer over [-h, h]^n skipping interior-only vectors
bool next_vector(std::vector<long>& v, long h) {
    int n = static_cast<int>(v.size());
    while (true) {
        int i = n - 1;
        while (i >= 0 && v[i] == h) {
            v[i] = -h;
            --i;
        }
        if (i < 0) return false;
        ++v[i];
        for (int j = 0; j < n; ++j)
            if (v[j] == h || v[j] == -h) return true;
    }
}

std::vector<long> first_vector(int n, long h) {
    std::vector<long> v(n, -h);
    return v;
}

}  // namespace

CyclotomicElement find_sign_unit(long m, long sigma0_rep, long height_bound) {
    if (height_bound <= 0) height_bound = default_search_bound();
    std::vector<long> reps = real_embedding_reps(m);
    int nreps = static_cast<int>(reps.size());
    int n = nreps;  // [F : Q]
    int s0 = -1;
    for (int i = 0; i < nreps; ++i)
        if (reps[i] == sigma0_rep) s0 = i;
    if (s0 < 0) throw std::invalid_argument("find_sign_unit: bad sigma0");

    if (n == 1) return CyclotomicElement::one(m);  // F = Q, u = 1

    // basis of O_F: 1, b_1, ..., b_{n-1} with b_j = zeta^j + zeta^{-j};
    // numeric embedding table emb[i][j] = value of basis j at embedding i
    std::vector<std::vector<double>> emb(nreps, std::vector<double>(n));
    for (int i = 0; i < nreps; ++i) {
        emb[i][0] = 1.0;
        for (int j = 1; j < n; ++j)
            emb[i][j] = 2.0 * std::cos(2.0 * M_PI * ((reps[i] * (long)j) % m) / m);
    }

    auto assemble = [&](const std::vector<long>& c) {
        std::vector<Rat> raw(m, Rat(0));
        raw[0] = Rat(c[0]);
        for (int j = 1; j < n; ++j) {
            raw[j] += Rat(c[j]);
            raw[m - j] += Rat(c[j]);
        }
        return CyclotomicElement(m, raw);
    };

    long budget = default_search_budget();
    for (long h = 1; h <= height_bound && budget > 0; ++h) {
        std::vector<long> c = first_vector(n, h);
        bool more = true;
        // first_vector has max-norm h already; enumerate it and successors
        while (more && budget-- > 0) {
            bool plausible = true;
            double v0 = 0;
            for (int j = 0; j < n; ++j) v0 += c[j] * emb[s0][j];
            if (v0 < 1e-9) plausible = false;
            double logabs = plausible ? std::log(std::max(std::abs(v0), 1e-300)) : 0;
            for (int i = 0; plausible && i < nreps; ++i) {
                if (i == s0) continue;
                double v = 0;
                for (int j = 0; j < n; ++j) v += c[j] * emb[i][j];
                if (v > -1e-9) plausible = false;
                logabs += std::log(std::max(std::abs(v), 1e-300));
            }
            // |N_F(u)| = 1 requires the log-magnitudes to cancel
            if (plausible && std::abs(logabs) < 0.2) {
                CyclotomicElement u = assemble(c);
                if (!u.is_zero()) {
                    Rat nrm = norm_to_Q(u);  // = N_F(u)^2
                    if (nrm == 1) {
                        std::vector<int> signs = embedding_signs(u);
                        bool ok = true;
                        for (int i = 0; i < nreps; ++i)
                            if (signs[i] != (i == s0 ? 1 : -1)) ok = false;
                        if (ok) return u;
                    }
                }
            }
            more = next_vector(c, h);
        }
    }
    throw std::runtime_error("find_sign_unit: search exhausted at height " +
                             std::to_string(height_bound) + " for m=" + std::to_string(m));
}

namespace {

struct EmbeddingTable {
    std::vector<std::complex<double>> zeta_pow;  // e^{2 pi i j / m}
    std::vector<long> units;
};

const EmbeddingTable& embedding_table(long m) {
    static std::map<long, EmbeddingTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    EmbeddingTable t;
    t.zeta_pow.resize(m);
    for (long j = 0; j < m; ++j)
        t.zeta_pow[j] = std::polar(1.0, 2.0 * M_PI * j / m);
    t.units = units_mod(m);
    return cache.emplace(m, std::move(t)).first->second;
}

double numeric_abs_norm(const std::vector<long>& c, const std::vector<int>& support, long m) {
    const EmbeddingTable& t = embedding_table(m);
    double log_abs = 0;
    for (long k : t.units) {
        std::complex<double> v = 0;
        for (size_t idx = 0; idx < support.size(); ++idx)
            v += static_cast<double>(c[idx]) * t.zeta_pow[(support[idx] * k) % m];
        double a = std::abs(v);
        if (a < 1e-12) return -1;  // too close to zero to trust
        log_abs += std::log(a);
    }
    return log_abs;
}

}  // namespace

CyclotomicElement split_prime_generator(long m, long q, int orbit, long bound) {
    if (bound <= 0) bound = default_search_bound();
    AbelianField e = cyclotomic_field(m);
    PrimeSplitting sp = prime_splitting(e, q);
    if (sp.e != 1) throw std::invalid_argument("split_prime_generator: q ramifies");
    Int target = 1;
    for (long i = 0; i < sp.f; ++i) target *= q;
    double log_target = std::log(target.get_d());
    long deg = e.degree();

    auto exact_check = [&](const CyclotomicElement& g) {
        Rat n = norm_to_Q(g);
        return n == Rat(target) || n == -Rat(target);
    };

    // enumerate by (support size, height, support positions, coefficients);
    // position 0 is pinned to coefficient >= 1 to cut the +- symmetry
    std::optional<CyclotomicElement> found;
    long budget = default_search_budget();
    for (int nnz = 1; !found && budget > 0 && nnz <= std::min<long>(deg, 5); ++nnz) {
        for (long h = 1; !found && budget > 0 && h <= bound; ++h) {
            std::vector<int> support(nnz);
            std::function<void(int, int)> iterate = [&](int pos, int start) {
                if (found || budget <= 0) return;
                if (pos < nnz) {
                    for (int s = start; s < deg && !found; ++s) {
                        support[pos] = s;
                        iterate(pos + 1, s + 1);
                    }
                    return;
                }
                std::vector<long> c(nnz, -h);
                c[0] = 1;  // canonical sign normalization
                while (!found && budget-- > 0) {
                    bool at_h = false, nonzero_all = true;
                    for (long x : c) {
                        if (x == h || x == -h) at_h = true;
                        if (x == 0) nonzero_all = false;
                    }
                    if (at_h && nonzero_all) {
                        double la = numeric_abs_norm(c, support, m);
                        if (la >= 0 && std::abs(la - log_target) < 0.1) {
                            std::vector<Rat> raw(m, Rat(0));
                            for (int i = 0; i < nnz; ++i) raw[support[i]] += Rat(c[i]);
                            CyclotomicElement g(m, raw);
                            if (!g.is_zero() && exact_check(g)) {
                                found = g;
                                return;
                            }
                        }
                    }
                    // advance coefficients (c[0] stays in [1, h])
                    int i = nnz - 1;
                    while (i > 0 && c[i] == h) {
                        c[i] = -h;
                        --i;
                    }
                    if (i == 0) {
                        if (c[0] == h) break;
                        ++c[0];
                    } else
                        ++c[i];
                }
            };
            iterate(0, 0);
        }
    }
    if (!found)
        throw std::runtime_error("split_prime_generator: search exhausted for q=" +
                                 std::to_string(q) + ", m=" + std::to_string(m));
    // canonical orbit labeling: conjugates in increasing k order, dedup by
    // associateness
    std::vector<CyclotomicElement> orbit_gens;
    for (long k : units_mod(m)) {
        CyclotomicElement gk = galois_apply(k, *found);
        bool seen = false;
        for (const auto& prev : orbit_gens)
            if (associates(gk, prev)) seen = true;
        if (!seen) orbit_gens.push_back(gk);
    }
    if (orbit < 0 || orbit >= static_cast<int>(orbit_gens.size()))
        throw std::invalid_argument("split_prime_generator: orbit index out of range");
    return orbit_gens[orbit];
}

}  // namespace cmk3
