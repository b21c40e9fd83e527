#include "cmk3/trace_lattices.hpp"

#include "cmk3/interval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>

namespace cmk3 {

namespace {

bool is_power_of(long m, long p) {
    while (m % p == 0) m /= p;
    return m == 1;
}

// deterministic bounded search for a real generator: pi in Z[zeta+zeta^-1]
// with |N_F(pi)| = p^{f_F}, enumerated by (support, height, lexicographic)
std::optional<CyclotomicElement> search_real_generator(long m, long p, long f_f, long bound) {
    std::vector<long> reps = real_embedding_reps(m);
    int n = static_cast<int>(reps.size());
    double log_target = f_f * std::log(static_cast<double>(p));
    Int target = 1;
    for (long i = 0; i < 2 * f_f; ++i) target *= p;  // |N_E| = p^{2 f_F}

    std::vector<std::vector<double>> emb(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        emb[i][0] = 1.0;
        for (int j = 1; j < n; ++j)
            emb[i][j] = 2.0 * std::cos(2.0 * M_PI * ((reps[i] * (long)j) % m) / m);
    }

    auto assemble = [&](const std::vector<long>& c, const std::vector<int>& sup) {
        std::vector<Rat> raw(m, Rat(0));
        for (size_t t = 0; t < sup.size(); ++t) {
            int j = sup[t];
            if (j == 0)
                raw[0] += Rat(c[t]);
            else {
                raw[j] += Rat(c[t]);
                raw[m - j] += Rat(c[t]);
            }
        }
        return CyclotomicElement(m, raw);
    };

    std::optional<CyclotomicElement> found;
    long budget = default_search_budget();
    for (int nnz = 1; !found && budget > 0 && nnz <= std::min(n, 5); ++nnz) {
        for (long h = 1; !found && budget > 0 && h <= bound; ++h) {
            std::vector<int> sup(nnz);
            std::function<void(int, int)> iterate = [&](int pos, int start) {
                if (found || budget <= 0) return;
                if (pos < nnz) {
                    for (int s = start; s < n && !found; ++s) {
                        sup[pos] = s;
                        iterate(pos + 1, s + 1);
                    }
                    return;
                }
                std::vector<long> c(nnz, -h);
                c[0] = 1;
                while (!found && budget-- > 0) {
                    bool at_h = false, nz = true;
                    for (long x : c) {
                        if (x == h || x == -h) at_h = true;
                        if (x == 0) nz = false;
                    }
                    if (at_h && nz) {
                        double la = 0;
                        bool usable = true;
                        for (int i = 0; i < n && usable; ++i) {
                            double v = 0;
                            for (int t = 0; t < nnz; ++t) v += c[t] * emb[i][sup[t]];
                            double a = std::abs(v);
                            if (a < 1e-12)
                                usable = false;
                            else
                                la += std::log(a);
                        }
                        if (usable && std::abs(la - log_target) < 0.1) {
                            CyclotomicElement g = assemble(c, sup);
                            if (!g.is_zero()) {
                                Rat nrm = norm_to_Q(g);
                                if (nrm == Rat(target) || nrm == -Rat(target)) {
                                    found = g;
                                    return;
                                }
                            }
                        }
                    }
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
    return found;
}

}  // namespace

std::string PrimeIdeal::label() const {
    long m = gen.modulus();
    if (e > 1 && is_power_of(m, p)) return "P";
    return "P" + std::to_string(p) + "." + std::to_string(index);
}

Int PrimeIdeal::norm() const {
    Int n = 1;
    for (long i = 0; i < f; ++i) n *= p;
    return n;
}

PrimeTable::PrimeTable(long m) : m_(m) {}

PrimeTable& prime_table(long m) {
    static std::map<long, PrimeTable> tables;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    return tables.try_emplace(m, m).first->second;
}

const std::vector<PrimeIdeal>& PrimeTable::primes_above(long p) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;

    AbelianField e = cyclotomic_field(m_);
    PrimeSplitting sp = prime_splitting(e, p);
    bool rel_ram = e.is_cm() && relative_place_data(e, p).behavior == PlaceBehavior::ramified;
    std::vector<PrimeIdeal> out;

    if (sp.e > 1) {
        if (sp.g != 1)
            throw std::runtime_error("primes_above: ramified prime with g > 1 not supported (m=" +
                                     std::to_string(m_) + ", p=" + std::to_string(p) + ")");
        long pv = 1, mm = m_;
        while (mm % p == 0) {
            mm /= p;
            pv *= p;
        }
        CyclotomicElement gen =
            CyclotomicElement::one(m_) - CyclotomicElement::zeta_power(m_, m_ / pv);
        out.push_back({p, 0, sp.f, sp.e, true, 0, rel_ram, gen});
    } else if (sp.f == e.degree()) {
        // inert: (p) itself is prime
        out.push_back({p, 0, sp.f, 1, true, 0, false, CyclotomicElement::from_rational(m_, Rat(p))});
    } else {
        bool fixed = primes_above_conj_fixed(e, p);
        long bound = std::max<long>(default_search_bound(), 12);
        CyclotomicElement g0 = CyclotomicElement::zero(m_);
        if (fixed) {
            auto r = search_real_generator(m_, p, sp.f / 2, bound);
            if (!r)
                throw std::runtime_error("primes_above: generator search failed (m=" +
                                         std::to_string(m_) + ", p=" + std::to_string(p) + ")");
            g0 = *r;
        } else {
            g0 = split_prime_generator(m_, p, 0, bound);
        }
        // Galois orbit, deduplicated by associateness, in increasing k order
        std::vector<CyclotomicElement> gens;
        for (long k : units_mod(m_)) {
            CyclotomicElement gk = galois_apply(k, g0);
            bool seen = false;
            for (const auto& prev : gens)
                if (associates(gk, prev)) seen = true;
            if (!seen) gens.push_back(gk);
        }
        if (static_cast<long>(gens.size()) != sp.g)
            throw std::logic_error("primes_above: orbit size mismatch");
        for (int i = 0; i < static_cast<int>(gens.size()); ++i)
            out.push_back({p, i, sp.f, 1, false, -1, false, gens[i]});
        for (int i = 0; i < static_cast<int>(gens.size()); ++i) {
            CyclotomicElement cbar = conjugate(gens[i]);
            for (int j = 0; j < static_cast<int>(gens.size()); ++j)
                if (associates(cbar, gens[j])) {
                    out[i].conj_index = j;
                    out[i].conj_fixed = (i == j);
                }
        }
    }
    return cache_.emplace(p, std::move(out)).first->second;
}

const PrimeIdeal& PrimeTable::prime(long p, int index) {
    const auto& v = primes_above(p);
    for (const auto& pr : v)
        if (pr.index == index) return pr;
    throw std::invalid_argument("prime index out of range");
}

const std::vector<CyclotomicElement>& PrimeTable::sign_units() {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    if (sign_units_) return *sign_units_;
    std::vector<CyclotomicElement> units;
    units.push_back(CyclotomicElement::from_rational(m_, Rat(-1)));
    // real cyclotomic units zeta^{(1-b)/2} (1 - zeta^b)/(1 - zeta); the
    // family generates a Galois-stable subgroup of O_F^x
    CyclotomicElement one_minus_zeta =
        CyclotomicElement::one(m_) - CyclotomicElement::zeta_power(m_, 1);
    for (long b : units_mod(m_)) {
        if (b == 1) continue;
        long bo = (b % 2 == 1) ? b : b + m_;  // odd representative (m odd case)
        if (bo % 2 == 0) continue;
        CyclotomicElement xi = CyclotomicElement::zeta_power(m_, mod_norm((1 - bo) / 2, m_)) *
                               (CyclotomicElement::one(m_) - CyclotomicElement::zeta_power(m_, b)) *
                               one_minus_zeta.inverse();
        if (xi.is_integral() && is_conjugation_fixed(xi) && !xi.is_zero()) units.push_back(xi);
    }
    try {
        CyclotomicElement u = find_sign_unit(m_);
        for (long k : real_embedding_reps(m_)) units.push_back(galois_apply(k, u));
    } catch (const std::runtime_error&) {
        // no sign unit within the bound; the cyclotomic units remain
    }
    sign_units_ = std::move(units);
    return *sign_units_;
}

Int DiscriminantIdeal::norm() const {
    Int n = 1;
    for (const auto& f : factors) {
        Int np = 1;
        for (long i = 0; i < f.f; ++i) np *= f.p;
        for (long i = 0; i < f.exponent; ++i) n *= np;
    }
    return n;
}

std::vector<Int> DiscriminantIdeal::abelian_invariants() const {
    std::vector<Int> out;
    for (const auto& fac : factors) {
        long e = fac.exponent;
        long er = fac.e_ram;
        long hi = (e + er - 1) / er;  // ceil
        long lo = e / er;
        long r = e % er;
        Int phi = 1;
        for (long i = 0; i < hi; ++i) phi *= fac.p;
        Int plo = 1;
        for (long i = 0; i < lo; ++i) plo *= fac.p;
        for (long c = 0; c < fac.f * r; ++c) out.push_back(phi);
        if (lo > 0)
            for (long c = 0; c < fac.f * (er - r); ++c) out.push_back(plo);
    }
    std::sort(out.begin(), out.end());
    return out;
}

long DiscriminantIdeal::length() const {
    std::map<long, long> counts;
    for (const auto& fac : factors)
        counts[fac.p] += fac.f * std::min(fac.exponent, fac.e_ram);
    long len = 0;
    for (auto& [p, c] : counts) len = std::max(len, c);
    return len;
}

std::string DiscriminantIdeal::label() const {
    if (factors.empty()) return "O_E";
    std::string s;
    PrimeTable& tab = prime_table(m);
    for (const auto& fac : factors) {
        if (!s.empty()) s += "*";
        s += tab.prime(fac.p, fac.index).label();
        if (fac.exponent != 1) s += "^" + std::to_string(fac.exponent);
    }
    return s;
}

DiscriminantIdeal ideal_product(const DiscriminantIdeal& a, const DiscriminantIdeal& b) {
    if (a.m != b.m) throw std::invalid_argument("ideal_product: field mismatch");
    DiscriminantIdeal out;
    out.m = a.m;
    std::map<std::pair<long, int>, DiscriminantIdeal::Factor> acc;
    for (const auto& f : a.factors) acc[{f.p, f.index}] = f;
    for (const auto& f : b.factors) {
        auto key = std::pair(f.p, f.index);
        auto it = acc.find(key);
        if (it == acc.end())
            acc[key] = f;
        else
            it->second.exponent += f.exponent;
    }
    for (auto& [k, f] : acc) out.factors.push_back(f);
    std::sort(out.factors.begin(), out.factors.end());
    return out;
}

TraceLattice trace_lattice(long m, const IdealBasis& ideal, const CyclotomicElement& alpha) {
    if (alpha.is_zero()) throw std::invalid_argument("trace_lattice: alpha = 0");
    if (!is_conjugation_fixed(alpha))
        throw std::invalid_argument("trace_lattice: alpha not conjugation-fixed");
    CyclotomicElement w = alpha * ideal.gen * conjugate(ideal.gen);
    long deg = static_cast<long>(w.coeffs().size());
    // gram[i][j] = Tr(w zeta^{i-j})
    std::vector<Rat> t(m);
    for (long d = 0; d < m; ++d)
        t[d] = trace_to_Q(w * CyclotomicElement::zeta_power(m, d));
    MatI gram(static_cast<int>(deg), static_cast<int>(deg));
    for (long i = 0; i < deg; ++i)
        for (long j = 0; j < deg; ++j) {
            const Rat& v = t[mod_norm(i - j, m)];
            if (v.get_den() != 1)
                throw std::invalid_argument("trace_lattice: form not integral on this ideal");
            gram(static_cast<int>(i), static_cast<int>(j)) = v.get_num();
        }
    TraceLattice out;
    out.m = m;
    out.ideal = ideal;
    out.alpha = alpha;
    out.lattice = IntegerLattice(std::move(gram));
    return out;
}

long delta_of(long p, int r) {
    long m = 1;
    for (int i = 0; i < r; ++i) m *= p;
    return different_exponent(cyclotomic_field(m), p);
}

TraceLattice craig_C(long p, int r, long k) {
    long m = 1;
    for (int i = 0; i < r; ++i) m *= p;
    long delta = delta_of(p, r);
    long d = (1 - delta) / 2;
    if (k < d)
        throw std::invalid_argument("craig_C: k < d, lattice not defined");
    TraceLattice out = trace_lattice(m, ideal_power_basis(p, r, k), CyclotomicElement::one(m));
    Int expect = 1;
    for (long i = 0; i < delta + 2 * k; ++i) expect *= p;
    if (abs(out.lattice.determinant()) != expect)
        throw std::logic_error("craig_C: determinant check failed");
    return out;
}

TraceLattice lambda_a(long p, int r, long a) {
    if (a < 1 || a % 2 == 0) throw std::invalid_argument("lambda_a: a must be odd and >= 1");
    long m = 1;
    for (int i = 0; i < r; ++i) m *= p;
    long delta = delta_of(p, r);
    long k = (a - delta) / 2;
    CyclotomicElement u = find_sign_unit(m);
    TraceLattice out = trace_lattice(m, ideal_power_basis(p, r, k), u);
    Signature sig = signature(out.lattice);
    if (sig.pos != 2) throw std::logic_error("lambda_a: signature check failed");
    return out;
}

TraceLattice delta_a(long p, int r, long a) {
    if (a < 1 || a % 2 == 0) throw std::invalid_argument("delta_a: a must be odd and >= 1");
    long m = 1;
    for (int i = 0; i < r; ++i) m *= p;
    long delta = delta_of(p, r);
    long k = (a - delta) / 2;
    TraceLattice out =
        trace_lattice(m, ideal_power_basis(p, r, k), CyclotomicElement::from_rational(m, Rat(-1)));
    Signature sig = signature(out.lattice);
    if (sig.pos != 0) throw std::logic_error("delta_a: not negative definite");
    return out;
}

DiscriminantIdeal discriminant_ideal(const TraceLattice& l) {
    long m = l.m;
    PrimeTable& tab = prime_table(m);
    CyclotomicElement gen_d = l.alpha * l.ideal.gen * conjugate(l.ideal.gen) * different_generator(m);
    Int detv = abs(l.lattice.determinant());
    DiscriminantIdeal out;
    out.m = m;
    for (auto& [p, e_rat] : factor(detv)) {
        for (const PrimeIdeal& pr : tab.primes_above(p)) {
            long v = valuation_at(gen_d, pr.gen);
            if (v < 0) throw std::logic_error("discriminant_ideal: negative valuation");
            if (v == 0) continue;
            out.factors.push_back({pr.p, pr.index, pr.f, pr.e, pr.conj_fixed, pr.conj_index, v});
        }
    }
    std::sort(out.factors.begin(), out.factors.end());
    // cross-checks: ideal-side norm against the matrix determinant, and the
    // module structure against the SNF of the Gram matrix
    if (out.norm() != detv)
        throw std::logic_error("discriminant_ideal: norm does not match |det|");
    DiscriminantGroup dg = discriminant_group(l.lattice);
    std::vector<Int> snf_factors;
    for (const Int& d : dg.invariant_factors)
        for (auto& [p, e] : factor(d)) {
            Int pe = 1;
            for (long i = 0; i < e; ++i) pe *= p;
            snf_factors.push_back(pe);
        }
    std::sort(snf_factors.begin(), snf_factors.end());
    if (snf_factors != out.abelian_invariants())
        throw std::logic_error("discriminant_ideal: group structure mismatch with SNF");
    return out;
}

std::optional<CyclotomicElement> fix_signs(long m, const CyclotomicElement& alpha,
                                           const std::vector<int>& target_signs) {
    std::vector<int> cur = embedding_signs(alpha);
    int n = static_cast<int>(cur.size());
    if (static_cast<int>(target_signs.size()) != n)
        throw std::invalid_argument("fix_signs: target size mismatch");
    std::vector<int> need(n);
    bool done = true;
    for (int i = 0; i < n; ++i) {
        need[i] = (cur[i] != target_signs[i]) ? 1 : 0;
        if (need[i]) done = false;
    }
    if (done) return alpha;

    const std::vector<CyclotomicElement>& units = prime_table(m).sign_units();
    std::vector<std::vector<int>> rows;
    for (const auto& u : units) {
        std::vector<int> s = embedding_signs(u);
        std::vector<int> r(n);
        for (int i = 0; i < n; ++i) r[i] = (s[i] < 0) ? 1 : 0;
        rows.push_back(r);
    }
    // solve sum x_j rows[j] = need over F_2
    int k = static_cast<int>(rows.size());
    std::vector<std::vector<int>> a(n, std::vector<int>(k + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) a[i][j] = rows[j][i];
        a[i][k] = need[i];
    }
    std::vector<int> pivot_col(n, -1);
    int row = 0;
    for (int col = 0; col < k && row < n; ++col) {
        int piv = -1;
        for (int i = row; i < n; ++i)
            if (a[i][col]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[row]);
        for (int i = 0; i < n; ++i)
            if (i != row && a[i][col])
                for (int j = 0; j <= k; ++j) a[i][j] ^= a[row][j];
        pivot_col[row] = col;
        ++row;
    }
    for (int i = row; i < n; ++i)
        if (a[i][k]) return std::nullopt;  // inconsistent
    std::vector<int> x(k, 0);
    for (int i = 0; i < row; ++i)
        if (a[i][k]) x[pivot_col[i]] = 1;

    CyclotomicElement out = alpha;
    for (int j = 0; j < k; ++j)
        if (x[j]) out = out * units[j];
    if (embedding_signs(out) != target_signs) return std::nullopt;
    return out;
}

namespace {

// real element pi of O_F with (pi) O_E = P, for a conjugation-fixed prime P
// that is unramified in E/F (so v_P(pi) can be odd)
std::optional<CyclotomicElement> real_generator_of(long m, const PrimeIdeal& pr) {
    if (!pr.conj_fixed || pr.rel_ramified) return std::nullopt;
    if (is_conjugation_fixed(pr.gen)) return pr.gen;
    // a root of unity times the generator is often already real
    for (long k = 0; k < m; ++k) {
        CyclotomicElement cand = CyclotomicElement::zeta_power(m, k) * pr.gen;
        if (is_conjugation_fixed(cand)) return cand;
    }
    long bound = std::max<long>(default_search_bound(), 12);
    auto r = search_real_generator(m, pr.p, pr.f / 2, bound);
    if (!r) return std::nullopt;
    // the search may have landed on a conjugate prime; walk the orbit
    for (long k : units_mod(m)) {
        CyclotomicElement cand = galois_apply(k, *r);
        if (associates(cand, pr.gen)) return cand;
    }
    return std::nullopt;
}

}  // namespace

TraceLattice twist(const TraceLattice& l, const IdealSpec& j) {
    if (j.empty()) return l;
    long m = l.m;
    PrimeTable& tab = prime_table(m);
    DiscriminantIdeal dl = discriminant_ideal(l);

    // conjugation stability and coprimality
    for (auto& [key, e] : j.exponents) {
        auto [p, idx] = key;
        if (e <= 0) throw std::invalid_argument("twist: exponents must be positive");
        const PrimeIdeal& pr = tab.prime(p, idx);
        if (!pr.conj_fixed) {
            auto it = j.exponents.find({p, pr.conj_index});
            if (it == j.exponents.end() || it->second != e)
                throw std::invalid_argument("twist: J not conjugation-stable");
        }
        for (const auto& f : dl.factors)
            if (f.p == p && f.index == idx)
                throw std::invalid_argument("twist: J not coprime to the discriminant ideal");
    }

    // condition (v) obstruction, only live when no finite place of F ramifies
    AbelianField e_field = cyclotomic_field(m);
    RamificationSets rams = ramification_sets(e_field);
    if (rams.ram.empty()) {
        long odd_fixed = 0;
        for (auto& [key, e] : j.exponents)
            if (tab.prime(key.first, key.second).conj_fixed && e % 2 == 1) ++odd_fixed;
        if (odd_fixed % 2 == 1)
            throw std::invalid_argument(
                "twist: condition (v) violated (Ram empty, odd number of fixed odd exponents)");
    }

    CyclotomicElement new_gen = l.ideal.gen;
    CyclotomicElement new_alpha = l.alpha;
    std::string label_suffix;
    for (auto& [key, e] : j.exponents) {
        auto [p, idx] = key;
        const PrimeIdeal& pr = tab.prime(p, idx);
        if (!pr.conj_fixed) {
            if (pr.conj_index < idx) continue;  // handle each pair once
            new_gen = new_gen * pr.gen.pow(e);
            label_suffix += "*" + pr.label() + (e != 1 ? "^" + std::to_string(e) : "");
        } else {
            long half = e / 2;
            if (half > 0) {
                new_gen = new_gen * pr.gen.pow(half);
                label_suffix += "*" + pr.label() + "^" + std::to_string(half);
            }
            if (e % 2 == 1) {
                // alpha picks up a totally positive real generator of P . O_F
                auto pi = real_generator_of(m, pr);
                if (!pi)
                    throw std::runtime_error("twist: no real generator for fixed prime p=" +
                                             std::to_string(pr.p));
                std::vector<int> pos(real_embedding_reps(m).size(), 1);
                auto fixed = fix_signs(m, *pi, pos);
                if (!fixed)
                    throw std::runtime_error(
                        "twist: no totally positive generator reachable with known units");
                new_alpha = new_alpha * *fixed;
            }
        }
    }

    IdealBasis nb{new_gen, l.ideal.label + label_suffix};
    TraceLattice out = trace_lattice(m, nb, new_alpha);
    // twist law check
    DiscriminantIdeal dj = discriminant_ideal(out);
    DiscriminantIdeal expect = dl;
    for (auto& [key, e] : j.exponents) {
        const PrimeIdeal& pr = tab.prime(key.first, key.second);
        DiscriminantIdeal one;
        one.m = m;
        one.factors.push_back({pr.p, pr.index, pr.f, pr.e, pr.conj_fixed, pr.conj_index, e});
        expect = ideal_product(expect, one);
    }
    if (!(dj == expect)) throw std::logic_error("twist: discriminant ideal law violated");
    Signature s_old = signature(l.lattice), s_new = signature(out.lattice);
    if (s_old.pos != s_new.pos || s_old.neg != s_new.neg)
        throw std::logic_error("twist: signature changed");
    return out;
}

EvennessCertificate is_even(const TraceLattice& l) {
    EvennessCertificate out;
    out.even = l.lattice.is_even();
    AbelianField e = cyclotomic_field(l.m);
    RelativePlaceData dy = relative_place_data(e, 2);
    if (dy.behavior != PlaceBehavior::ramified) {
        out.reason = "no dyadic place of F ramifies in E";
        if (!out.even) throw std::logic_error("even lattice expected (no dyadic ramification)");
        return out;
    }
    // dyadic valuation condition w(alpha I Ibar) >= 0
    PrimeTable& tab = prime_table(l.m);
    bool cond = true;
    CyclotomicElement w = l.alpha * l.ideal.gen * conjugate(l.ideal.gen);
    for (const PrimeIdeal& pr : tab.primes_above(2))
        if (valuation_at(w, pr.gen) < 0) cond = false;
    if (cond)
        out.reason = "w(alpha I Ibar) >= 0 at all dyadic places";
    else
        out.reason = "no sufficient condition applies; checked directly";
    return out;
}

bool isogenous_over_Q(const TraceLattice& a, const TraceLattice& b) {
    if (a.m != b.m) throw std::invalid_argument("isogenous_over_Q: field mismatch");
    if (embedding_signs(a.alpha) != embedding_signs(b.alpha))
        throw std::invalid_argument("isogenous_over_Q: O_E-signatures differ");
    DiscriminantIdeal da = discriminant_ideal(a), db = discriminant_ideal(b);
    std::map<std::pair<long, int>, long> ea, eb;
    for (const auto& f : da.factors)
        if (f.conj_fixed) ea[{f.p, f.index}] = f.exponent;
    for (const auto& f : db.factors)
        if (f.conj_fixed) eb[{f.p, f.index}] = f.exponent;
    std::set<std::pair<long, int>> keys;
    for (auto& [k, v] : ea) keys.insert(k);
    for (auto& [k, v] : eb) keys.insert(k);
    for (const auto& k : keys) {
        long va = ea.count(k) ? ea[k] : 0;
        long vb = eb.count(k) ? eb[k] : 0;
        if ((va - vb) % 2 != 0) return false;
    }
    return true;
}

MatI zeta_isometry(const TraceLattice& l, long k) {
    long m = l.m;
    long deg = l.rank();
    MatI mat(static_cast<int>(deg), static_cast<int>(deg));
    for (long i = 0; i < deg; ++i) {
        CyclotomicElement img = CyclotomicElement::zeta_power(m, mod_norm(i + k, m));
        for (long t = 0; t < deg; ++t) {
            const Rat& c = img.coeffs()[t];
            if (c.get_den() != 1) throw std::logic_error("zeta_isometry: non-integral action");
            mat(static_cast<int>(t), static_cast<int>(i)) = c.get_num();
        }
    }
    // Gram preservation M^T G M = G
    MatQ g = to_rat(l.lattice.gram());
    MatQ mq = to_rat(mat);
    if (!(mq.transpose() * g * mq == g)) throw std::logic_error("zeta_isometry: Gram not preserved");
    return mat;
}

std::optional<TraceLattice> realize_admissible(long m, int sig_pos, int sig_neg,
                                               const DiscriminantIdeal& target,
                                               std::string* failure) {
    auto fail = [&](const std::string& why) -> std::optional<TraceLattice> {
        if (failure) *failure = why;
        return std::nullopt;
    };
    PrimeTable& tab = prime_table(m);
    AbelianField e = cyclotomic_field(m);
    long n = e.half_degree();
    if (sig_pos + sig_neg != 2 * n || sig_pos % 2 != 0 || sig_neg % 2 != 0 || sig_pos < 0)
        return fail("condition (i): signature not realizable");
    long num_neg = sig_neg / 2;  // negative embeddings of alpha

    // slots: target factors plus every prime where D_E is nontrivial
    std::map<std::pair<long, int>, long> want;
    for (const auto& f : target.factors) want[{f.p, f.index}] = f.exponent;
    for (long p : ramified_primes(e))
        for (const PrimeIdeal& pr : tab.primes_above(p))
            want.try_emplace({pr.p, pr.index}, 0);

    CyclotomicElement ideal_gen = CyclotomicElement::one(m);
    CyclotomicElement alpha = CyclotomicElement::one(m);
    std::string ideal_label = "O_E";
    auto append_power = [&](const PrimeIdeal& pr, long k) {
        if (k == 0) return;
        ideal_gen = ideal_gen * pr.gen.pow(k);
        ideal_label += "*" + pr.label() + "^" + std::to_string(k);
    };

    for (const auto& [key, e_target] : want) {
        const PrimeIdeal& pr = tab.prime(key.first, key.second);
        long delta_p = pr.e > 1 ? different_exponent(e, pr.p) : 0;
        if (!pr.conj_fixed) {
            long epair = 0;
            auto it = want.find({pr.p, pr.conj_index});
            if (it != want.end()) epair = it->second;
            if (epair != e_target) return fail("condition (iii): pair exponents differ");
            if (pr.conj_index < pr.index) continue;  // one generator per pair
            append_power(pr, e_target - delta_p);
        } else {
            long r = e_target - delta_p;
            if (pr.rel_ramified) {
                // v_P(alpha) is even here, so e_P = delta_P mod 2 is forced
                if (r % 2 != 0) {
                    if (delta_p % 2 == 1 && e_target % 2 == 0)
                        return fail("condition (iv): even exponent at Ram_odd prime");
                    return fail("exponent parity at ramified prime incompatible");
                }
                append_power(pr, r / 2);
            } else {
                long b = mod_norm(r, 2);
                append_power(pr, (r - b) / 2);
                if (b == 1) {
                    auto pi = real_generator_of(m, pr);
                    if (!pi) return fail("no real generator found for fixed prime p=" +
                                         std::to_string(pr.p));
                    alpha = alpha * *pi;
                }
            }
        }
    }

    // target sign pattern: + at the first n - num_neg embeddings
    std::vector<int> target_signs(n, -1);
    for (long i = 0; i < n - num_neg; ++i) target_signs[i] = 1;
    auto fixed = fix_signs(m, alpha, target_signs);
    if (!fixed) return fail("sign pattern not reachable with known units (condition v)");

    TraceLattice out;
    try {
        out = trace_lattice(m, IdealBasis{ideal_gen, ideal_label}, *fixed);
    } catch (const std::exception& ex) {
        return fail(std::string("lattice assembly failed: ") + ex.what());
    }
    Signature s = signature(out.lattice);
    if (s.pos != sig_pos || s.neg != sig_neg) return fail("signature verification failed");
    DiscriminantIdeal d = discriminant_ideal(out);
    if (!(d == target)) return fail("discriminant ideal verification failed");
    return out;
}

}  // namespace cmk3
