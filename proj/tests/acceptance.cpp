// Acceptance suite: one line per criterion, exit 0 iff all pass.
// All arithmetic is exact; every expectation is pinned in code.

#include "cmk3/catalog.hpp"
#include "cmk3/k3_oracle.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace cmk3;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " criterion " << number << " (" << name << ")";
    if (!detail.empty()) line << ": " << detail;
    line << " [" << seconds << " s]";
    std::cout << line.str() << std::endl;
    if (!pass) ++failures;
}

void run(int number, const std::string& name, const std::function<std::string()>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    try {
        detail = body();
        pass = detail.empty();
    } catch (const std::exception& ex) {
        pass = false;
        detail = std::string("exception: ") + ex.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(number, name, pass, detail, secs);
}

Int int_pow(long p, long e) {
    Int r = 1;
    for (long i = 0; i < e; ++i) r *= p;
    return r;
}

// criterion 1: Witt class of disc C_k equals (Z/p, -e/p), e = p^{r-1} mod 4
std::string criterion_craig_discriminant() {
    for (long p : {3L, 5L, 7L, 11L, 13L})
        for (long a : {1L, 3L, 5L}) {
            long k = (a - delta_of(p, 1)) / 2;
            TraceLattice c = craig_C(p, 1, k);
            long e = 1;  // p^0 = 1 mod 4
            WittClass got = witt_class(discriminant_form(c.lattice));
            WittClass want = witt_class(standard_form(p, 1, -e));
            if (!(got == want))
                return "p=" + std::to_string(p) + " a=" + std::to_string(a) + ": got " +
                       got.label() + ", want " + want.label();
        }
    // r = 2, p = 3: e = 3 = -1 mod 4, class (1/3)
    for (long a : {1L, 3L}) {
        long k = (a - delta_of(3, 2)) / 2;
        TraceLattice c = craig_C(3, 2, k);
        WittClass got = witt_class(discriminant_form(c.lattice));
        WittClass want = witt_class(standard_form(3, 1, 1));
        if (!(got == want)) return "m=9 a=" + std::to_string(a) + ": got " + got.label();
    }
    return "";
}

// criterion 2: Witt class of disc Lambda_1 matches the worked examples
std::string criterion_lambda_witt() {
    auto check = [](long p, int r, long eps) -> std::string {
        TraceLattice l = lambda_a(p, r, 1);
        WittClass got = witt_class(discriminant_form(l.lattice));
        WittClass want = witt_class(standard_form(p, 1, eps));
        if (!(got == want))
            return "p^r=" + std::to_string(p) + "^" + std::to_string(r) + ": got " + got.label() +
                   ", want " + want.label();
        return "";
    };
    for (long p : {3L, 7L, 11L, 19L}) {  // p = 3 mod 4: (-1/p)
        std::string r = check(p, 1, -1);
        if (!r.empty()) return r;
    }
    for (long p : {5L, 13L}) {  // p = 5 mod 8: (2/p)
        std::string r = check(p, 1, 2);
        if (!r.empty()) return r;
    }
    {
        std::string r = check(17, 1, 3);  // (3/17)
        if (!r.empty()) return r;
    }
    // m = 9, 25, 27: (1/3), (2/5), (-1/3)
    std::string r = check(3, 2, 1);
    if (!r.empty()) return r;
    r = check(5, 2, 2);
    if (!r.empty()) return r;
    r = check(3, 3, -1);
    if (!r.empty()) return r;
    return "";
}

// criterion 3: C_d has the A_{p-1} invariants; E6 case at (p, r) = (3, 2)
std::string criterion_root_lattices() {
    for (long p : {3L, 5L, 7L, 11L}) {
        long d = (1 - delta_of(p, 1)) / 2;
        TraceLattice c = craig_C(p, 1, d);
        if (c.lattice.rank() != p - 1) return "rank mismatch at p=" + std::to_string(p);
        if (abs(c.lattice.determinant()) != p) return "det mismatch at p=" + std::to_string(p);
        if (!c.lattice.is_even()) return "not even at p=" + std::to_string(p);
        if (root_count(c.lattice.rescaled(-1)) != p * (p - 1))
            return "root count mismatch at p=" + std::to_string(p);
    }
    TraceLattice e6 = craig_C(3, 2, -4);
    if (e6.lattice.rank() != 6 || abs(e6.lattice.determinant()) != 3 || !e6.lattice.is_even())
        return "E6 invariants mismatch";
    if (root_count(e6.lattice.rescaled(-1)) != 72) return "E6 root count mismatch";
    return "";
}

// criterion 4: det T_{X_a} = p^a and the X_a are pairwise isogenous
std::string criterion_family_dets_isogeny() {
    for (long p : {3L, 5L, 7L, 11L}) {
        std::vector<TraceLattice> fam;
        for (long a : {1L, 3L, 5L}) {
            TraceLattice l = lambda_a(p, 1, a);
            if (abs(l.lattice.determinant()) != int_pow(p, a))
                return "det(T) != p^a at p=" + std::to_string(p) + " a=" + std::to_string(a);
            Signature s = signature(l.lattice);
            if (s.pos != 2 || s.neg != euler_phi(p) - 2)
                return "signature mismatch at p=" + std::to_string(p);
            fam.push_back(l);
        }
        for (size_t i = 0; i < fam.size(); ++i)
            for (size_t j = i + 1; j < fam.size(); ++j)
                if (!isogenous_over_Q(fam[i], fam[j]))
                    return "family not isogenous at p=" + std::to_string(p);
    }
    return "";
}

// criterion 5: root-freeness of the twisted Delta lattices
std::string criterion_root_freeness() {
    if (root_count(delta_a(7, 1, 3).lattice) != 0) return "Delta_3(7) has roots";
    if (root_count(delta_a(11, 1, 3).lattice) != 0) return "Delta_3(11) has roots";
    PrimeTable& tab = prime_table(7);
    IdealSpec j;
    j.exponents[{13, tab.primes_above(13)[0].index}] = 1;
    if (root_count(twist(delta_a(7, 1, 1), j).lattice) != 0) return "Delta_{1,J}(7) has roots";
    if (root_count(delta_a(7, 1, 1).lattice) == 0) return "Delta_1(7) unexpectedly root-free";
    return "";
}

// criterion 6: even unimodular (3,19) glue of Lambda and Delta + M, with
// the multiplication-by-zeta isometries extending to the glue
std::string criterion_glue() {
    auto check = [](long p, long a, const IdealSpec& j) -> std::string {
        TraceLattice lam = twist(lambda_a(p, 1, a), j);
        TraceLattice del = twist(delta_a(p, 1, a), j);
        int mrank = 24 - 2 * static_cast<int>(p);
        IntegerLattice s = del.lattice.direct_sum(standard_M(mrank));
        MatI act_t = zeta_isometry(lam, 1);
        MatI zd = zeta_isometry(del, 1);
        MatI act_s = MatI::identity(s.rank());
        for (int r = 0; r < zd.rows(); ++r)
            for (int c = 0; c < zd.cols(); ++c) act_s(r, c) = zd(r, c);
        GlueResult r = glue_even_unimodular(lam.lattice, s, act_t, act_s);
        std::string tag = "p=" + std::to_string(p) + " a=" + std::to_string(a);
        if (!r.ok()) return tag + ": " + r.failure;
        if (!r.equivariant) return tag + ": isometry did not extend";
        Signature sig = signature(r.glued);
        if (sig.pos != 3 || sig.neg != 19) return tag + ": wrong signature";
        if (abs(r.glued.determinant()) != 1 || !r.glued.is_even())
            return tag + ": not even unimodular";
        return "";
    };
    for (long p : {3L, 7L, 11L})
        for (long a : {1L, 3L}) {
            std::string r = check(p, a, IdealSpec::trivial());
            if (!r.empty()) return r;
        }
    PrimeTable& tab = prime_table(7);
    IdealSpec j;
    j.exponents[{13, tab.primes_above(13)[0].index}] = 1;
    for (long a : {1L, 3L}) {
        std::string r = check(7, a, j);
        if (!r.empty()) return r + " (13-twist)";
    }
    return "";
}

std::vector<std::vector<long>> all_subgroups(long m) {
    std::vector<long> units = units_mod(m);
    std::set<std::vector<long>> seen;
    std::vector<std::vector<long>> queue{subgroup_closure(m, {1})};
    seen.insert(queue[0]);
    for (size_t i = 0; i < queue.size(); ++i) {
        std::vector<long> h = queue[i];
        for (long u : units) {
            std::vector<long> gens = h;
            gens.push_back(u);
            std::vector<long> bigger = subgroup_closure(m, gens);
            if (seen.insert(bigger).second) queue.push_back(bigger);
        }
    }
    return {seen.begin(), seen.end()};
}

// criterion 7: existence trichotomy
std::string criterion_existence() {
    // all cyclotomic fields of degree 2..20
    for (long m = 3; m <= 200; ++m) {
        if (m % 4 == 2) continue;
        long deg = euler_phi(m);
        if (deg < 2 || deg > 20) continue;
        ExistenceVerdict v = exists_maximal_cm_k3(cyclotomic_field(m));
        if (v.kind != ExistenceVerdict::Kind::infinitely_many)
            return "cyclotomic m=" + std::to_string(m) + ": " + v.reason;
    }
    // all CM abelian fields of degree <= 14, conductor <= 100
    long count = 0;
    for (long m = 3; m <= 100; ++m) {
        if (m % 4 == 2) continue;
        for (const auto& h : all_subgroups(m)) {
            AbelianField k(m, h);
            if (k.conductor() != m) continue;  // counted at its own conductor
            if (!k.is_cm() || k.degree() > 14) continue;
            ++count;
            ExistenceVerdict v = exists_maximal_cm_k3(k);
            if (v.kind != ExistenceVerdict::Kind::infinitely_many)
                return "CM field " + k.describe() + ": " + v.reason;
        }
    }
    if (count < 100) return "CM field sample unexpectedly small";
    // the conductor-51 counterexample
    ExistenceVerdict v = exists_maximal_cm_k3(field_from_subgroup(51, {16}));
    if (v.kind != ExistenceVerdict::Kind::none) return "conductor-51 field: " + v.reason;
    if (v.reason.find("f=8") == std::string::npos) return "wrong reason: " + v.reason;
    return "";
}

// criterion 8: degree-20 Picard characterization
std::string criterion_picard() {
    for (long m : {44L, 66L}) {
        AbelianField e = cyclotomic_field(m);
        for (long n = 1; n <= 2000; ++n) {
            // oracle straight from the stated characterization
            bool expect = true;
            if (n % m != 1 % m) expect = false;
            long s2_sum = 0;
            for (auto& [p, k] : factor(Int(n))) {
                long r = p % m;
                if (r != 1 && r != m - 1) expect = false;
                if (r == m - 1) s2_sum += k;
            }
            if (s2_sum % 2 != 0) expect = false;
            PicardVerdict v = picard_classify(m, Int(n) * n);
            bool got = v.kind == PicardVerdict::Kind::U_N;
            if (got != expect)
                return "m=" + std::to_string(m) + " N=" + std::to_string(n) + ": got " +
                       (got ? "accept" : "reject") + ", want " + (expect ? "accept" : "reject");
            if (got && v.n != n) return "N mismatch";
        }
        PicardVerdict one = picard_classify(m, Int(1));
        if (one.note != "Kondo") return "N=1 not labeled Kondo for m=" + std::to_string(m);
    }
    PicardVerdict v = picard_classify(25, Int(5));
    if (v.kind != PicardVerdict::Kind::q_I || v.d != 5 || v.c != 1)
        return "m=25 det=5 not classified as q_I over Q(sqrt 5)";
    if (v.note != "Vorontsov") return "m=25 det=5 not labeled Vorontsov";
    return "";
}

// criterion 9: admissibility and realization round trip
std::string criterion_round_trip() {
    // (a) every admissible ideal of norm <= 2000 on Q(zeta_5/7/9) is realized
    for (long m : {5L, 7L, 9L}) {
        int s2 = static_cast<int>(euler_phi(m)) - 2;
        auto ideals = enumerate_admissible(m, 2, s2, Int(2000));
        if (ideals.empty()) return "no admissible ideals for m=" + std::to_string(m);
        for (const auto& d : ideals) {
            std::string why;
            auto lat = realize_admissible(m, 2, s2, d, &why);
            if (!lat) return "m=" + std::to_string(m) + " " + d.label() + ": " + why;
            if (!(discriminant_ideal(*lat) == d))
                return "m=" + std::to_string(m) + " " + d.label() + ": ideal mismatch";
            Signature s = signature(lat->lattice);
            if (s.pos != 2 || s.neg != s2)
                return "m=" + std::to_string(m) + " " + d.label() + ": signature mismatch";
            if (!lat->lattice.is_even())
                return "m=" + std::to_string(m) + " " + d.label() + ": not even";
        }
    }

    // (b) completeness at desk scale for Q(zeta_5), norm <= 500: every
    // exponent map not emitted violates a named condition and fails to realize
    {
        long m = 5;
        auto emitted = enumerate_admissible(m, 2, 2, Int(500));
        std::set<std::string> emitted_labels;
        for (const auto& d : emitted) emitted_labels.insert(d.label());
        PrimeTable& tab = prime_table(m);
        std::vector<const PrimeIdeal*> slots;
        for (long p : {2L, 3L, 5L, 11L, 19L})  // all primes with N(P) <= 500
            for (const PrimeIdeal& pr : tab.primes_above(p)) slots.push_back(&pr);
        std::vector<long> exps(slots.size(), 0);
        std::string bad;
        std::function<void(size_t, Int)> dfs = [&](size_t i, Int norm) {
            if (!bad.empty()) return;
            if (i == slots.size()) {
                DiscriminantIdeal d;
                d.m = m;
                for (size_t t = 0; t < slots.size(); ++t)
                    if (exps[t] > 0)
                        d.factors.push_back({slots[t]->p, slots[t]->index, slots[t]->f,
                                             slots[t]->e, slots[t]->conj_fixed,
                                             slots[t]->conj_index, exps[t]});
                if (emitted_labels.count(d.label())) return;
                DiscVerdict v = check_disc_conditions(m, 2, 2, d);
                if (v.admissible) {
                    bad = "non-emitted ideal " + d.label() + " passes conditions";
                    return;
                }
                std::string why;
                if (realize_admissible(m, 2, 2, d, &why))
                    bad = "non-emitted ideal " + d.label() + " was realized";
                return;
            }
            Int cur = norm;
            for (long k = 0;; ++k) {
                if (cur > 500) break;
                exps[i] = k;
                dfs(i + 1, cur);
                cur *= slots[i]->norm();
            }
            exps[i] = 0;
        };
        dfs(0, 1);
        if (!bad.empty()) return bad;
    }

    // (c) random (I, alpha) over Q(zeta_44) from the documented generator
    // set: conditions (i)-(v) hold on the computed discriminant ideal,
    // exercising the mod-8 rule on a Ram-empty field
    {
        long m = 44;
        PrimeTable& tab = prime_table(m);
        const CyclotomicElement& g89 = tab.primes_above(89)[0].gen;  // splits completely
        // real generator of P11 via the root-of-unity trick
        CyclotomicElement pi11 = tab.primes_above(11)[0].gen;
        for (long k = 0; k < m; ++k) {
            CyclotomicElement cand =
                CyclotomicElement::zeta_power(m, k) * tab.primes_above(11)[0].gen;
            if (is_conjugation_fixed(cand)) {
                pi11 = cand;
                break;
            }
        }
        std::vector<CyclotomicElement> alpha_pool{
            CyclotomicElement::from_rational(m, Rat(2)),
            CyclotomicElement::from_rational(m, Rat(11)),
            pi11,
            g89 * conjugate(g89),
        };
        if (tab.sign_units().size() > 1) alpha_pool.push_back(tab.sign_units()[1]);
        std::vector<CyclotomicElement> ideal_pool{
            tab.primes_above(2)[0].gen,
            tab.primes_above(11)[0].gen,
            g89,
            galois_apply(3, g89),
        };
        std::mt19937 rng(20260810);
        int built = 0;
        for (int trial = 0; trial < 60 && built < 12; ++trial) {
            CyclotomicElement alpha = CyclotomicElement::one(m);
            if (rng() % 2) alpha = -alpha;
            for (const auto& g : alpha_pool)
                if (rng() % 3 == 0) alpha = alpha * g;
            CyclotomicElement ig = CyclotomicElement::one(m);
            for (const auto& g : ideal_pool)
                if (rng() % 3 == 0) ig = ig * g;
            if (!is_conjugation_fixed(alpha) || alpha.is_zero()) continue;
            TraceLattice lat;
            try {
                lat = trace_lattice(m, IdealBasis{ig, "sample"}, alpha);
            } catch (const std::exception&) {
                continue;  // non-integral combination; skip
            }
            ++built;
            Signature s = signature(lat.lattice);
            DiscriminantIdeal d = discriminant_ideal(lat);
            DiscVerdict v = check_disc_conditions(m, s.pos, s.neg, d);
            if (!v.admissible)
                return "zeta_44 sample " + std::to_string(trial) + ": " + v.reason();
            if (!lat.lattice.is_even()) return "zeta_44 sample not even";
        }
        if (built < 8) return "too few zeta_44 samples built";
    }
    return "";
}

// criterion 10: the Brandhorst-Elkies record
std::string criterion_brandhorst_elkies() {
    PrimeTable& tab = prime_table(7);
    IdealSpec j;
    j.exponents[{13, tab.primes_above(13)[0].index}] = 1;
    K3SurfaceRecord rec = surface_X(7, 1, j);
    if (abs(rec.t.lattice.determinant()) != 7 * 169) return "det(T) != 7 * 169";
    // disc module O/P + O/J
    if (rec.disc.factors.size() != 2) return "disc module support mismatch";
    if (rec.disc.factors[0].p != 7 || rec.disc.factors[0].exponent != 1)
        return "P-part of the disc module wrong";
    if (rec.disc.factors[1].p != 13 || rec.disc.factors[1].exponent != 1 ||
        rec.disc.factors[1].f != 2)
        return "J-part of the disc module wrong";
    if (!rec.embeds_unique) return "T not uniquely embedded";
    if (!rec.glue_verified || !rec.s) return "glue failed";
    if (abs(rec.s->determinant()) != 7 * 169) return "det(S) != 7 * 169";
    return "";
}

}  // namespace

int main() {
    run(1, "Craig lattice Witt classes", criterion_craig_discriminant);
    run(2, "indefinite counterpart", criterion_lambda_witt);
    run(3, "A_{p-1} and E6 identities", criterion_root_lattices);
    run(4, "family determinants and isogeny", criterion_family_dets_isogeny);
    run(5, "root-freeness", criterion_root_freeness);
    run(6, "even unimodular gluing", criterion_glue);
    run(7, "existence trichotomy", criterion_existence);
    run(8, "degree-20 Picard characterization", criterion_picard);
    run(9, "discriminant ideal round trip", criterion_round_trip);
    run(10, "Brandhorst-Elkies record", criterion_brandhorst_elkies);
    if (failures == 0)
        std::cout << "acceptance: all criteria passed" << std::endl;
    else
        std::cout << "acceptance: " << failures << " criteria FAILED" << std::endl;
    return failures == 0 ? 0 : 1;
}
