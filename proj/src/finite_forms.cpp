#include "cmk3/finite_forms.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmk3 {

namespace {

Rat mod1(const Rat& x) {
    Int num = x.get_num(), den = x.get_den();
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Rat out(r, den);
    out.canonicalize();
    return out;
}

Rat mod2(const Rat& x) {
    Rat y = x / 2;
    return mod1(y) * 2;
}

}  // namespace

FiniteQuadraticForm::FiniteQuadraticForm(std::vector<Int> orders, MatQ bilinear,
                                         std::optional<std::vector<Rat>> quadratic)
    : orders_(std::move(orders)), bil_(std::move(bilinear)), quad_(std::move(quadratic)) {
    int k = num_gens();
    if (bil_.rows() != k || bil_.cols() != k)
        throw std::invalid_argument("bilinear matrix size mismatch");
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) bil_(i, j) = mod1(bil_(i, j));
    if (quad_) {
        if (static_cast<int>(quad_->size()) != k)
            throw std::invalid_argument("quadratic vector size mismatch");
        for (Rat& v : *quad_) v = mod2(v);
        for (int i = 0; i < k; ++i)
            if (mod1((*quad_)[i] - bil_(i, i)) != 0)
                throw std::invalid_argument("quadratic values inconsistent with bilinear ones");
    }
    // well-definedness on relations: orders[i] * b(g_i, g_j) in Z
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (mod1(bil_(i, j) * Rat(orders_[i])) != 0)
                throw std::invalid_argument("bilinear values not defined on relations");
}

Int FiniteQuadraticForm::group_order() const {
    Int n = 1;
    for (const Int& d : orders_) n *= d;
    return n;
}

Rat FiniteQuadraticForm::b_value(const std::vector<Int>& x, const std::vector<Int>& y) const {
    Rat acc = 0;
    int k = num_gens();
    for (int i = 0; i < k; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < k; ++j) {
            if (y[j] == 0) continue;
            acc += Rat(x[i] * y[j]) * bil_(i, j);
        }
    }
    return mod1(acc);
}

Rat FiniteQuadraticForm::q_value(const std::vector<Int>& x) const {
    if (!quad_) throw std::domain_error("form has no quadratic refinement");
    Rat acc = 0;
    int k = num_gens();
    for (int i = 0; i < k; ++i) {
        if (x[i] == 0) continue;
        acc += Rat(x[i] * x[i]) * (*quad_)[i];
        for (int j = i + 1; j < k; ++j)
            if (x[j] != 0) acc += 2 * Rat(x[i] * x[j]) * bil_(i, j);
    }
    return mod2(acc);
}

Int FiniteQuadraticForm::element_order(const std::vector<Int>& x) const {
    Int ord = 1;
    for (int i = 0; i < num_gens(); ++i) {
        if (x[i] % orders_[i] == 0) continue;
        Int g = gcd(x[i], orders_[i]);
        ord = lcm(ord, orders_[i] / g);
    }
    return ord;
}

bool FiniteQuadraticForm::is_nondegenerate() const {
    // radical trivial iff the lattice {v : B v integral} has index |G| in Z^k
    int k = num_gens();
    if (k == 0) return true;
    Int d = 1;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) d = lcm(d, bil_(i, j).get_den());
    MatI n(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Rat v = bil_(i, j) * Rat(d);
            v.canonicalize();
            n(i, j) = v.get_num();
        }
    SmithResult snf = smith_normal_form(n);
    Int index = 1;
    for (int i = 0; i < k; ++i) {
        Int dn = snf.D(i, i);
        index *= d / gcd(dn, d);
    }
    return index == group_order();
}

FiniteQuadraticForm FiniteQuadraticForm::negate() const {
    MatQ b = bil_;
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) b(i, j) = -b(i, j);
    std::optional<std::vector<Rat>> q;
    if (quad_) {
        q = *quad_;
        for (Rat& v : *q) v = -v;
    }
    return FiniteQuadraticForm(orders_, b, q);
}

FiniteQuadraticForm FiniteQuadraticForm::direct_sum(const FiniteQuadraticForm& o) const {
    int k1 = num_gens(), k2 = o.num_gens();
    std::vector<Int> orders = orders_;
    orders.insert(orders.end(), o.orders_.begin(), o.orders_.end());
    MatQ b(k1 + k2, k1 + k2);
    for (int i = 0; i < k1; ++i)
        for (int j = 0; j < k1; ++j) b(i, j) = bil_(i, j);
    for (int i = 0; i < k2; ++i)
        for (int j = 0; j < k2; ++j) b(k1 + i, k1 + j) = o.bil_(i, j);
    std::optional<std::vector<Rat>> q;
    if (quad_ && o.quad_) {
        q = *quad_;
        q->insert(q->end(), o.quad_->begin(), o.quad_->end());
    }
    return FiniteQuadraticForm(orders, b, q);
}

std::vector<std::vector<Int>> FiniteQuadraticForm::all_elements() const {
    std::vector<std::vector<Int>> out;
    int k = num_gens();
    std::vector<Int> x(k, 0);
    while (true) {
        out.push_back(x);
        int i = k - 1;
        while (i >= 0 && x[i] == orders_[i] - 1) {
            x[i] = 0;
            --i;
        }
        if (i < 0) break;
        ++x[i];
    }
    return out;
}

std::vector<std::pair<long, FiniteQuadraticForm>> p_primary_decompose(const FiniteQuadraticForm& f) {
    std::map<long, std::vector<int>> primes_to_gens;
    std::map<long, std::vector<Int>> scaled_order;
    int k = f.num_gens();
    std::map<long, long> all_primes;
    for (const Int& d : f.orders())
        for (auto& [p, e] : factor(d)) all_primes[p] += e;

    std::vector<std::pair<long, FiniteQuadraticForm>> out;
    for (auto& [p, etot] : all_primes) {
        // p-component of each cyclic factor: generated by (d_i / p^{v_i}) g_i
        std::vector<int> gens;
        std::vector<Int> mult, ords;
        for (int i = 0; i < k; ++i) {
            Int d = f.orders()[i];
            long v = 0;
            while (d % p == 0) {
                d /= p;
                ++v;
            }
            if (v == 0) continue;
            gens.push_back(i);
            mult.push_back(d);  // d_i / p^{v}
            Int pe = 1;
            for (long t = 0; t < v; ++t) pe *= p;
            ords.push_back(pe);
        }
        int kk = static_cast<int>(gens.size());
        MatQ b(kk, kk);
        std::optional<std::vector<Rat>> q;
        if (f.has_quadratic()) q = std::vector<Rat>(kk);
        for (int i = 0; i < kk; ++i) {
            std::vector<Int> xi(k, 0);
            xi[gens[i]] = mult[i];
            if (q) (*q)[i] = f.q_value(xi);
            for (int j = 0; j < kk; ++j) {
                std::vector<Int> xj(k, 0);
                xj[gens[j]] = mult[j];
                b(i, j) = f.b_value(xi, xj);
            }
        }
        out.emplace_back(p, FiniteQuadraticForm(ords, b, q));
    }
    return out;
}

namespace {

// quotient L'/R with L' = rowspan(ambient) and R = rowspan(relations),
// R a finite-index sublattice of L'. Returns nontrivial cyclic orders and
// generator lifts in the coordinates of the original Z^k.
struct Quotient {
    std::vector<Int> orders;
    std::vector<std::vector<Int>> lifts;
};

Quotient quotient_structure(const MatI& ambient, const MatI& relations) {
    int k = ambient.cols();
    int n = ambient.rows();
    // express relation rows in the ambient basis: C = relations * ambient^{-1}
    MatQ ainv = inverse(to_rat(ambient));
    MatQ cq = to_rat(relations) * ainv;
    MatI c = to_int(cq);  // integral since R subset L'
    // quotient of Z^n (coefficient space, row convention) by rowspan(C):
    // transpose to column convention and reuse SNF
    SmithResult snf = smith_normal_form(c.transpose());
    // Z^n / C^T Z^n: generators U^{-1} e_i with orders d_i
    MatQ uinv = inverse(to_rat(snf.U));
    Quotient out;
    for (int i = 0; i < n; ++i) {
        Int d = (i < snf.D.rows() && i < snf.D.cols()) ? snf.D(i, i) : Int(0);
        if (d == 1) continue;
        if (d == 0) throw std::logic_error("quotient_structure: infinite quotient");
        // coefficient vector in ambient basis
        std::vector<Rat> coef(n);
        for (int r = 0; r < n; ++r) coef[r] = uinv(r, i);
        // lift = coef * ambient (rational combination, must be integral)
        std::vector<Int> lift(k, 0);
        for (int j = 0; j < k; ++j) {
            Rat v = 0;
            for (int r = 0; r < n; ++r) v += coef[r] * Rat(ambient(r, j));
            if (v.get_den() != 1) throw std::logic_error("quotient_structure: non-integral lift");
            lift[j] = v.get_num();
        }
        out.orders.push_back(d);
        out.lifts.push_back(lift);
    }
    return out;
}

// sublagrangian reduction step at an isotropic element x (b(x,x) = 0):
// returns the induced form on x^perp / <x>
FiniteQuadraticForm reduce_at(const FiniteQuadraticForm& f, const std::vector<Int>& x) {
    int k = f.num_gens();
    // w_j = b(x, g_j); constraint sum w_j v_j in Z
    std::vector<Rat> w(k);
    Int den = 1;
    for (int j = 0; j < k; ++j) {
        std::vector<Int> e(k, 0);
        e[j] = 1;
        w[j] = f.b_value(x, e);
        den = lcm(den, w[j].get_den());
    }
    // solution lattice of n . v = 0 mod den, n_j = den * w_j
    MatI sys(1, k + 1);
    for (int j = 0; j < k; ++j) {
        Rat nj = w[j] * Rat(den);
        nj.canonicalize();
        sys(0, j) = nj.get_num();
    }
    sys(0, k) = den;
    // kernel of sys : Z^{k+1} -> Z via SNF, projected to first k coords
    SmithResult snf = smith_normal_form(sys);
    // columns of V beyond the rank span the kernel
    int rank = 0;
    for (int i = 0; i < std::min(snf.D.rows(), snf.D.cols()); ++i)
        if (snf.D(i, i) != 0) ++rank;
    std::vector<std::vector<Int>> kern;
    for (int c = rank; c < k + 1; ++c) {
        std::vector<Int> v(k);
        for (int r = 0; r < k; ++r) v[r] = snf.V(r, c);
        kern.push_back(v);
    }
    // ambient lattice x^perp: HNF of kernel rows stacked with D Z^k
    MatI stack(static_cast<int>(kern.size()) + k, k);
    for (size_t i = 0; i < kern.size(); ++i)
        for (int j = 0; j < k; ++j) stack(static_cast<int>(i), j) = kern[i][j];
    for (int i = 0; i < k; ++i) stack(static_cast<int>(kern.size()) + i, i) = f.orders()[i];
    MatI ambient = hnf_row_basis(stack);

    // relations: D Z^k together with x
    MatI rel(k + 1, k);
    for (int i = 0; i < k; ++i) rel(i, i) = f.orders()[i];
    for (int j = 0; j < k; ++j) rel(k, j) = x[j];
    MatI relbasis = hnf_row_basis(rel);

    Quotient qt = quotient_structure(ambient, relbasis);
    int kk = static_cast<int>(qt.orders.size());
    MatQ b(kk, kk);
    std::optional<std::vector<Rat>> q;
    if (f.has_quadratic()) q = std::vector<Rat>(kk);
    for (int i = 0; i < kk; ++i) {
        if (q) (*q)[i] = f.q_value(qt.lifts[i]);
        for (int j = 0; j < kk; ++j) b(i, j) = f.b_value(qt.lifts[i], qt.lifts[j]);
    }
    return FiniteQuadraticForm(qt.orders, b, q);
}

std::optional<std::vector<Int>> find_isotropic(const FiniteQuadraticForm& f) {
    // lazy odometer; isotropic vectors are dense, so this terminates fast
    int k = f.num_gens();
    std::vector<Int> x(k, 0);
    while (true) {
        int i = k - 1;
        while (i >= 0 && x[i] == f.orders()[i] - 1) {
            x[i] = 0;
            --i;
        }
        if (i < 0) return std::nullopt;
        ++x[i];
        if (f.b_value(x, x) == 0) return x;
    }
}

}  // namespace

bool WittClass::operator==(const WittClass& o) const {
    return parts.size() == o.parts.size() &&
           std::equal(parts.begin(), parts.end(), o.parts.begin(),
                      [](const auto& a, const auto& b) {
                          return a.first == b.first && a.second.rank == b.second.rank &&
                                 a.second.chi == b.second.chi;
                      });
}

std::string WittClass::label() const {
    if (parts.empty()) return "0";
    std::string s;
    for (const auto& [p, loc] : parts) {
        if (!s.empty()) s += " + ";
        s += "W" + std::to_string(p) + ":";
        if (loc.rank == 1)
            s += (loc.chi > 0 ? "<sq>" : "<nonsq>");
        else
            s += "<binary>";
    }
    return s;
}

WittClass witt_class(const FiniteQuadraticForm& f) {
    if (!f.is_nondegenerate()) throw std::invalid_argument("witt_class: degenerate form");
    WittClass out;
    for (auto& [p, part] : p_primary_decompose(f)) {
        FiniteQuadraticForm cur = part;
        while (true) {
            auto iso = find_isotropic(cur);
            if (!iso) break;
            cur = reduce_at(cur, *iso);
        }
        if (cur.num_gens() == 0) continue;
        WittClass::Local loc;
        loc.rank = cur.num_gens();
        if (loc.rank > 2) throw std::logic_error("anisotropic rank > 2");
        if (loc.rank == 1 && p != 2) {
            // value a/p on the generator; chi = Legendre(a, p)
            Rat v = cur.bilinear()(0, 0);
            if (v.get_den() != p) throw std::logic_error("unexpected anisotropic denominator");
            loc.chi = legendre(v.get_num(), p);
        }
        out.parts[p] = loc;
    }
    return out;
}

bool witt_equal(const FiniteQuadraticForm& f, const FiniteQuadraticForm& g) {
    return witt_class(f) == witt_class(g);
}

FiniteQuadraticForm standard_form(long p, int k, long a) {
    if (a % p == 0) throw std::invalid_argument("standard_form: a divisible by p");
    Int pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    MatQ b(1, 1);
    b(0, 0) = Rat(Int(a), pk);
    b(0, 0).canonicalize();
    std::optional<std::vector<Rat>> q;
    if (p != 2) {
        // even numerator lift of a mod p^k
        Int c = Int(a) % pk;
        if (c < 0) c += pk;
        if (c % 2 != 0) c += pk;
        Rat qv(c, pk);
        qv.canonicalize();
        q = std::vector<Rat>{qv};
    }
    return FiniteQuadraticForm({pk}, b, q);
}

std::optional<MatI> find_anti_isometry(const FiniteQuadraticForm& f, const FiniteQuadraticForm& g,
                                       const std::optional<MatI>& act_f,
                                       const std::optional<MatI>& act_g) {
    if (f.group_order() != g.group_order()) return std::nullopt;
    bool use_q = f.has_quadratic() && g.has_quadratic();
    int kf = f.num_gens();
    auto g_elems = g.all_elements();

    // candidate images per generator, filtered by order and value
    std::vector<std::vector<std::vector<Int>>> candidates(kf);
    for (int i = 0; i < kf; ++i) {
        std::vector<Int> ei(kf, 0);
        ei[i] = 1;
        Rat bii = f.b_value(ei, ei);
        for (const auto& y : g_elems) {
            if (g.element_order(y) != f.orders()[i]) continue;
            if (g.b_value(y, y) != mod1(-bii)) continue;
            if (use_q) {
                std::vector<Int> xi(kf, 0);
                xi[i] = 1;
                if (g.q_value(y) != mod2(-f.q_value(xi))) continue;
            }
            candidates[i].push_back(y);
        }
        if (candidates[i].empty()) return std::nullopt;
    }

    int kg = g.num_gens();
    std::vector<std::vector<Int>> chosen(kf);
    // equivariance at the leaf: gamma(act_f g_i) = act_g gamma(g_i)
    auto equivariant_ok = [&]() {
        if (!act_f || !act_g) return true;
        for (int i = 0; i < kf; ++i) {
            std::vector<Int> lhs(kg, 0), rhs(kg, 0);
            for (int j = 0; j < kf; ++j) {
                const Int& c = (*act_f)(j, i);
                if (c == 0) continue;
                for (int t = 0; t < kg; ++t) lhs[t] += c * chosen[j][t];
            }
            for (int t = 0; t < kg; ++t) {
                for (int s = 0; s < kg; ++s) rhs[t] += (*act_g)(t, s) * chosen[i][s];
                Int d = g.orders()[t];
                if (((lhs[t] - rhs[t]) % d + d) % d != 0) return false;
            }
        }
        return true;
    };
    // surjectivity: the images must generate g
    auto surjective_ok = [&]() {
        MatI rel(kf + kg, kg);
        for (int i = 0; i < kf; ++i)
            for (int j = 0; j < kg; ++j) rel(i, j) = chosen[i][j];
        for (int j = 0; j < kg; ++j) rel(kf + j, j) = g.orders()[j];
        // the generated subgroup has index |det of HNF| in Z^kg
        MatI basis = hnf_row_basis(rel);
        return abs(det(basis)) == 1;
    };
    // node budget: equivariance can reject astronomically many branches on
    // high-rank parts; exhausting the budget reports failure to the caller
    long budget = 200000;
    std::function<bool(int)> dfs = [&](int i) -> bool {
        if (i == kf) return equivariant_ok() && surjective_ok();
        std::vector<Int> ei(kf, 0);
        ei[i] = 1;
        for (const auto& y : candidates[i]) {
            if (--budget <= 0) return false;
            bool ok = true;
            for (int j = 0; j < i && ok; ++j) {
                std::vector<Int> ej(kf, 0);
                ej[j] = 1;
                if (g.b_value(y, chosen[j]) != mod1(-f.b_value(ei, ej))) ok = false;
            }
            if (!ok) continue;
            chosen[i] = y;
            if (dfs(i + 1)) return true;
        }
        return false;
    };
    if (!dfs(0)) return std::nullopt;

    MatI out(kf, g.num_gens());
    for (int i = 0; i < kf; ++i)
        for (int j = 0; j < g.num_gens(); ++j) out(i, j) = chosen[i][j];
    return out;
}

}  // namespace cmk3
