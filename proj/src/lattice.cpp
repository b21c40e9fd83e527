#include "cmk3/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmk3 {

IntegerLattice::IntegerLattice(MatI gram, std::vector<std::string> labels)
    : gram_(std::move(gram)), labels_(std::move(labels)) {
    if (gram_.rows() != gram_.cols()) throw std::invalid_argument("Gram matrix not square");
    if (!gram_.is_symmetric()) throw std::invalid_argument("Gram matrix not symmetric");
    if (det(gram_) == 0) throw std::invalid_argument("Gram matrix singular");
}

Int IntegerLattice::determinant() const { return det(gram_); }

bool IntegerLattice::is_even() const {
    for (int i = 0; i < rank(); ++i)
        if (gram_(i, i) % 2 != 0) return false;
    return true;
}

IntegerLattice IntegerLattice::rescaled(const Int& n) const {
    MatI g = gram_;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) g(i, j) *= n;
    return IntegerLattice(std::move(g), labels_);
}

IntegerLattice IntegerLattice::direct_sum(const IntegerLattice& o) const {
    int n1 = rank(), n2 = o.rank();
    MatI g(n1 + n2, n1 + n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) g(i, j) = gram_(i, j);
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j) g(n1 + i, n1 + j) = o.gram_(i, j);
    std::vector<std::string> lab = labels_;
    lab.insert(lab.end(), o.labels_.begin(), o.labels_.end());
    return IntegerLattice(std::move(g), std::move(lab));
}

Signature signature(const IntegerLattice& l) { return signature_of(to_rat(l.gram())); }

DiscriminantGroup discriminant_group(const IntegerLattice& l) {
    SmithResult snf = smith_normal_form(l.gram());
    int n = l.rank();
    MatQ ginv = inverse(to_rat(l.gram()));
    MatQ uinv = inverse(to_rat(snf.U));
    DiscriminantGroup out;
    out.u = snf.U;
    for (int i = 0; i < n; ++i)
        if (snf.D(i, i) != 1) out.kept.push_back(i);
    out.generator_lifts = MatQ(static_cast<int>(out.kept.size()), n);
    for (size_t r = 0; r < out.kept.size(); ++r) {
        out.invariant_factors.push_back(snf.D(out.kept[r], out.kept[r]));
        // dual coordinates U^{-1} e_i; lattice-basis coordinates G^{-1} c
        for (int j = 0; j < n; ++j) {
            Rat v = 0;
            for (int t = 0; t < n; ++t) v += ginv(j, t) * uinv(t, out.kept[r]);
            out.generator_lifts(static_cast<int>(r), j) = v;
        }
    }
    return out;
}

std::vector<Int> DiscriminantGroup::coords(const MatQ& gram, const std::vector<Rat>& x) const {
    int n = gram.rows();
    // dual coordinates c = G x must be integral for x in the dual lattice
    std::vector<Int> c(n);
    for (int i = 0; i < n; ++i) {
        Rat v = 0;
        for (int j = 0; j < n; ++j) v += gram(i, j) * x[j];
        if (v.get_den() != 1) throw std::invalid_argument("coords: vector not in the dual lattice");
        c[i] = v.get_num();
    }
    std::vector<Int> out(kept.size());
    for (size_t r = 0; r < kept.size(); ++r) {
        Int w = 0;
        for (int j = 0; j < n; ++j) w += u(kept[r], j) * c[j];
        const Int& d = invariant_factors[r];
        w %= d;
        if (w < 0) w += d;
        out[r] = w;
    }
    return out;
}

FiniteQuadraticForm discriminant_form(const IntegerLattice& l) {
    DiscriminantGroup dg = discriminant_group(l);
    int k = static_cast<int>(dg.invariant_factors.size());
    MatQ gq = to_rat(l.gram());
    MatQ b(k, k);
    std::optional<std::vector<Rat>> q;
    if (l.is_even()) q = std::vector<Rat>(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            Rat v = 0;
            for (int s = 0; s < l.rank(); ++s)
                for (int t = 0; t < l.rank(); ++t)
                    v += dg.generator_lifts(i, s) * gq(s, t) * dg.generator_lifts(j, t);
            b(i, j) = v;
            if (q && i == j) (*q)[i] = v;
        }
    }
    return FiniteQuadraticForm(dg.invariant_factors, b, q);
}

namespace {

// exact integer range of z with v*(z*b + a)^2 <= u*b^2, b > 0, v > 0
void quadratic_range(const Rat& c, const Rat& bound, Int& lo, Int& hi) {
    // |z + c| <= sqrt(bound): z in [-c - s, -c + s]
    Int a = c.get_num(), b = c.get_den();
    Int u = bound.get_num(), v = bound.get_den();
    if (u < 0) {
        lo = 1;
        hi = 0;
        return;
    }
    // W = floor(b * sqrt(u/v)): largest W with W^2 * v <= u * b^2
    Int rhs = u * b * b;
    Int w = isqrt(rhs / v);
    while ((w + 1) * (w + 1) * v <= rhs) ++w;
    while (w * w * v > rhs) --w;
    // z*b + a in [-w, w]
    Int lo_num = -w - a, hi_num = w - a;
    mpz_cdiv_q(lo.get_mpz_t(), lo_num.get_mpz_t(), b.get_mpz_t());
    mpz_fdiv_q(hi.get_mpz_t(), hi_num.get_mpz_t(), b.get_mpz_t());
}

}  // namespace

std::vector<std::vector<Int>> short_vectors(const IntegerLattice& l, const Int& bound) {
    Signature sig = signature(l);
    if (sig.pos != 0 && sig.neg != 0)
        throw std::invalid_argument("short_vectors: lattice must be definite");
    int n = l.rank();
    MatQ g = to_rat(l.gram());
    if (sig.pos == 0)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = -g(i, j);

    // G = U^T D U with U unit upper triangular
    MatQ u = MatQ::identity(n);
    std::vector<Rat> d(n);
    {
        MatQ a = g;
        for (int k = 0; k < n; ++k) {
            d[k] = a(k, k);
            if (d[k] <= 0) throw std::logic_error("definite reduction failed");
            for (int j = k + 1; j < n; ++j) u(k, j) = a(k, j) / d[k];
            for (int i = k + 1; i < n; ++i)
                for (int j = k + 1; j < n; ++j) a(i, j) -= a(i, k) * a(k, j) / d[k];
        }
    }

    std::vector<std::vector<Int>> out;
    std::vector<Int> x(n, 0);
    std::vector<Rat> partial(n + 1, Rat(0));  // sum over levels > i

    std::function<void(int)> rec = [&](int i) {
        if (i < 0) {
            for (const Int& v : x)
                if (v != 0) {
                    out.push_back(x);
                    return;
                }
            return;  // zero vector skipped
        }
        Rat c = 0;
        for (int j = i + 1; j < n; ++j) c += u(i, j) * Rat(x[j]);
        Rat room = (Rat(bound) - partial[i + 1]) / d[i];
        Int lo, hi;
        quadratic_range(c, room, lo, hi);
        for (Int z = lo; z <= hi; ++z) {
            x[i] = z;
            Rat y = Rat(z) + c;
            partial[i] = partial[i + 1] + d[i] * y * y;
            rec(i - 1);
        }
        x[i] = 0;
    };
    rec(n - 1);
    return out;
}

std::vector<std::vector<Int>> roots(const IntegerLattice& l) {
    Signature sig = signature(l);
    if (sig.pos != 0) throw std::invalid_argument("roots: lattice must be negative definite");
    std::vector<std::vector<Int>> all = short_vectors(l, 2);
    std::vector<std::vector<Int>> out;
    MatQ g = to_rat(l.gram());
    for (const auto& x : all) {
        Rat v = 0;
        for (int i = 0; i < l.rank(); ++i)
            for (int j = 0; j < l.rank(); ++j) v += Rat(x[i] * x[j]) * g(i, j);
        if (v == -2) out.push_back(x);
    }
    return out;
}

long root_count(const IntegerLattice& l) { return static_cast<long>(roots(l).size()); }

IntegerLattice standard_U(const Int& n) {
    MatI g(2, 2);
    g(0, 1) = n;
    g(1, 0) = n;
    return IntegerLattice(std::move(g), {"e", "f"});
}

IntegerLattice standard_A(int n) {
    MatI g(n, n);
    for (int i = 0; i < n; ++i) {
        g(i, i) = 2;
        if (i + 1 < n) {
            g(i, i + 1) = -1;
            g(i + 1, i) = -1;
        }
    }
    return IntegerLattice(std::move(g));
}

IntegerLattice standard_E6() {
    // Bourbaki numbering: chain 1-3-4-5-6, node 2 attached to 4
    MatI g(6, 6);
    for (int i = 0; i < 6; ++i) g(i, i) = 2;
    auto link = [&](int a, int b) {
        g(a, b) = -1;
        g(b, a) = -1;
    };
    link(0, 2);
    link(2, 3);
    link(3, 4);
    link(4, 5);
    link(1, 3);
    return IntegerLattice(std::move(g));
}

IntegerLattice standard_E8(int sign) {
    // chain 1-3-4-5-6-7-8, node 2 attached to 4
    MatI g(8, 8);
    for (int i = 0; i < 8; ++i) g(i, i) = 2;
    auto link = [&](int a, int b) {
        g(a, b) = -1;
        g(b, a) = -1;
    };
    link(0, 2);
    link(2, 3);
    link(3, 4);
    link(4, 5);
    link(5, 6);
    link(6, 7);
    link(1, 3);
    if (sign < 0)
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) g(i, j) = -g(i, j);
    return IntegerLattice(std::move(g));
}

IntegerLattice standard_M(int r) {
    if (r < 2 || (r - 2) % 8 != 0) throw std::invalid_argument("standard_M: need r = 2 mod 8");
    IntegerLattice m = standard_U();
    for (int i = 0; i < (r - 2) / 8; ++i) m = m.direct_sum(standard_E8(-1));
    return m;
}

IntegerLattice overlattice(const IntegerLattice& l, const MatQ& glue_vectors, MatQ* basis_out) {
    int n = l.rank();
    int h = glue_vectors.rows();
    MatQ gq = to_rat(l.gram());
    bool even = l.is_even();
    // isotropy of the glue subgroup: integral pairings, even self-pairings
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            Rat v = 0;
            for (int s = 0; s < n; ++s)
                for (int t = 0; t < n; ++t) v += glue_vectors(i, s) * gq(s, t) * glue_vectors(j, t);
            if (v.get_den() != 1)
                throw std::invalid_argument("overlattice: glue subgroup not isotropic (bilinear)");
            if (even && i == j && v.get_num() % 2 != 0)
                throw std::invalid_argument("overlattice: glue subgroup not isotropic (quadratic)");
        }

    // span of L and the glue vectors, via HNF on scaled coordinates
    Int den = 1;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < n; ++j) den = lcm(den, glue_vectors(i, j).get_den());
    MatI stack(n + h, n);
    for (int i = 0; i < n; ++i) stack(i, i) = den;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < n; ++j) {
            Rat v = glue_vectors(i, j) * Rat(den);
            v.canonicalize();
            stack(n + i, j) = v.get_num();
        }
    MatI basis = hnf_row_basis(stack);  // n x n, scaled by den
    MatQ bq(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bq(i, j) = Rat(basis(i, j), den);
            bq(i, j).canonicalize();
        }
    MatQ new_gram = bq * gq * bq.transpose();
    if (basis_out) *basis_out = bq;
    return IntegerLattice(to_int(new_gram));
}

namespace {

// induced action of a lattice isometry on the discriminant-group generators:
// column i = generator coordinates of act * lift_i
MatI induced_action(const IntegerLattice& l, const DiscriminantGroup& dg, const MatI& act) {
    int k = static_cast<int>(dg.invariant_factors.size());
    int n = l.rank();
    MatQ gq = to_rat(l.gram());
    MatQ aq = to_rat(act);
    MatI out(k, k);
    for (int i = 0; i < k; ++i) {
        std::vector<Rat> img(n, Rat(0));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) img[r] += aq(r, c) * dg.generator_lifts(i, c);
        std::vector<Int> co = dg.coords(gq, img);
        for (int r = 0; r < k; ++r) out(r, i) = co[r];
    }
    return out;
}

Rat mod1q(const Rat& x) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    Rat out(r, x.get_den());
    out.canonicalize();
    return out;
}

Rat mod2q(const Rat& x) { return mod1q(x / 2) * 2; }

// Anti-isometry search parameterized by the image of a module generator:
// the discriminant groups of the lattices in scope are cyclic modules over
// Z[action], so an intertwining map is gamma(act_f^k u) = act_g^k y. Linear
// scan over y; every candidate map is verified in full.
std::optional<MatI> module_anti_isometry(const FiniteQuadraticForm& f,
                                         const FiniteQuadraticForm& g, const MatI& af,
                                         const MatI& ag) {
    int kf = f.num_gens(), kg = g.num_gens();
    if (f.group_order() != g.group_order()) return std::nullopt;
    bool use_q = f.has_quadratic() && g.has_quadratic();
    int npow = 2 * std::max(kf, kg) + 2;  // enough action powers to span

    auto mod_orders = [](std::vector<Int> v, const std::vector<Int>& orders) {
        for (size_t i = 0; i < v.size(); ++i) {
            v[i] %= orders[i];
            if (v[i] < 0) v[i] += orders[i];
        }
        return v;
    };
    auto apply = [&](const MatI& a, const std::vector<Int>& x, const std::vector<Int>& orders) {
        std::vector<Int> out(x.size(), 0);
        for (size_t r = 0; r < x.size(); ++r) {
            for (size_t c = 0; c < x.size(); ++c) out[r] += a(static_cast<int>(r), static_cast<int>(c)) * x[c];
        }
        return mod_orders(out, orders);
    };

    // module generator u of f: powers of af span the whole group
    std::vector<std::vector<Int>> upow;
    {
        std::vector<Int> u(kf, 0);
        bool found = false;
        for (const auto& cand : f.all_elements()) {
            std::vector<std::vector<Int>> pows;
            std::vector<Int> cur = cand;
            for (int k = 0; k < npow; ++k) {
                pows.push_back(cur);
                cur = apply(af, cur, f.orders());
            }
            MatI stack(npow + kf, kf);
            for (int k = 0; k < npow; ++k)
                for (int j = 0; j < kf; ++j) stack(k, j) = pows[k][j];
            for (int j = 0; j < kf; ++j) stack(npow + j, j) = f.orders()[j];
            if (abs(det(hnf_row_basis(stack))) == 1) {
                u = cand;
                upow = pows;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;  // not cyclic over Z[af]
    }

    // standard generator e_i = sum_k c_k af^k u mod orders: solve once
    MatI sys(kf, npow + kf);
    for (int k = 0; k < npow; ++k)
        for (int j = 0; j < kf; ++j) sys(j, k) = upow[k][j];
    for (int j = 0; j < kf; ++j) sys(j, npow + j) = f.orders()[j];
    std::vector<std::vector<Int>> rep(kf);
    for (int i = 0; i < kf; ++i) {
        std::vector<Int> b(kf, 0);
        b[i] = 1;
        auto sol = solve_linear(sys, b);
        if (!sol) return std::nullopt;
        rep[i] = std::vector<Int>(sol->begin(), sol->begin() + npow);
    }

    // candidate images y, filtered by order and value of u
    Int order_u = f.element_order(upow[0]);
    Rat bu = f.b_value(upow[0], upow[0]);
    std::vector<std::vector<Int>> e_f(kf, std::vector<Int>(kf, 0));
    for (int i = 0; i < kf; ++i) e_f[i][i] = 1;
    for (const auto& y : g.all_elements()) {
        if (g.element_order(y) != order_u) continue;
        Rat by = g.b_value(y, y);
        Rat sum = bu + by;
        if (sum.get_den() != 1) continue;
        if (use_q) {
            Rat qs = f.q_value(upow[0]) + g.q_value(y);
            Rat half = qs / 2;
            if (half.get_den() != 1) continue;
        }
        // gamma(e_i) = sum_k rep[i][k] ag^k y
        std::vector<std::vector<Int>> ypow;
        std::vector<Int> cur = y;
        for (int k = 0; k < npow; ++k) {
            ypow.push_back(cur);
            cur = apply(ag, cur, g.orders());
        }
        std::vector<std::vector<Int>> img(kf, std::vector<Int>(kg, 0));
        for (int i = 0; i < kf; ++i) {
            for (int k = 0; k < npow; ++k)
                for (int j = 0; j < kg; ++j) img[i][j] += rep[i][k] * ypow[k][j];
            img[i] = mod_orders(img[i], g.orders());
        }
        // full verification: hom, anti-isometry, surjectivity
        bool ok = true;
        for (int i = 0; i < kf && ok; ++i) {
            Int oi = g.element_order(img[i]);
            Int d = f.orders()[i];
            if (d % oi != 0) ok = false;
            if (ok && use_q && g.q_value(img[i]) != mod2q(-f.q_value(e_f[i]))) ok = false;
            for (int j = i; j < kf && ok; ++j)
                if (g.b_value(img[i], img[j]) != mod1q(-f.b_value(e_f[i], e_f[j]))) ok = false;
        }
        if (!ok) continue;
        MatI rel(kf + kg, kg);
        for (int i = 0; i < kf; ++i)
            for (int j = 0; j < kg; ++j) rel(i, j) = img[i][j];
        for (int j = 0; j < kg; ++j) rel(kf + j, j) = g.orders()[j];
        if (abs(det(hnf_row_basis(rel))) != 1) continue;
        MatI out(kf, kg);
        for (int i = 0; i < kf; ++i)
            for (int j = 0; j < kg; ++j) out(i, j) = img[i][j];
        return out;
    }
    return std::nullopt;
}

// restriction of a generator action to the p-primary part, in the scaled
// generator basis hat g_i = (d_i / p^{v_i}) g_i
MatI p_part_action(const MatI& full, const std::vector<Int>& orders, long p) {
    std::vector<int> idx;
    std::vector<Int> mult, pv;
    for (int i = 0; i < static_cast<int>(orders.size()); ++i) {
        Int d = orders[i];
        Int q = 1;
        while (d % p == 0) {
            d /= p;
            q *= p;
        }
        if (q == 1) continue;
        idx.push_back(i);
        mult.push_back(d);
        pv.push_back(q);
    }
    int k = static_cast<int>(idx.size());
    MatI out(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            // coefficient of hat g_{idx[a]} in act(hat g_{idx[b]})
            Int inv_mult;
            if (mpz_invert(inv_mult.get_mpz_t(), mult[a].get_mpz_t(), pv[a].get_mpz_t()) == 0)
                throw std::logic_error("p_part_action: multiplier not invertible");
            Int c = full(idx[a], idx[b]) * mult[b] % pv[a] * inv_mult % pv[a];
            if (c < 0) c += pv[a];
            out(a, b) = c;
        }
    return out;
}

}  // namespace

GlueResult glue_even_unimodular(const IntegerLattice& t, const IntegerLattice& s,
                                const std::optional<MatI>& act_t,
                                const std::optional<MatI>& act_s) {
    GlueResult res;
    if (!t.is_even() || !s.is_even()) {
        res.failure = "inputs not even";
        return res;
    }
    Int dt = abs(t.determinant()), ds = abs(s.determinant());
    if (dt != ds) {
        res.failure = "determinants differ";
        return res;
    }
    Signature sig_t = signature(t), sig_s = signature(s);
    if (((sig_t.pos + sig_s.pos) - (sig_t.neg + sig_s.neg)) % 8 != 0) {
        res.failure = "signature not 0 mod 8";
        return res;
    }

    DiscriminantGroup dgt = discriminant_group(t);
    DiscriminantGroup dgs = discriminant_group(s);
    FiniteQuadraticForm ft = discriminant_form(t);
    FiniteQuadraticForm fs = discriminant_form(s);

    bool want_equivariant = act_t.has_value() && act_s.has_value();
    std::optional<MatI> full_act_t, full_act_s;
    if (want_equivariant) {
        full_act_t = induced_action(t, dgt, *act_t);
        full_act_s = induced_action(s, dgs, *act_s);
    }

    auto pt = p_primary_decompose(ft);
    auto ps = p_primary_decompose(fs);
    if (pt.size() != ps.size()) {
        res.failure = "prime supports differ";
        return res;
    }

    // anti-isometry per p-primary component, assembled into generator images
    // of the full groups: gamma(g_i) built by CRT from the p-parts
    int kt = ft.num_gens(), ks = fs.num_gens();
    // p-part projections of the full generators: g_i = sum of its p-parts,
    // so it is enough to map each p-part generator and add the images
    MatQ glue(kt, t.rank() + s.rank());
    std::vector<std::vector<Rat>> image_coords(kt, std::vector<Rat>(ks, Rat(0)));

    for (size_t c = 0; c < pt.size(); ++c) {
        long p = pt[c].first;
        auto it = std::find_if(ps.begin(), ps.end(), [&](auto& pr) { return pr.first == p; });
        if (it == ps.end()) {
            res.failure = "prime " + std::to_string(p) + " missing on one side";
            return res;
        }
        std::optional<MatI> gamma;
        if (want_equivariant) {
            MatI part_act_t = p_part_action(*full_act_t, ft.orders(), p);
            MatI part_act_s = p_part_action(*full_act_s, fs.orders(), p);
            gamma = module_anti_isometry(pt[c].second, it->second, part_act_t, part_act_s);
            if (!gamma)
                gamma = find_anti_isometry(pt[c].second, it->second, part_act_t, part_act_s);
        } else {
            gamma = find_anti_isometry(pt[c].second, it->second);
        }
        if (!gamma) {
            res.failure = want_equivariant
                              ? "no equivariant anti-isometry at p = " + std::to_string(p)
                              : "no anti-isometry at p = " + std::to_string(p);
            return res;
        }
        // p-part generator i of ft is (d_i / p^{v_i}) * g_i; its image is a
        // vector in the p-part generators of fs, each (e_j / p^{w_j}) * h_j
        int row = 0;
        for (int i = 0; i < kt; ++i) {
            Int d = ft.orders()[i];
            long v = 0;
            Int dd = d;
            while (dd % p == 0) {
                dd /= p;
                ++v;
            }
            if (v == 0) continue;
            // CRT coefficient: 1 = alpha * dd + beta * p^v; the p-part of g_i
            // is alpha*dd*g_i; our decomposition used dd*g_i as generator, so
            // the image of g_i's p-component needs the alpha factor
            Int pv = 1;
            for (long tt = 0; tt < v; ++tt) pv *= p;
            Int alpha, beta, gg;
            mpz_gcdext(gg.get_mpz_t(), alpha.get_mpz_t(), beta.get_mpz_t(), dd.get_mpz_t(),
                       pv.get_mpz_t());
            // image of dd*g_i under gamma, in fs p-part generators
            int col = 0;
            for (int j = 0; j < ks; ++j) {
                Int e = fs.orders()[j];
                long w = 0;
                Int ee = e;
                while (ee % p == 0) {
                    ee /= p;
                    ++w;
                }
                if (w == 0) continue;
                // p-part generator j of fs is ee * h_j
                image_coords[i][j] += Rat(alpha * (*gamma)(row, col) * ee);
                ++col;
            }
            ++row;
        }
    }

    // glue vectors (g_i, gamma(g_i)) as rational coordinates in T + S basis
    for (int i = 0; i < kt; ++i) {
        for (int j = 0; j < t.rank(); ++j) glue(i, j) = dgt.generator_lifts(i, j);
        for (int j = 0; j < s.rank(); ++j) {
            Rat v = 0;
            for (int y = 0; y < ks; ++y) v += image_coords[i][y] * dgs.generator_lifts(y, j);
            glue(i, t.rank() + j) = v;
        }
    }

    IntegerLattice sum = t.direct_sum(s);
    MatQ basis;
    IntegerLattice glued = overlattice(sum, glue, &basis);
    if (abs(glued.determinant()) != 1) {
        res.failure = "glued lattice not unimodular";
        return res;
    }
    if (!glued.is_even()) {
        res.failure = "glued lattice not even";
        return res;
    }
    if (want_equivariant) {
        // the block isometry (column convention) must preserve the glued
        // lattice: (B^T)^{-1} N B^T integral and Gram-preserving
        int n = sum.rank(), nt = t.rank();
        MatQ block(n, n);
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nt; ++j) block(i, j) = Rat((*act_t)(i, j));
        for (int i = 0; i < s.rank(); ++i)
            for (int j = 0; j < s.rank(); ++j) block(nt + i, nt + j) = Rat((*act_s)(i, j));
        MatQ bt = basis.transpose();
        MatQ conj = inverse(bt) * block * bt;
        MatI conj_i = to_int(conj);  // throws if the action does not preserve the glue
        MatQ gg = to_rat(glued.gram());
        if (!(conj.transpose() * gg * conj == gg))
            throw std::logic_error("glue: extended isometry does not preserve the Gram matrix");
        res.equivariant = true;
    }
    res.glued_basis = basis;
    res.glued = glued;
    res.anti_isometry = MatI(kt, ks);
    for (int i = 0; i < kt; ++i)
        for (int j = 0; j < ks; ++j) {
            Rat v = image_coords[i][j];
            // store mod order for readability
            Int num = v.get_num();
            if (v.get_den() == 1) res.anti_isometry(i, j) = num % fs.orders()[j];
        }
    return res;
}

}  // namespace cmk3
