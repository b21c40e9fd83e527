#include "cmk3/matrix.hpp"

#include <stdexcept>

namespace cmk3 {

MatQ to_rat(const MatI& m) {
    MatQ r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

MatI to_int(const MatQ& m) {
    MatI r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j).get_den() != 1) throw std::domain_error("to_int: non-integer entry");
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

MatI scale_to_int(const MatQ& m, Int* denominator_out) {
    Int d = 1;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            Int den = m(i, j).get_den();
            d = lcm(d, den);
        }
    MatI r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            Rat v = m(i, j) * Rat(d);
            v.canonicalize();
            r(i, j) = v.get_num();
        }
    if (denominator_out) *denominator_out = d;
    return r;
}

Rat det(const MatQ& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
    int n = m.rows();
    MatQ a = m;
    Rat result = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a(r, col) != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != col) {
            a.swap_rows(piv, col);
            result = -result;
        }
        result *= a(col, col);
        Rat inv_p = Rat(1) / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            Rat f = a(r, col) * inv_p;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return result;
}

Int det(const MatI& m) {
    Rat d = det(to_rat(m));
    if (d.get_den() != 1) throw std::logic_error("integer det not integral");
    return d.get_num();
}

MatQ inverse(const MatQ& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
    int n = m.rows();
    MatQ a = m, inv = MatQ::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a(r, col) != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::domain_error("inverse: singular matrix");
        if (piv != col) {
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
        }
        Rat p = a(col, col);
        for (int c = 0; c < n; ++c) {
            a(col, c) /= p;
            inv(col, c) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0) continue;
            Rat f = a(r, col);
            for (int c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

SmithResult smith_normal_form(const MatI& a) {
    int m = a.rows(), n = a.cols();
    SmithResult res{a, MatI::identity(m), MatI::identity(n)};
    MatI& D = res.D;
    MatI& U = res.U;
    MatI& V = res.V;

    auto row_op = [&](int dst, int src, const Int& f) {  // row dst -= f * row src
        for (int j = 0; j < n; ++j) D(dst, j) -= f * D(src, j);
        for (int j = 0; j < m; ++j) U(dst, j) -= f * U(src, j);
    };
    auto col_op = [&](int dst, int src, const Int& f) {
        for (int i = 0; i < m; ++i) D(i, dst) -= f * D(i, src);
        for (int i = 0; i < n; ++i) V(i, dst) -= f * V(i, src);
    };

    int t = 0;
    while (t < m && t < n) {
        // find smallest nonzero pivot in the remaining block
        int pi = -1, pj = -1;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j)
                if (D(i, j) != 0 && (pi < 0 || abs(D(i, j)) < abs(D(pi, pj)))) {
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        if (pi != t) {
            D.swap_rows(pi, t);
            U.swap_rows(pi, t);
        }
        if (pj != t) {
            D.swap_cols(pj, t);
            V.swap_cols(pj, t);
        }
        bool clean = true;
        for (int i = t + 1; i < m; ++i)
            if (D(i, t) != 0) {
                Int f = D(i, t) / D(t, t);
                row_op(i, t, f);
                if (D(i, t) != 0) clean = false;
            }
        for (int j = t + 1; j < n; ++j)
            if (D(t, j) != 0) {
                Int f = D(t, j) / D(t, t);
                col_op(j, t, f);
                if (D(t, j) != 0) clean = false;
            }
        if (!clean) continue;  // smaller remainders appeared; repick pivot
        // divisibility of the rest of the block by the pivot
        bool divides_all = true;
        for (int i = t + 1; i < m && divides_all; ++i)
            for (int j = t + 1; j < n; ++j)
                if (D(i, j) % D(t, t) != 0) {
                    // fold row i into row t to force a smaller pivot next pass
                    row_op(t, i, Int(-1));
                    divides_all = false;
                    break;
                }
        if (!divides_all) continue;
        if (D(t, t) < 0) {
            for (int j = 0; j < n; ++j) D(t, j) = -D(t, j);
            for (int j = 0; j < m; ++j) U(t, j) = -U(t, j);
        }
        ++t;
    }
    return res;
}

MatI hnf_row_basis(const MatI& a) {
    int m = a.rows(), n = a.cols();
    MatI w = a;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        // euclidean elimination in this column below `row`
        while (true) {
            int piv = -1;
            for (int i = row; i < m; ++i)
                if (w(i, col) != 0 && (piv < 0 || abs(w(i, col)) < abs(w(piv, col)))) piv = i;
            if (piv < 0) break;
            if (piv != row) w.swap_rows(piv, row);
            bool reduced = true;
            for (int i = row + 1; i < m; ++i)
                if (w(i, col) != 0) {
                    Int f;
                    mpz_fdiv_q(f.get_mpz_t(), w(i, col).get_mpz_t(), w(row, col).get_mpz_t());
                    for (int j = 0; j < n; ++j) w(i, j) -= f * w(row, j);
                    if (w(i, col) != 0) reduced = false;
                }
            if (reduced) break;
        }
        if (w(row, col) != 0) {
            if (w(row, col) < 0)
                for (int j = 0; j < n; ++j) w(row, j) = -w(row, j);
            // reduce entries above the pivot
            for (int i = 0; i < row; ++i) {
                Int f;
                mpz_fdiv_q(f.get_mpz_t(), w(i, col).get_mpz_t(), w(row, col).get_mpz_t());
                if (f != 0)
                    for (int j = 0; j < n; ++j) w(i, j) -= f * w(row, j);
            }
            ++row;
        }
    }
    MatI basis(row, n);
    for (int i = 0; i < row; ++i)
        for (int j = 0; j < n; ++j) basis(i, j) = w(i, j);
    return basis;
}

std::optional<std::vector<Int>> solve_linear(const MatI& a, const std::vector<Int>& b) {
    int m = a.rows(), n = a.cols();
    SmithResult s = smith_normal_form(a);
    // A x = b <=> D (V^{-1} x) = U b; w_i = (U b)_i / d_i
    std::vector<Int> ub(m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) ub[i] += s.U(i, j) * b[j];
    std::vector<Int> w(n, 0);
    for (int i = 0; i < m; ++i) {
        Int d = (i < n) ? s.D(i, i) : Int(0);
        if (d == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % d != 0) return std::nullopt;
            w[i] = ub[i] / d;
        }
    }
    std::vector<Int> x(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x[i] += s.V(i, j) * w[j];
    return x;
}

Signature signature_of(const MatQ& gram) {
    if (!gram.is_symmetric()) throw std::invalid_argument("signature_of: not symmetric");
    int n = gram.rows();
    MatQ a = gram;
    Signature sig;
    // congruent diagonalization: at each step pick a nonzero diagonal pivot,
    // creating one by a row/col combination when the diagonal is all zero
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (a(i, i) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) {
            int ii = -1, jj = -1;
            for (int i = k; i < n && ii < 0; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (a(i, j) != 0) {
                        ii = i;
                        jj = j;
                        break;
                    }
            if (ii < 0) throw std::domain_error("signature_of: singular Gram matrix");
            // row/col i += row/col j makes a(ii,ii) = 2*a(ii,jj) != 0
            for (int c = 0; c < n; ++c) a(ii, c) += a(jj, c);
            for (int r = 0; r < n; ++r) a(r, ii) += a(r, jj);
            piv = ii;
        }
        if (piv != k) {
            a.swap_rows(piv, k);
            a.swap_cols(piv, k);
        }
        Rat p = a(k, k);
        if (p > 0)
            sig.pos++;
        else
            sig.neg++;
        for (int i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / p;
            for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (int j = k; j < n; ++j) a(j, i) -= f * a(j, k);
        }
    }
    return sig;
}

std::vector<Rat> char_poly(const MatQ& m) {
    // Faddeev-LeVerrier: exact over Q, fine at rank <= 22
    int n = m.rows();
    std::vector<Rat> c(n + 1);
    c[n] = 1;
    MatQ am = MatQ::identity(n);
    for (int k = 1; k <= n; ++k) {
        am = m * am;
        Rat tr = 0;
        for (int i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / k;
        for (int i = 0; i < n; ++i) am(i, i) += c[n - k];
    }
    return c;
}

}  // namespace cmk3
