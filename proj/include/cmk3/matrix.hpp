#pragma once

#include "cmk3/numutil.hpp"

#include <cassert>
#include <functional>
#include <optional>
#include <vector>

namespace cmk3 {

// Small dense exact matrices. Everything here is rank <= 22, so the code
// favors clarity over asymptotics.
template <typename T>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int r, int c) : rows_(r), cols_(c), a_(static_cast<size_t>(r) * c) {}
    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    Mat operator*(const Mat& o) const {
        assert(cols_ == o.rows_);
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T& x = (*this)(i, k);
                if (x == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }
    Mat operator+(const Mat& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        Mat r = *this;
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }
    Mat operator-() const {
        Mat r = *this;
        for (auto& x : r.a_) x = -x;
        return r;
    }
    Mat transpose() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    void swap_rows(int i, int j) {
        for (int k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(int i, int j) {
        for (int k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }
    bool is_symmetric() const {
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

  private:
    int rows_, cols_;
    std::vector<T> a_;
};

using MatI = Mat<Int>;
using MatQ = Mat<Rat>;

MatQ to_rat(const MatI& m);
// Requires all entries integral.
MatI to_int(const MatQ& m);
MatI scale_to_int(const MatQ& m, Int* denominator_out);

Rat det(const MatQ& m);
Int det(const MatI& m);
// Inverse over Q; throws std::domain_error on singular input.
MatQ inverse(const MatQ& m);

// Smith normal form: returns D diagonal with d1 | d2 | ... | dr, all >= 0,
// and unimodular U, V with U*A*V = D.
struct SmithResult {
    MatI D, U, V;
};
SmithResult smith_normal_form(const MatI& a);

// Row-style Hermite form of the lattice spanned by the rows of A; returns a
// basis matrix (full row rank, rows = rank).
MatI hnf_row_basis(const MatI& a);

// One integer solution of A x = b, or nullopt when none exists.
std::optional<std::vector<Int>> solve_linear(const MatI& a, const std::vector<Int>& b);

// Exact inertia of a nondegenerate symmetric rational matrix.
struct Signature {
    int pos = 0, neg = 0;
};
Signature signature_of(const MatQ& gram);

// Characteristic polynomial coefficients, constant term first (monic).
std::vector<Rat> char_poly(const MatQ& m);

}  // namespace cmk3
