#pragma once

#include "scalar.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hhsheaf {

using Vector = std::vector<Scalar>;

struct LinalgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense matrix over one field. Row-major.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0), field_(Field::rationals()) {}
    Matrix(std::size_t rows, std::size_t cols, const Field& f)
        : rows_(rows), cols_(cols), field_(f), data_(rows * cols, Scalar::zero(f)) {}

    static Matrix identity(std::size_t n, const Field& f) {
        Matrix m(n, n, f);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
        return m;
    }

    /// Densifies sparse triplets (row, col, value).
    static Matrix from_triplets(std::size_t rows, std::size_t cols, const Field& f,
                                const std::vector<std::tuple<std::size_t, std::size_t, Scalar>>& t) {
        Matrix m(rows, cols, f);
        for (auto& [i, j, v] : t) m.at(i, j) += v;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    Scalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector col(std::size_t j) const {
        Vector v;
        v.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v.push_back(at(i, j));
        return v;
    }
    void set_col(std::size_t j, const Vector& v) {
        for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
    }

    bool is_zero() const {
        for (auto& s : data_)
            if (!s.is_zero()) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw LinalgError("matmul dimension mismatch");
        Matrix c(a.rows_, b.cols_, a.field_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Scalar& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c.at(i, j) += aik * b.at(k, j);
            }
        return c;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("add dimension mismatch");
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
        return c;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("sub dimension mismatch");
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
        return c;
    }
    Matrix scaled(const Scalar& s) const {
        Matrix c = *this;
        for (auto& x : c.data_) x *= s;
        return c;
    }

    Vector apply(const Vector& v) const {
        if (v.size() != cols_) throw LinalgError("apply dimension mismatch");
        Vector out(rows_, Scalar::zero(field_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero()) out[i] += at(i, j) * v[j];
        return out;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_, field_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

private:
    std::size_t rows_, cols_;
    Field field_;
    std::vector<Scalar> data_;
};

/// Horizontal concatenation [a | b].
inline Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw LinalgError("hstack row mismatch");
    Matrix c(a.rows(), a.cols() + b.cols(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, a.cols() + j) = b.at(i, j);
    }
    return c;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw LinalgError("vstack col mismatch");
    Matrix c(a.rows() + b.rows(), a.cols(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) c.at(a.rows() + i, j) = b.at(i, j);
    return c;
}

/// Matrix whose columns are the given vectors.
inline Matrix from_columns(std::size_t rows, const Field& f, const std::vector<Vector>& cols) {
    Matrix m(rows, cols.size(), f);
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
    return m;
}

/// Reduced row echelon form. Deterministic: pivot = first nonzero column,
/// topmost unused row. Returns (rref, pivot columns).
inline std::pair<Matrix, std::vector<std::size_t>> rref(Matrix m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m.at(sel, c).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(r, j));
        Scalar inv = m.at(r, c).inv();
        for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Scalar f = m.at(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).second.size(); }

/// Basis of the kernel {v : Mv = 0}; count = cols - rank. Deterministic:
/// one vector per free column, free coordinate set to 1.
inline std::vector<Vector> kernel_basis(const Matrix& m) {
    auto [r, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        Vector v(m.cols(), Scalar::zero(m.field()));
        v[c] = Scalar::one(m.field());
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r.at(i, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solves Mx = b; free variables set to 0. Empty optional if inconsistent.
inline std::optional<Vector> solve_affine(const Matrix& m, const Vector& b) {
    if (b.size() != m.rows()) throw LinalgError("solve_affine dimension mismatch");
    Matrix aug = hstack(m, from_columns(m.rows(), m.field(), {b}));
    auto [r, pivots] = rref(std::move(aug));
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    Vector x(m.cols(), Scalar::zero(m.field()));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r.at(i, m.cols());
    return x;
}

/// Independent subset of the columns of m spanning its column space,
/// returned as a matrix (the pivot columns, in order).
inline Matrix column_space_basis(const Matrix& m) {
    auto pivots = rref(m).second;
    Matrix b(m.rows(), pivots.size(), m.field());
    for (std::size_t j = 0; j < pivots.size(); ++j) b.set_col(j, m.col(pivots[j]));
    return b;
}

/// span(cols of b) subset of span(cols of a)?
inline bool span_contains(const Matrix& a, const Matrix& b) {
    return rank(hstack(a, b)) == rank(a);
}

struct NotASubspaceError : LinalgError {
    using LinalgError::LinalgError;
};

/// dim span(Z) - dim span(B), with span(B) subset of span(Z) checked.
inline std::size_t subquotient_dim(const Matrix& Z, const Matrix& B) {
    std::size_t rz = rank(Z);
    if (rank(hstack(Z, B)) != rz)
        throw NotASubspaceError("subquotient_dim: B is not contained in span(Z)");
    return rz - rank(B);
}

/// Intersection of the column spans of a and b, as a generating matrix.
inline Matrix span_intersection(const Matrix& a, const Matrix& b) {
    if (a.cols() == 0 || b.cols() == 0) return Matrix(a.rows(), 0, a.field());
    // kernel of [a | -b]: x-part gives combinations of a landing in span(b)
    Matrix stacked = hstack(a, b.scaled(-Scalar::one(a.field())));
    auto ker = kernel_basis(stacked);
    Matrix gens(a.rows(), ker.size(), a.field());
    for (std::size_t j = 0; j < ker.size(); ++j) {
        Vector x(ker[j].begin(), ker[j].begin() + a.cols());
        gens.set_col(j, a.apply(x));
    }
    return column_space_basis(gens);
}

/// Coordinates on a subquotient span(Z)/span(B). Representatives are the
/// columns of Z that extend a basis of span(B); coords() expresses a vector
/// of span(Z) in those representatives modulo span(B).
class Subquotient {
public:
    Subquotient() = default;
    Subquotient(const Matrix& Z, const Matrix& B) : Bred_(column_space_basis(B)) {
        if (!span_contains(Z, B))
            throw NotASubspaceError("Subquotient: B is not contained in span(Z)");
        Matrix combined = hstack(Bred_, Z);
        auto pivots = rref(combined).second;
        std::vector<std::size_t> rep_cols;
        for (auto p : pivots)
            if (p >= Bred_.cols()) rep_cols.push_back(p - Bred_.cols());
        reps_ = Matrix(Z.rows(), rep_cols.size(), Z.field());
        for (std::size_t j = 0; j < rep_cols.size(); ++j) reps_.set_col(j, Z.col(rep_cols[j]));
        solver_ = hstack(Bred_, reps_);
    }

    std::size_t dim() const { return reps_.cols(); }
    const Matrix& representatives() const { return reps_; }

    /// Class of v in span(Z)/span(B), as coordinates in the representatives.
    Vector coords(const Vector& v) const {
        auto x = solve_affine(solver_, v);
        if (!x) throw NotASubspaceError("Subquotient::coords: vector not in span(Z)");
        return Vector(x->begin() + Bred_.cols(), x->end());
    }

    /// Representative vector of coordinate class c.
    Vector lift(const Vector& c) const { return reps_.apply(c); }

private:
    Matrix Bred_, reps_, solver_;
};

/// Preimage of span(W) under the map with matrix T: {x : Tx in span(W)}.
inline Matrix preimage(const Matrix& T, const Matrix& W) {
    Matrix stacked = hstack(T, W.cols() ? W.scaled(-Scalar::one(T.field())) : W);
    auto ker = kernel_basis(stacked);
    Matrix gens(T.cols(), ker.size(), T.field());
    for (std::size_t j = 0; j < ker.size(); ++j) {
        Vector x(ker[j].begin(), ker[j].begin() + T.cols());
        gens.set_col(j, x);
    }
    return column_space_basis(gens);
}

}  // namespace hhsheaf
