#pragma once

#include "matrix.hpp"
#include "space.hpp"

#include <map>
#include <string>
#include <vector>

namespace hhsheaf {

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A finite-dimensional unital associative algebra given by structure
/// constants: e_i * e_j = sum_k c[i][j][k] e_k.
struct Algebra {
    std::string name;
    Field field;
    std::size_t dim = 0;
    std::vector<std::string> labels;
    std::vector<Scalar> c;  // c[(i*dim + j)*dim + k]
    Vector unit;

    const Scalar& sc(std::size_t i, std::size_t j, std::size_t k) const {
        return c[(i * dim + j) * dim + k];
    }
    Scalar& sc(std::size_t i, std::size_t j, std::size_t k) {
        return c[(i * dim + j) * dim + k];
    }

    Vector mul(const Vector& a, const Vector& b) const {
        Vector out(dim, Scalar::zero(field));
        for (std::size_t i = 0; i < dim; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                if (b[j].is_zero()) continue;
                Scalar ab = a[i] * b[j];
                for (std::size_t k = 0; k < dim; ++k) out[k] += ab * sc(i, j, k);
            }
        }
        return out;
    }

    Vector basis_vector(std::size_t i) const {
        Vector v(dim, Scalar::zero(field));
        v[i] = Scalar::one(field);
        return v;
    }

    bool is_commutative() const {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k)
                    if (!(sc(i, j, k) == sc(j, i, k))) return false;
        return true;
    }
};

struct AlgebraReport {
    bool valid = true;
    std::vector<std::string> violations;
    bool commutative = true;

    explicit operator bool() const { return valid; }
};

inline AlgebraReport validate_algebra(const Algebra& a) {
    AlgebraReport rep;
    if (a.c.size() != a.dim * a.dim * a.dim || a.unit.size() != a.dim) {
        rep.valid = false;
        rep.violations.push_back("structure data has wrong size");
        return rep;
    }
    for (std::size_t i = 0; i < a.dim && rep.violations.size() < 8; ++i)
        for (std::size_t j = 0; j < a.dim; ++j)
            for (std::size_t k = 0; k < a.dim; ++k) {
                Vector lhs = a.mul(a.mul(a.basis_vector(i), a.basis_vector(j)), a.basis_vector(k));
                Vector rhs = a.mul(a.basis_vector(i), a.mul(a.basis_vector(j), a.basis_vector(k)));
                if (!(lhs == rhs)) {
                    rep.valid = false;
                    rep.violations.push_back("associativity fails at triple (" + std::to_string(i) +
                                             "," + std::to_string(j) + "," + std::to_string(k) + ")");
                }
            }
    for (std::size_t i = 0; i < a.dim; ++i) {
        Vector e = a.basis_vector(i);
        if (!(a.mul(a.unit, e) == e) || !(a.mul(e, a.unit) == e)) {
            rep.valid = false;
            rep.violations.push_back("unit law fails on basis element " + std::to_string(i));
        }
    }
    rep.commutative = a.is_commutative();
    return rep;
}

/// A unital algebra map given by its matrix (dim_target x dim_source).
struct AlgebraMap {
    const Algebra* source = nullptr;
    const Algebra* target = nullptr;
    Matrix matrix;

    Vector apply(const Vector& v) const { return matrix.apply(v); }

    std::vector<std::string> violations() const {
        std::vector<std::string> errs;
        if (matrix.rows() != target->dim || matrix.cols() != source->dim) {
            errs.push_back("matrix has wrong shape");
            return errs;
        }
        if (!(apply(source->unit) == target->unit)) errs.push_back("unit is not preserved");
        for (std::size_t i = 0; i < source->dim; ++i)
            for (std::size_t j = 0; j < source->dim; ++j) {
                Vector lhs = apply(source->mul(source->basis_vector(i), source->basis_vector(j)));
                Vector rhs = target->mul(apply(source->basis_vector(i)), apply(source->basis_vector(j)));
                if (!(lhs == rhs))
                    errs.push_back("multiplicativity fails on basis pair (" + std::to_string(i) +
                                   "," + std::to_string(j) + ")");
            }
        return errs;
    }
};

/// The structure presheaf: an algebra on every basic open of the master
/// basis universe, with a restriction map for every inclusion.
class StructurePresheaf {
public:
    StructurePresheaf(const FiniteSpace& sp, Field f) : space_(&sp), field_(f) {}

    const FiniteSpace& space() const { return *space_; }
    const Field& field() const { return field_; }

    void assign(PointSet basic_open, Algebra alg) {
        algebras_[basic_open] = std::move(alg);
    }
    void set_restriction(PointSet from, PointSet to, Matrix m) {
        restrictions_[{from, to}] = std::move(m);
    }

    bool has_algebra(PointSet u) const { return algebras_.count(u) > 0; }
    const Algebra& algebra(PointSet u) const {
        auto it = algebras_.find(u);
        if (it == algebras_.end())
            throw AlgebraError("no algebra assigned to " + space_->set_name(u));
        return it->second;
    }

    const std::map<PointSet, Algebra>& algebras() const { return algebras_; }

    /// rho_{U -> V} for V inside U. Missing maps between equal-dimension
    /// algebras default to the identity (constant-presheaf shorthand).
    Matrix restriction(PointSet from, PointSet to) const {
        if (!subset(to, from)) throw AlgebraError("restriction along a non-inclusion");
        auto it = restrictions_.find({from, to});
        if (it != restrictions_.end()) return it->second;
        const Algebra& a = algebra(from);
        const Algebra& b = algebra(to);
        if (from == to || (a.name == b.name && a.dim == b.dim))
            return Matrix::identity(a.dim, field_);
        throw AlgebraError("no restriction map from " + space_->set_name(from) + " to " +
                           space_->set_name(to));
    }

    AlgebraMap restriction_map(PointSet from, PointSet to) const {
        return AlgebraMap{&algebra(from), &algebra(to), restriction(from, to)};
    }

    std::vector<std::string> violations() const {
        std::vector<std::string> errs;
        for (auto& [u, alg] : algebras_) {
            auto rep = validate_algebra(alg);
            for (auto& v : rep.violations)
                errs.push_back("algebra at " + space_->set_name(u) + ": " + v);
        }
        if (!errs.empty()) return errs;
        std::vector<PointSet> basics;
        for (auto& [u, alg] : algebras_) basics.push_back(u);
        for (PointSet u : basics)
            for (PointSet v : basics) {
                if (!subset(v, u)) continue;
                AlgebraMap m = restriction_map(u, v);
                for (auto& e : m.violations())
                    errs.push_back("restriction " + space_->set_name(u) + " -> " +
                                   space_->set_name(v) + ": " + e);
            }
        for (PointSet u : basics) {
            Matrix id = Matrix::identity(algebra(u).dim, field_);
            if (!(restriction(u, u) == id))
                errs.push_back("restriction " + space_->set_name(u) + " -> itself is not identity");
        }
        for (PointSet u : basics)
            for (PointSet v : basics)
                for (PointSet w : basics) {
                    if (!subset(w, v) || !subset(v, u)) continue;
                    if (!(restriction(v, w) * restriction(u, v) == restriction(u, w)))
                        errs.push_back("functoriality fails on the chain " + space_->set_name(w) +
                                       " in " + space_->set_name(v) + " in " + space_->set_name(u));
                }
        return errs;
    }

private:
    const FiniteSpace* space_;
    Field field_;
    std::map<PointSet, Algebra> algebras_;
    std::map<std::pair<PointSet, PointSet>, Matrix> restrictions_;
};

}  // namespace hhsheaf
