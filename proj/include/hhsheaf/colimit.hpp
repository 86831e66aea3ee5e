#pragma once

#include "hochschild.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace hhsheaf {

struct ColimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The presheaf of colimit Hochschild complexes over a good family. The
/// colimit over B(U) (ordered by reverse inclusion) is attained at the
/// terminal basis, the intersection of all members; canonical
/// representatives live there.
class ColimitComplex {
public:
    ColimitComplex(const StructurePresheaf& o, BasisFamily fam, std::size_t truncation)
        : o_(&o), fam_(std::move(fam)), n_(truncation) {}

    const FiniteSpace& space() const { return o_->space(); }
    const StructurePresheaf& presheaf() const { return *o_; }
    const BasisFamily& family() const { return fam_; }
    std::size_t truncation() const { return n_; }

    const Basis& terminal(PointSet u) const {
        auto it = terminals_.find(u);
        if (it == terminals_.end())
            it = terminals_.emplace(u, terminal_basis(fam_, u)).first;
        return it->second;
    }

    /// C_B(U) in canonical coordinates: the complex on the terminal basis.
    const HochschildComplex& complex_at(PointSet u) const {
        auto it = complexes_.find(u);
        if (it == complexes_.end())
            it = complexes_.emplace(u, std::make_shared<HochschildComplex>(terminal(u), *o_, n_)).first;
        return *it->second;
    }

    std::size_t dim(PointSet u, std::size_t p) const { return complex_at(u).dim(p); }

    /// Restriction C_B(U) -> C_B(V) on canonical representatives: the
    /// terminal basis of V is a sub-basis of the terminal basis of U.
    Matrix restriction(PointSet u, PointSet v, std::size_t p) const {
        if (!subset(v, u)) throw ColimitError("restriction along a non-inclusion");
        return transition_matrix(complex_at(u), complex_at(v), p);
    }

private:
    const StructurePresheaf* o_;
    BasisFamily fam_;
    std::size_t n_;
    mutable std::map<PointSet, Basis> terminals_;
    mutable std::map<PointSet, std::shared_ptr<HochschildComplex>> complexes_;
};

/// A section of C_B over an open: an equivalence class represented by a
/// pair (basis in B(U), cochain on it). Equality is tested on canonical
/// representatives.
class ColimitSection {
public:
    ColimitSection(const ColimitComplex& cb, PointSet domain, Basis rep_basis, Vector coords,
                   std::size_t degree)
        : cb_(&cb),
          domain_(domain),
          degree_(degree),
          rep_complex_(std::make_shared<HochschildComplex>(rep_basis, cb.presheaf(), cb.truncation())),
          coords_(std::move(coords)) {
        if (!cb.family().member(domain, rep_basis))
            throw ColimitError("representative basis is not a member of B(U)");
        if (coords_.size() != rep_complex_->dim(degree))
            throw ColimitError("coordinate vector has wrong size");
    }

    /// Section given directly in canonical coordinates.
    static ColimitSection canonical(const ColimitComplex& cb, PointSet domain, std::size_t degree,
                                    Vector coords) {
        return ColimitSection(cb, domain, cb.terminal(domain), std::move(coords), degree);
    }

    static ColimitSection zero(const ColimitComplex& cb, PointSet domain, std::size_t degree) {
        return canonical(cb, domain, degree,
                         Vector(cb.complex_at(domain).dim(degree),
                                Scalar::zero(cb.presheaf().field())));
    }

    const ColimitComplex& colimit() const { return *cb_; }
    PointSet domain() const { return domain_; }
    std::size_t degree() const { return degree_; }
    const Basis& rep_basis() const { return rep_complex_->basis(); }
    const HochschildComplex& rep_complex() const { return *rep_complex_; }
    const Vector& rep_coords() const { return coords_; }

    /// Image in the terminal basis of B(U).
    Vector canonical_rep() const {
        return transition_matrix(*rep_complex_, cb_->complex_at(domain_), degree_).apply(coords_);
    }

    friend bool operator==(const ColimitSection& a, const ColimitSection& b) {
        return a.cb_ == b.cb_ && a.domain_ == b.domain_ && a.degree_ == b.degree_ &&
               a.canonical_rep() == b.canonical_rep();
    }

private:
    const ColimitComplex* cb_;
    PointSet domain_;
    std::size_t degree_;
    std::shared_ptr<HochschildComplex> rep_complex_;
    Vector coords_;
};

/// (b|_V, phi|_V).
inline ColimitSection restrict_section(const ColimitSection& s, PointSet v) {
    const ColimitComplex& cb = s.colimit();
    if (!subset(v, s.domain())) throw ColimitError("restrict_section: target not inside domain");
    Basis bv = restrict_basis(s.rep_basis(), v);
    HochschildComplex target(bv, cb.presheaf(), cb.truncation());
    Vector coords = transition_matrix(s.rep_complex(), target, s.degree()).apply(s.rep_coords());
    return ColimitSection(cb, v, bv, std::move(coords), s.degree());
}

namespace detail {

/// Two-piece gluing from the finite-cover sheaf-condition proof: shrink both
/// representatives with plug so that they agree literally on the overlap,
/// glue the bases, and fill in chainwise.
inline ColimitSection glue_two(const ColimitSection& s1, const ColimitSection& s2) {
    const ColimitComplex& cb = s1.colimit();
    PointSet u1 = s1.domain(), u2 = s2.domain(), u12 = u1 & u2, u = u1 | u2;
    std::size_t p = s1.degree();

    if (!(restrict_section(s1, u12) == restrict_section(s2, u12)))
        throw ColimitError("glue: sections disagree on " + cb.space().set_name(u12));

    const Basis& bprime = cb.terminal(u12);  // common refinement on the overlap
    Basis b1p = plug(s1.rep_basis(), bprime);
    Basis b2p = plug(s2.rep_basis(), bprime);
    Basis glued = glue_bases(b1p, b2p);
    if (!cb.family().member(u, glued))
        throw ColimitError("glue: glued basis escaped the family (family not good?)");

    HochschildComplex target(glued, cb.presheaf(), cb.truncation());
    Vector coords(target.dim(p), Scalar::zero(cb.presheaf().field()));
    const auto& o = cb.presheaf();
    auto fill_from = [&](const ColimitSection& s, const OpenChain& c, std::size_t ti) {
        std::size_t si = s.rep_complex().chain_index(p, c);
        std::size_t block = o.algebra(c.front()).dim;
        for (std::size_t i = 0; i + 1 < c.size(); ++i) block *= o.algebra(c[i]).dim;
        for (std::size_t j = 0; j < block; ++j)
            coords[target.chain_offset(p, ti) + j] =
                s.rep_coords()[s.rep_complex().chain_offset(p, si) + j];
    };
    for (std::size_t ti = 0; ti < target.chains(p).size(); ++ti) {
        const OpenChain& c = target.chains(p)[ti];
        // if the top of the chain lies in b_i', the whole chain does
        if (b1p.contains(c.back()))
            fill_from(s1, c, ti);
        else
            fill_from(s2, c, ti);
    }
    ColimitSection out(cb, u, glued, std::move(coords), p);
    // the glueing must restrict back to the pieces
    if (!(restrict_section(out, u1) == s1) || !(restrict_section(out, u2) == s2))
        throw ColimitError("glue: internal error, result does not restrict to the pieces");
    return out;
}

}  // namespace detail

/// Glues pairwise-compatible sections over a finite cover; inductive on the
/// number of pieces.
inline ColimitSection glue_sections(const std::vector<ColimitSection>& sections) {
    if (sections.empty()) throw ColimitError("glue: empty cover");
    for (std::size_t i = 0; i < sections.size(); ++i)
        for (std::size_t j = i + 1; j < sections.size(); ++j) {
            PointSet inter = sections[i].domain() & sections[j].domain();
            if (!(restrict_section(sections[i], inter) == restrict_section(sections[j], inter)))
                throw ColimitError("glue: sections " + std::to_string(i) + " and " +
                                   std::to_string(j) + " disagree on the overlap");
        }
    ColimitSection acc = sections.front();
    for (std::size_t i = 1; i < sections.size(); ++i) acc = detail::glue_two(acc, sections[i]);
    return acc;
}

/// Flabby lift to a larger open: extend by zero off the original domain.
inline ColimitSection flabby_lift(const ColimitSection& s, PointSet w) {
    const ColimitComplex& cb = s.colimit();
    if (!subset(s.domain(), w)) throw ColimitError("flabby_lift: target does not contain domain");
    if (s.domain() == w) return s;
    std::size_t p = s.degree();
    Basis lifted = plug(cb.terminal(w), s.rep_basis());
    if (!cb.family().member(w, lifted))
        throw ColimitError("flabby_lift: lifted basis escaped the family");
    HochschildComplex target(lifted, cb.presheaf(), cb.truncation());
    Vector coords(target.dim(p), Scalar::zero(cb.presheaf().field()));
    const auto& o = cb.presheaf();
    for (std::size_t ti = 0; ti < target.chains(p).size(); ++ti) {
        const OpenChain& c = target.chains(p)[ti];
        if (!subset(c.back(), s.domain())) continue;  // extend by zero
        std::size_t si = s.rep_complex().chain_index(p, c);
        std::size_t block = o.algebra(c.front()).dim;
        for (std::size_t i = 0; i + 1 < c.size(); ++i) block *= o.algebra(c[i]).dim;
        for (std::size_t j = 0; j < block; ++j)
            coords[target.chain_offset(p, ti) + j] =
                s.rep_coords()[s.rep_complex().chain_offset(p, si) + j];
    }
    return ColimitSection(cb, w, lifted, std::move(coords), p);
}

/// A degreewise finite-dimensional presheaf of complexes, as the data the
/// sheaf-condition checker needs.
struct ComplexPresheaf {
    const FiniteSpace* space = nullptr;
    std::function<std::size_t(PointSet, std::size_t)> dim;
    std::function<Matrix(PointSet, PointSet, std::size_t)> restrict;
};

/// C_b for one fixed basis: U -> C^p(b|_U).
inline ComplexPresheaf single_basis_presheaf(const Basis& b, const StructurePresheaf& o,
                                             std::size_t truncation) {
    auto cache = std::make_shared<std::map<PointSet, std::shared_ptr<HochschildComplex>>>();
    auto at = [&o, b, truncation, cache](PointSet u) -> const HochschildComplex& {
        auto it = cache->find(u);
        if (it == cache->end())
            it = cache->emplace(u, std::make_shared<HochschildComplex>(restrict_basis(b, u), o,
                                                                       truncation)).first;
        return *it->second;
    };
    ComplexPresheaf p;
    p.space = &o.space();
    p.dim = [at](PointSet u, std::size_t deg) { return at(u).dim(deg); };
    p.restrict = [at](PointSet u, PointSet v, std::size_t deg) {
        return transition_matrix(at(u), at(v), deg);
    };
    return p;
}

inline ComplexPresheaf colimit_presheaf(const ColimitComplex& cb) {
    ComplexPresheaf p;
    p.space = &cb.space();
    p.dim = [&cb](PointSet u, std::size_t deg) { return cb.dim(u, deg); };
    p.restrict = [&cb](PointSet u, PointSet v, std::size_t deg) {
        return cb.restriction(u, v, deg);
    };
    return p;
}

struct SheafReport {
    bool separated = true;
    std::optional<Vector> separated_witness;  // nonzero element of P(U) restricting to zero
    bool glues = true;
    std::optional<Vector> gluing_witness;  // compatible tuple with no preimage
    bool pass() const { return separated && glues; }
};

/// Sheaf condition for one finite cover in one degree, by rank computations.
inline SheafReport sheaf_check(const ComplexPresheaf& p, PointSet u,
                               const std::vector<PointSet>& cover, std::size_t deg) {
    PointSet uni = 0;
    for (PointSet c : cover) {
        if (!subset(c, u) || !p.space->is_open(c))
            throw ColimitError("sheaf_check: cover element is not an open subset of U");
        uni |= c;
    }
    if (uni != u) throw ColimitError("sheaf_check: cover does not cover U");

    const Field f = cover.empty() ? Field::rationals() : p.restrict(u, cover[0], deg).field();
    std::size_t dim_u = p.dim(u, deg);

    // restriction-product map R: P(U) -> prod P(U_i)
    Matrix r(0, dim_u, f);
    for (PointSet c : cover) r = vstack(r, p.restrict(u, c, deg));

    SheafReport rep;
    auto ker = kernel_basis(r);
    if (!ker.empty()) {
        rep.separated = false;
        rep.separated_witness = ker.front();
    }

    // difference map D: prod P(U_i) -> prod_{i<j} P(U_i cap U_j)
    std::vector<std::size_t> offs;
    std::size_t total = 0;
    for (PointSet c : cover) {
        offs.push_back(total);
        total += p.dim(c, deg);
    }
    std::size_t rows = 0;
    std::vector<std::tuple<std::size_t, std::size_t, Matrix, Matrix>> blocks;
    for (std::size_t i = 0; i < cover.size(); ++i)
        for (std::size_t j = i + 1; j < cover.size(); ++j) {
            PointSet inter = cover[i] & cover[j];
            Matrix ri = p.restrict(cover[i], inter, deg);
            Matrix rj = p.restrict(cover[j], inter, deg);
            blocks.emplace_back(i, j, ri, rj);
            rows += ri.rows();
        }
    Matrix dmat(rows, total, f);
    std::size_t row0 = 0;
    for (auto& [i, j, ri, rj] : blocks) {
        for (std::size_t a = 0; a < ri.rows(); ++a) {
            for (std::size_t b = 0; b < ri.cols(); ++b) dmat.at(row0 + a, offs[i] + b) = ri.at(a, b);
            for (std::size_t b = 0; b < rj.cols(); ++b) dmat.at(row0 + a, offs[j] + b) -= rj.at(a, b);
        }
        row0 += ri.rows();
    }
    Matrix eq = from_columns(total, f, kernel_basis(dmat));
    // image of R as a subspace of the product
    Matrix im_cols(total, dim_u, f);
    for (std::size_t c = 0; c < dim_u; ++c) {
        Vector unit(dim_u, Scalar::zero(f));
        unit[c] = Scalar::one(f);
        im_cols.set_col(c, r.apply(unit));
    }
    if (!span_contains(eq, im_cols))
        throw ColimitError("sheaf_check: restriction image violates compatibility (broken presheaf)");
    if (rank(im_cols) != rank(eq)) {
        rep.glues = false;
        for (std::size_t c = 0; c < eq.cols(); ++c) {
            Matrix v(total, 1, f);
            v.set_col(0, eq.col(c));
            if (!span_contains(im_cols, v)) {
                rep.gluing_witness = eq.col(c);
                break;
            }
        }
    }
    return rep;
}

/// Is the restriction C_B(X) -> C_B(U) surjective in degree p?
inline bool flabby_at(const ColimitComplex& cb, PointSet u, std::size_t p) {
    Matrix r = cb.restriction(cb.space().full(), u, p);
    return rank(r) == cb.dim(u, p);
}

}  // namespace hhsheaf
