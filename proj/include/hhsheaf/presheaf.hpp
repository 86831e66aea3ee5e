#pragma once

#include "colimit.hpp"

#include <functional>
#include <map>
#include <vector>

namespace hhsheaf {

struct SheafError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A presheaf of finite-dimensional vector spaces on the opens of a finite
/// space, stored eagerly (dimension per open, matrix per inclusion).
class VectPresheaf {
public:
    VectPresheaf(const FiniteSpace& sp, Field f,
                 const std::function<std::size_t(PointSet)>& dim_fn,
                 const std::function<Matrix(PointSet, PointSet)>& rho_fn)
        : space_(&sp), field_(f) {
        for (PointSet u : sp.all_opens()) dims_[u] = dim_fn(u);
        for (PointSet u : sp.all_opens())
            for (PointSet v : sp.opens_inside(u)) rho_[{u, v}] = rho_fn(u, v);
    }

    const FiniteSpace& space() const { return *space_; }
    const Field& field() const { return field_; }
    std::size_t dim(PointSet u) const { return dims_.at(u); }
    const Matrix& rho(PointSet u, PointSet v) const {
        auto it = rho_.find({u, v});
        if (it == rho_.end()) throw SheafError("no restriction for this inclusion");
        return it->second;
    }

    std::vector<std::string> functoriality_violations() const {
        std::vector<std::string> errs;
        for (PointSet u : space_->all_opens()) {
            if (!(rho(u, u) == Matrix::identity(dims_.at(u), field_)))
                errs.push_back("identity law fails at " + space_->set_name(u));
            for (PointSet v : space_->opens_inside(u))
                for (PointSet w : space_->opens_inside(v))
                    if (!(rho(v, w) * rho(u, v) == rho(u, w)))
                        errs.push_back("composition law fails on " + space_->set_name(w) +
                                       " in " + space_->set_name(v) + " in " + space_->set_name(u));
        }
        return errs;
    }

private:
    const FiniteSpace* space_;
    Field field_;
    std::map<PointSet, std::size_t> dims_;
    std::map<std::pair<PointSet, PointSet>, Matrix> rho_;
};

/// A sheaf on a finite space, by its stalk data: on finite spaces the stalk
/// at x is the value at the minimal open of x, and sections over U are the
/// compatible families of stalk values.
class VectSheaf {
public:
    VectSheaf(const FiniteSpace& sp, Field f, std::vector<std::size_t> stalk_dims,
              std::map<std::pair<std::size_t, std::size_t>, Matrix> stalk_maps)
        : space_(&sp), field_(f), stalk_dims_(std::move(stalk_dims)),
          stalk_maps_(std::move(stalk_maps)) {}

    const FiniteSpace& space() const { return *space_; }
    const Field& field() const { return field_; }
    std::size_t stalk_dim(std::size_t x) const { return stalk_dims_[x]; }

    /// Map stalk_x -> stalk_y for min_open(y) inside min_open(x).
    const Matrix& stalk_map(std::size_t x, std::size_t y) const {
        auto it = stalk_maps_.find({x, y});
        if (it == stalk_maps_.end()) throw SheafError("no stalk map for this specialization");
        return it->second;
    }

    struct SectionSpace {
        std::vector<std::size_t> points;   // points of U, ascending
        std::vector<std::size_t> offsets;  // stalk offsets in the ambient product
        std::size_t ambient = 0;
        Matrix basis;                      // columns: basis of the compatible families
    };

    /// Compatible families (s_x)_{x in U} with s_y = rho(s_x) whenever
    /// min_open(y) is inside min_open(x).
    SectionSpace sections(PointSet u) const {
        auto it = sections_cache_.find(u);
        if (it != sections_cache_.end()) return it->second;
        SectionSpace s;
        for (std::size_t x = 0; x < space_->num_points(); ++x)
            if ((u >> x) & 1) {
                s.offsets.push_back(s.ambient);
                s.points.push_back(x);
                s.ambient += stalk_dims_[x];
            }
        std::vector<Vector> rows;
        for (std::size_t xi = 0; xi < s.points.size(); ++xi)
            for (std::size_t yi = 0; yi < s.points.size(); ++yi) {
                std::size_t x = s.points[xi], y = s.points[yi];
                if (x == y || !subset(space_->min_open(y), space_->min_open(x))) continue;
                const Matrix& m = stalk_map(x, y);
                for (std::size_t a = 0; a < m.rows(); ++a) {
                    Vector row(s.ambient, Scalar::zero(field_));
                    for (std::size_t b = 0; b < m.cols(); ++b) row[s.offsets[xi] + b] = m.at(a, b);
                    row[s.offsets[yi] + a] -= Scalar::one(field_);
                    rows.push_back(std::move(row));
                }
            }
        if (rows.empty()) {
            s.basis = Matrix::identity(s.ambient, field_);
        } else {
            Matrix constraints(rows.size(), s.ambient, field_);
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < s.ambient; ++j) constraints.at(i, j) = rows[i][j];
            s.basis = from_columns(s.ambient, field_, kernel_basis(constraints));
        }
        sections_cache_[u] = s;
        return s;
    }

    std::size_t sections_dim(PointSet u) const { return sections(u).basis.cols(); }

    /// Restriction F(U) -> F(V) in section-basis coordinates.
    Matrix section_restriction(PointSet u, PointSet v) const {
        if (!subset(v, u)) throw SheafError("section restriction along a non-inclusion");
        SectionSpace su = sections(u), sv = sections(v);
        Matrix out(sv.basis.cols(), su.basis.cols(), field_);
        for (std::size_t c = 0; c < su.basis.cols(); ++c) {
            Vector amb = su.basis.col(c);
            Vector proj(sv.ambient, Scalar::zero(field_));
            for (std::size_t yi = 0; yi < sv.points.size(); ++yi) {
                std::size_t xi = 0;
                while (su.points[xi] != sv.points[yi]) ++xi;
                for (std::size_t a = 0; a < stalk_dims_[sv.points[yi]]; ++a)
                    proj[sv.offsets[yi] + a] = amb[su.offsets[xi] + a];
            }
            auto coords = solve_affine(sv.basis, proj);
            if (!coords) throw SheafError("restricted section is not compatible (broken sheaf data)");
            out.set_col(c, *coords);
        }
        return out;
    }

private:
    const FiniteSpace* space_;
    Field field_;
    std::vector<std::size_t> stalk_dims_;
    std::map<std::pair<std::size_t, std::size_t>, Matrix> stalk_maps_;
    mutable std::map<PointSet, SectionSpace> sections_cache_;
};

/// Plus-construction on a finite space: stalks are the values at minimal
/// opens, sections of the sheafification are compatible stalk families.
inline VectSheaf sheafify(const VectPresheaf& p) {
    const FiniteSpace& sp = p.space();
    std::vector<std::size_t> stalk_dims;
    for (std::size_t x = 0; x < sp.num_points(); ++x) stalk_dims.push_back(p.dim(sp.min_open(x)));
    std::map<std::pair<std::size_t, std::size_t>, Matrix> maps;
    for (std::size_t x = 0; x < sp.num_points(); ++x)
        for (std::size_t y = 0; y < sp.num_points(); ++y)
            if (subset(sp.min_open(y), sp.min_open(x)))
                maps[{x, y}] = p.rho(sp.min_open(x), sp.min_open(y));
    return VectSheaf(sp, p.field(), std::move(stalk_dims), std::move(maps));
}

/// The unit P(U) -> (aP)(U) of sheafification, in section-basis coordinates.
inline Matrix sheafify_unit(const VectPresheaf& p, const VectSheaf& f, PointSet u) {
    auto s = f.sections(u);
    Matrix out(s.basis.cols(), p.dim(u), p.field());
    for (std::size_t c = 0; c < p.dim(u); ++c) {
        Vector v(p.dim(u), Scalar::zero(p.field()));
        v[c] = Scalar::one(p.field());
        Vector amb(s.ambient, Scalar::zero(p.field()));
        for (std::size_t xi = 0; xi < s.points.size(); ++xi) {
            Vector germ = p.rho(u, p.space().min_open(s.points[xi])).apply(v);
            for (std::size_t a = 0; a < germ.size(); ++a) amb[s.offsets[xi] + a] = germ[a];
        }
        auto coords = solve_affine(s.basis, amb);
        if (!coords) throw SheafError("sheafify_unit: germ family not compatible");
        out.set_col(c, *coords);
    }
    return out;
}

namespace detail {

/// Strict specialization chains x_0, ..., x_n in U with min_open(x_{i+1})
/// strictly inside min_open(x_i).
inline std::vector<std::vector<std::vector<std::size_t>>> point_chains(const FiniteSpace& sp,
                                                                       PointSet u,
                                                                       std::size_t max_len) {
    std::vector<std::size_t> pts;
    for (std::size_t x = 0; x < sp.num_points(); ++x)
        if ((u >> x) & 1) pts.push_back(x);
    std::vector<std::vector<std::vector<std::size_t>>> chains(max_len + 1);
    std::vector<std::size_t> stack;
    std::function<void()> rec = [&]() {
        if (!stack.empty()) chains[stack.size() - 1].push_back(stack);
        if (stack.size() == max_len + 1) return;
        for (std::size_t x : pts) {
            if (!stack.empty()) {
                PointSet prev = sp.min_open(stack.back());
                PointSet cur = sp.min_open(x);
                if (!(subset(cur, prev) && cur != prev)) continue;
            }
            stack.push_back(x);
            rec();
            stack.pop_back();
        }
    };
    rec();
    return chains;
}

}  // namespace detail

/// Sheaf cohomology over U as the derived inverse limit over the point
/// poset: the complex of stalk values on strict specialization chains.
/// Returns dims for degrees 0, 1, ... (trailing zeros trimmed to the
/// longest chain bound).
inline std::vector<std::size_t> sheaf_cohomology(const VectSheaf& f, PointSet u) {
    const FiniteSpace& sp = f.space();
    std::size_t max_len = sp.num_points();  // chains cannot be longer
    auto chains = detail::point_chains(sp, u, max_len);
    std::size_t top = 0;
    for (std::size_t n = 0; n <= max_len; ++n)
        if (!chains[n].empty()) top = n;

    // complex spaces and offsets per degree
    std::vector<std::vector<std::size_t>> offsets(top + 1);
    std::vector<std::size_t> dims(top + 1, 0);
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> index(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
        for (const auto& c : chains[n]) {
            index[n][c] = offsets[n].size();
            offsets[n].push_back(dims[n]);
            dims[n] += f.stalk_dim(c.back());
        }
    }
    // differentials
    std::vector<Matrix> d;
    for (std::size_t n = 0; n < top; ++n) {
        Matrix dn(dims[n + 1], dims[n], f.field());
        for (const auto& c : chains[n + 1]) {
            std::size_t row0 = offsets[n + 1][index[n + 1].at(c)];
            for (std::size_t i = 0; i <= n + 1; ++i) {
                std::vector<std::size_t> face;
                for (std::size_t t = 0; t < c.size(); ++t)
                    if (t != i) face.push_back(c[t]);
                Scalar sign = (i % 2) ? -Scalar::one(f.field()) : Scalar::one(f.field());
                std::size_t col0 = offsets[n][index[n].at(face)];
                if (i == n + 1) {
                    // last face: push the value down along the stalk map
                    const Matrix& m = f.stalk_map(c[n], c[n + 1]);
                    for (std::size_t a = 0; a < m.rows(); ++a)
                        for (std::size_t b = 0; b < m.cols(); ++b)
                            if (!m.at(a, b).is_zero())
                                dn.at(row0 + a, col0 + b) += sign * m.at(a, b);
                } else {
                    for (std::size_t a = 0; a < f.stalk_dim(c.back()); ++a)
                        dn.at(row0 + a, col0 + a) += sign;
                }
            }
        }
        d.push_back(std::move(dn));
    }
    // cohomology dims
    std::vector<std::size_t> h;
    for (std::size_t n = 0; n <= top; ++n) {
        std::size_t z = (n < top) ? dims[n] - rank(d[n]) : dims[n];
        std::size_t b = (n > 0) ? rank(d[n - 1]) : 0;
        h.push_back(z - b);
    }
    return h;
}

/// Alternating Cech complex of a finite cover; exact oracle for
/// sheaf_cohomology.
inline std::vector<std::size_t> cech_cohomology(const VectSheaf& f,
                                                const std::vector<PointSet>& cover) {
    if (cover.empty()) throw SheafError("cech_cohomology: empty cover");
    std::size_t n_sets = cover.size();
    // tuples i_0 < ... < i_n per degree, with their intersections
    std::vector<std::vector<std::vector<std::size_t>>> tuples(n_sets);
    for (std::uint32_t mask = 1; mask < (1u << n_sets); ++mask) {
        std::vector<std::size_t> t;
        for (std::size_t i = 0; i < n_sets; ++i)
            if ((mask >> i) & 1) t.push_back(i);
        tuples[t.size() - 1].push_back(t);
    }
    auto inter_of = [&](const std::vector<std::size_t>& t) {
        PointSet v = f.space().full();
        for (auto i : t) v &= cover[i];
        return v;
    };
    std::size_t top = n_sets - 1;
    std::vector<std::vector<std::size_t>> offsets(top + 1);
    std::vector<std::size_t> dims(top + 1, 0);
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> index(top + 1);
    for (std::size_t n = 0; n <= top; ++n)
        for (const auto& t : tuples[n]) {
            index[n][t] = offsets[n].size();
            offsets[n].push_back(dims[n]);
            dims[n] += f.sections_dim(inter_of(t));
        }
    std::vector<Matrix> d;
    for (std::size_t n = 0; n < top; ++n) {
        Matrix dn(dims[n + 1], dims[n], f.field());
        for (const auto& t : tuples[n + 1]) {
            std::size_t row0 = offsets[n + 1][index[n + 1].at(t)];
            PointSet vt = inter_of(t);
            for (std::size_t i = 0; i <= n + 1; ++i) {
                std::vector<std::size_t> face;
                for (std::size_t s = 0; s < t.size(); ++s)
                    if (s != i) face.push_back(t[s]);
                Matrix m = f.section_restriction(inter_of(face), vt);
                Scalar sign = (i % 2) ? -Scalar::one(f.field()) : Scalar::one(f.field());
                std::size_t col0 = offsets[n][index[n].at(face)];
                for (std::size_t a = 0; a < m.rows(); ++a)
                    for (std::size_t b = 0; b < m.cols(); ++b)
                        if (!m.at(a, b).is_zero()) dn.at(row0 + a, col0 + b) += sign * m.at(a, b);
            }
        }
        d.push_back(std::move(dn));
    }
    std::vector<std::size_t> h;
    for (std::size_t n = 0; n <= top; ++n) {
        std::size_t z = (n < top) ? dims[n] - rank(d[n]) : dims[n];
        std::size_t b = (n > 0) ? rank(d[n - 1]) : 0;
        h.push_back(z - b);
    }
    return h;
}

/// C^p_B as a presheaf of vector spaces in canonical coordinates.
inline VectPresheaf colimit_degree_presheaf(const ColimitComplex& cb, std::size_t p) {
    return VectPresheaf(
        cb.space(), cb.presheaf().field(),
        [&](PointSet u) { return cb.dim(u, p); },
        [&](PointSet u, PointSet v) { return cb.restriction(u, v, p); });
}

/// The cohomology sheaf H^q(C): stalk at x is H^q(C_B(min_open(x))), stalk
/// maps are induced by restriction on cocycle representatives.
inline VectSheaf cohomology_sheaf(const ColimitComplex& cb, std::size_t q) {
    const FiniteSpace& sp = cb.space();
    const Field& f = cb.presheaf().field();
    std::vector<std::size_t> stalk_dims(sp.num_points());
    std::vector<Subquotient> sq(sp.num_points());
    for (std::size_t x = 0; x < sp.num_points(); ++x) {
        const HochschildComplex& cx = cb.complex_at(sp.min_open(x));
        Matrix Z = from_columns(cx.dim(q), f, kernel_basis(cx.differential(q)));
        Matrix B = q == 0 ? Matrix(cx.dim(0), 0, f) : column_space_basis(cx.differential(q - 1));
        sq[x] = Subquotient(Z, B);
        stalk_dims[x] = sq[x].dim();
    }
    std::map<std::pair<std::size_t, std::size_t>, Matrix> maps;
    for (std::size_t x = 0; x < sp.num_points(); ++x)
        for (std::size_t y = 0; y < sp.num_points(); ++y) {
            if (!subset(sp.min_open(y), sp.min_open(x))) continue;
            Matrix r = cb.restriction(sp.min_open(x), sp.min_open(y), q);
            Matrix m(stalk_dims[y], stalk_dims[x], f);
            for (std::size_t c = 0; c < stalk_dims[x]; ++c)
                m.set_col(c, sq[y].coords(r.apply(sq[x].representatives().col(c))));
            maps[{x, y}] = std::move(m);
        }
    return VectSheaf(sp, f, std::move(stalk_dims), std::move(maps));
}

struct AcyclicityFinding {
    PointSet open;
    std::size_t degree;  // which component C^p
    std::size_t i;       // cohomological degree with H^i != 0
    std::size_t dim;
};

struct AcyclicityReport {
    std::vector<AcyclicityFinding> findings;  // nonvanishing H^{i>0}(U, C^p)
    bool pass() const { return findings.empty(); }
};

/// H^i(U, C^p) for every open U and p up to the truncation; flabbiness of
/// C^p_B makes every positive degree vanish.
inline AcyclicityReport acyclicity_report(const ColimitComplex& cb) {
    AcyclicityReport rep;
    for (std::size_t p = 0; p <= cb.truncation(); ++p) {
        VectSheaf sheaf = sheafify(colimit_degree_presheaf(cb, p));
        for (PointSet u : cb.space().all_opens()) {
            auto h = sheaf_cohomology(sheaf, u);
            for (std::size_t i = 1; i < h.size(); ++i)
                if (h[i] != 0) rep.findings.push_back({u, p, i, h[i]});
        }
    }
    return rep;
}

}  // namespace hhsheaf
