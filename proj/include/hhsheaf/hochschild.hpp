#pragma once

#include "algebra.hpp"
#include "matrix.hpp"
#include "space.hpp"

#include <cassert>
#include <functional>
#include <map>
#include <vector>

namespace hhsheaf {

struct HochschildError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A nested chain U_0 <= U_1 <= ... <= U_p of basic opens (non-strict).
using OpenChain = std::vector<PointSet>;

/// The truncated Hochschild cochain complex of the k-linear category of a
/// basis: objects are the basic opens, hom(V, U) = O(V) for V inside U, and
/// composition is restrict-then-multiply.
///
/// Degree-p cochains assign to every chain U_0 <= ... <= U_p a multilinear
/// map O(U_{p-1}) (x) ... (x) O(U_0) -> O(U_0). Coordinates: chains are
/// enumerated lexicographically in the (sorted) member order; within a
/// chain's block, the flat index is inIndex * dim O(U_0) + outIndex, where
/// inIndex runs lexicographically with the leftmost tensor factor (the
/// argument over O(U_{p-1})) slowest.
class HochschildComplex {
public:
    HochschildComplex(Basis basis, const StructurePresheaf& o, std::size_t truncation)
        : basis_(std::move(basis)), o_(&o), n_(truncation) {
        if (!basis_.is_basis()) throw HochschildError("not a basis");
        for (PointSet m : basis_.members)
            if (!o.has_algebra(m))
                throw HochschildError("basis member " + o.space().set_name(m) +
                                      " carries no algebra");
        enumerate_chains();
        build_offsets();
        for (std::size_t p = 0; p + 1 <= n_; ++p) diff_.push_back(build_differential(p));
        for (std::size_t p = 0; p + 2 <= n_; ++p) {
            Matrix dd = diff_[p + 1] * diff_[p];
            if (!dd.is_zero())
                throw HochschildError("internal error: d^2 != 0 at degree " + std::to_string(p));
        }
    }

    const Basis& basis() const { return basis_; }
    const StructurePresheaf& presheaf() const { return *o_; }
    const Field& field() const { return o_->field(); }
    std::size_t truncation() const { return n_; }

    std::size_t dim(std::size_t p) const { return p <= n_ ? dims_[p] : 0; }
    const Matrix& differential(std::size_t p) const {
        if (p + 1 > n_) throw HochschildError("differential beyond truncation");
        return diff_[p];
    }

    const std::vector<OpenChain>& chains(std::size_t p) const { return chains_[p]; }
    std::size_t chain_index(std::size_t p, const OpenChain& c) const {
        auto it = chain_idx_[p].find(c);
        if (it == chain_idx_[p].end()) throw HochschildError("chain not in complex");
        return it->second;
    }
    std::size_t chain_offset(std::size_t p, std::size_t idx) const { return offsets_[p][idx]; }

    std::size_t num_strict_chains(std::size_t p) const {
        std::size_t count = 0;
        for (const auto& c : chains_[p]) {
            bool strict = true;
            for (std::size_t i = 0; i + 1 < c.size(); ++i)
                if (c[i] == c[i + 1]) strict = false;
            if (strict) ++count;
        }
        return count;
    }

    /// Argument dimensions (dim of a_1, ..., dim of a_p) of a degree-p chain.
    std::vector<std::size_t> arg_dims(const OpenChain& c) const {
        std::vector<std::size_t> d;
        for (std::size_t l = c.size() - 1; l-- > 0;) d.push_back(o_->algebra(c[l]).dim);
        return d;
    }

    static std::size_t flat_index(const std::vector<std::size_t>& dims,
                                  const std::vector<std::size_t>& idx) {
        std::size_t f = 0;
        for (std::size_t l = 0; l < dims.size(); ++l) f = f * dims[l] + idx[l];
        return f;
    }

    std::size_t coord(std::size_t p, std::size_t chain_idx, std::size_t in_index,
                      std::size_t out_index) const {
        const OpenChain& c = chains_[p][chain_idx];
        return offsets_[p][chain_idx] + in_index * o_->algebra(c.front()).dim + out_index;
    }

    struct Cohomology {
        std::size_t dim;
        std::vector<Vector> representatives;  // cocycle coordinate vectors
    };

    /// H^q = ker d^q / im d^{q-1}; requires q <= truncation - 1.
    Cohomology cohomology(std::size_t q, bool normalized = false) const {
        if (q + 1 > n_) throw HochschildError("cohomology degree needs d^q beyond truncation");
        Matrix Z = from_columns(dims_[q], field(), kernel_basis(diff_[q]));
        Matrix B = q == 0 ? Matrix(dims_[0], 0, field()) : column_space_basis(diff_[q - 1]);
        if (normalized) {
            Matrix W = normalized_subspace(q);
            Z = span_intersection(Z, W);
            Matrix Bn(dims_[q], 0, field());
            if (q > 0) Bn = column_space_basis(diff_[q - 1] * normalized_subspace(q - 1));
            B = Bn;
        }
        Subquotient sq(Z, B);
        Cohomology h;
        h.dim = sq.dim();
        for (std::size_t j = 0; j < sq.dim(); ++j)
            h.representatives.push_back(sq.representatives().col(j));
        return h;
    }

    /// Basis (as columns) of the normalized cochains in degree p: those
    /// vanishing whenever an argument slot over a repeated open carries the
    /// identity morphism.
    Matrix normalized_subspace(std::size_t p) const {
        std::vector<Vector> rows;
        for (std::size_t ci = 0; ci < chains_[p].size(); ++ci) {
            const OpenChain& c = chains_[p][ci];
            std::size_t dim_out = o_->algebra(c.front()).dim;
            auto adims = arg_dims(c);
            for (std::size_t l = 1; l <= p; ++l) {
                if (c[p - l] != c[p - l + 1]) continue;  // slot l is not an endomorphism slot
                const Vector& unit = o_->algebra(c[p - l]).unit;
                // rows: one per (choice of other slots, out index)
                std::vector<std::size_t> other_dims;
                for (std::size_t m = 0; m < adims.size(); ++m)
                    if (m != l - 1) other_dims.push_back(adims[m]);
                std::size_t others = 1;
                for (auto d : other_dims) others *= d;
                for (std::size_t oi = 0; oi < others; ++oi) {
                    std::vector<std::size_t> idx(adims.size(), 0);
                    std::size_t rem = oi;
                    for (std::size_t m = adims.size(); m-- > 0;) {
                        if (m == l - 1) continue;
                        idx[m] = rem % adims[m];
                        rem /= adims[m];
                    }
                    for (std::size_t k = 0; k < dim_out; ++k) {
                        Vector row(dims_[p], Scalar::zero(field()));
                        for (std::size_t j = 0; j < adims[l - 1]; ++j) {
                            if (unit[j].is_zero()) continue;
                            idx[l - 1] = j;
                            row[coord(p, ci, flat_index(adims, idx), k)] += unit[j];
                        }
                        rows.push_back(std::move(row));
                    }
                }
            }
        }
        if (rows.empty()) return Matrix::identity(dims_[p], field());
        Matrix E(rows.size(), dims_[p], field());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < dims_[p]; ++j) E.at(i, j) = rows[i][j];
        return from_columns(dims_[p], field(), kernel_basis(E));
    }

private:
    void enumerate_chains() {
        chains_.resize(n_ + 1);
        chain_idx_.resize(n_ + 1);
        const auto& mem = basis_.members;
        for (std::size_t p = 0; p <= n_; ++p) {
            std::vector<std::size_t> stack;
            // depth-first, lexicographic in member indices
            std::function<void()> rec = [&]() {
                if (stack.size() == p + 1) {
                    OpenChain c;
                    for (auto i : stack) c.push_back(mem[i]);
                    chain_idx_[p][c] = chains_[p].size();
                    chains_[p].push_back(std::move(c));
                    return;
                }
                for (std::size_t i = 0; i < mem.size(); ++i) {
                    if (!stack.empty() && !subset(mem[stack.back()], mem[i])) continue;
                    stack.push_back(i);
                    rec();
                    stack.pop_back();
                }
            };
            rec();
        }
    }

    void build_offsets() {
        offsets_.resize(n_ + 1);
        dims_.resize(n_ + 1);
        for (std::size_t p = 0; p <= n_; ++p) {
            std::size_t off = 0;
            for (const auto& c : chains_[p]) {
                offsets_[p].push_back(off);
                std::size_t block = o_->algebra(c.front()).dim;
                for (std::size_t i = 0; i + 1 < c.size(); ++i) block *= o_->algebra(c[i]).dim;
                off += block;
            }
            dims_[p] = off;
        }
    }

    Matrix build_differential(std::size_t p) const {
        const Field& f = field();
        Matrix d(dims_[p + 1], dims_[p], f);
        for (std::size_t ci = 0; ci < chains_[p + 1].size(); ++ci) {
            const OpenChain& v = chains_[p + 1][ci];  // V_0 <= ... <= V_{p+1}
            const Algebra& a0 = o_->algebra(v.front());
            std::size_t dim_out = a0.dim;
            auto adims = arg_dims(v);  // dims of a_1..a_{p+1}
            std::size_t in_size = 1;
            for (auto x : adims) in_size *= x;

            // subchain indices and restrictions shared across multi-indices
            OpenChain c_bot(v.begin(), v.end() - 1);   // drop V_{p+1}
            OpenChain c_top(v.begin() + 1, v.end());   // drop V_0
            std::size_t idx_bot = chain_index(p, c_bot);
            std::size_t idx_top = chain_index(p, c_top);
            Matrix r_top0 = o_->restriction(v[p], v[0]);   // carries a_1 down to O(V_0)
            Matrix r_10 = o_->restriction(v[1], v[0]);     // carries phi(a_1..a_p) down
            const Algebra& a_v1 = o_->algebra(v[1]);

            std::vector<std::size_t> jj(adims.size(), 0);
            for (std::size_t in = 0; in < in_size; ++in) {
                // decode multi-index (j_1, ..., j_{p+1}), leftmost slowest
                std::size_t rem = in;
                for (std::size_t m = adims.size(); m-- > 0;) {
                    jj[m] = rem % adims[m];
                    rem /= adims[m];
                }
                std::size_t row_base = offsets_[p + 1][ci] + in * dim_out;

                // term 0: a_1 o phi(a_2,...,a_{p+1})
                {
                    std::vector<std::size_t> j0(jj.begin() + 1, jj.end());
                    auto adims0 = arg_dims(c_bot);
                    std::size_t in0 = flat_index(adims0, j0);
                    for (std::size_t b = 0; b < dim_out; ++b) {
                        std::size_t col = coord(p, idx_bot, in0, b);
                        for (std::size_t k = 0; k < dim_out; ++k) {
                            Scalar coeff = Scalar::zero(f);
                            for (std::size_t a = 0; a < o_->algebra(v[p]).dim; ++a) {
                                if (r_top0.at(a, jj[0]).is_zero()) continue;
                                coeff += r_top0.at(a, jj[0]) * a0.sc(a, b, k);
                            }
                            if (!coeff.is_zero()) d.at(row_base + k, col) += coeff;
                        }
                    }
                }

                // inner terms: phi(..., a_i o a_{i+1}, ...), sign (-1)^i
                for (std::size_t i = 1; i <= p; ++i) {
                    // a_i in O(V_{p+1-i}), a_{i+1} in O(V_{p-i}); composite in O(V_{p-i})
                    const Algebra& am = o_->algebra(v[p - i]);
                    Matrix rm = o_->restriction(v[p + 1 - i], v[p - i]);
                    OpenChain cm;
                    for (std::size_t t = 0; t < v.size(); ++t)
                        if (t != p + 1 - i) cm.push_back(v[t]);
                    std::size_t idx_m = chain_index(p, cm);
                    auto adims_m = arg_dims(cm);
                    Scalar sign = (i % 2) ? -Scalar::one(f) : Scalar::one(f);
                    for (std::size_t b = 0; b < am.dim; ++b) {
                        Scalar gb = Scalar::zero(f);
                        for (std::size_t a = 0; a < o_->algebra(v[p + 1 - i]).dim; ++a) {
                            if (rm.at(a, jj[i - 1]).is_zero()) continue;
                            gb += rm.at(a, jj[i - 1]) * am.sc(a, jj[i], b);
                        }
                        if (gb.is_zero()) continue;
                        std::vector<std::size_t> jm;
                        for (std::size_t m = 0; m + 1 <= i - 1; ++m) jm.push_back(jj[m]);
                        jm.push_back(b);
                        for (std::size_t m = i + 1; m < adims.size(); ++m) jm.push_back(jj[m]);
                        std::size_t in_m = flat_index(adims_m, jm);
                        Scalar val = sign * gb;
                        for (std::size_t k = 0; k < dim_out; ++k)
                            d.at(row_base + k, coord(p, idx_m, in_m, k)) += val;
                    }
                }

                // last term: phi(a_1,...,a_p) o a_{p+1}, sign (-1)^{p+1}
                {
                    std::vector<std::size_t> jr(jj.begin(), jj.end() - 1);
                    auto adims_r = arg_dims(c_top);
                    std::size_t in_r = flat_index(adims_r, jr);
                    Scalar sign = ((p + 1) % 2) ? -Scalar::one(f) : Scalar::one(f);
                    for (std::size_t b = 0; b < a_v1.dim; ++b) {
                        std::size_t col = coord(p, idx_top, in_r, b);
                        for (std::size_t k = 0; k < dim_out; ++k) {
                            Scalar coeff = Scalar::zero(f);
                            for (std::size_t a = 0; a < dim_out; ++a) {
                                if (r_10.at(a, b).is_zero()) continue;
                                coeff += r_10.at(a, b) * a0.sc(a, jj.back(), k);
                            }
                            if (!coeff.is_zero()) d.at(row_base + k, col) += sign * coeff;
                        }
                    }
                }
            }
        }
        return d;
    }

    Basis basis_;
    const StructurePresheaf* o_;
    std::size_t n_;
    std::vector<std::vector<OpenChain>> chains_;
    std::vector<std::map<OpenChain, std::size_t>> chain_idx_;
    std::vector<std::vector<std::size_t>> offsets_;
    std::vector<std::size_t> dims_;
    std::vector<Matrix> diff_;
};

/// A cochain: a coordinate vector in one degree of a complex.
struct Cochain {
    const HochschildComplex* complex = nullptr;
    std::size_t degree = 0;
    Vector coords;

    static Cochain zero(const HochschildComplex& cx, std::size_t p) {
        return {&cx, p, Vector(cx.dim(p), Scalar::zero(cx.field()))};
    }

    bool is_zero() const {
        for (auto& s : coords)
            if (!s.is_zero()) return false;
        return true;
    }
    bool operator==(const Cochain& o) const {
        return complex == o.complex && degree == o.degree && coords == o.coords;
    }

    friend Cochain operator+(const Cochain& a, const Cochain& b) {
        if (a.complex != b.complex || a.degree != b.degree)
            throw HochschildError("cochain addition mismatch");
        Cochain c = a;
        for (std::size_t i = 0; i < c.coords.size(); ++i) c.coords[i] += b.coords[i];
        return c;
    }
    friend Cochain operator-(const Cochain& a, const Cochain& b) {
        Cochain c = b;
        for (auto& s : c.coords) s = -s;
        return a + c;
    }
    Cochain scaled(const Scalar& s) const {
        Cochain c = *this;
        for (auto& x : c.coords) x *= s;
        return c;
    }

    /// Multilinear evaluation on a chain with arbitrary argument vectors
    /// (args[0] = a_1 over O(U_{p-1}), ..., args[p-1] = a_p over O(U_0)).
    Vector evaluate(const OpenChain& c, const std::vector<Vector>& args) const {
        const auto& o = complex->presheaf();
        std::size_t ci = complex->chain_index(degree, c);
        std::size_t dim_out = o.algebra(c.front()).dim;
        auto adims = complex->arg_dims(c);
        Vector out(dim_out, Scalar::zero(complex->field()));
        std::size_t in_size = 1;
        for (auto d : adims) in_size *= d;
        for (std::size_t in = 0; in < in_size; ++in) {
            std::size_t rem = in;
            Scalar coeff = Scalar::one(complex->field());
            for (std::size_t m = adims.size(); m-- > 0;) {
                coeff *= args[m][rem % adims[m]];
                rem /= adims[m];
                if (coeff.is_zero()) break;
            }
            if (coeff.is_zero()) continue;
            for (std::size_t k = 0; k < dim_out; ++k)
                out[k] += coeff * coords[complex->coord(degree, ci, in, k)];
        }
        return out;
    }
};

inline Cochain apply_differential(const Cochain& f) {
    Cochain out{f.complex, f.degree + 1, f.complex->differential(f.degree).apply(f.coords)};
    return out;
}

/// Forgetful chain map C(b) -> C(b') for a sub-basis b' of b (same presheaf,
/// same truncation), in degree p.
inline Matrix transition_matrix(const HochschildComplex& src, const HochschildComplex& dst,
                                std::size_t p) {
    Matrix t(dst.dim(p), src.dim(p), src.field());
    const auto& o = src.presheaf();
    for (std::size_t ci = 0; ci < dst.chains(p).size(); ++ci) {
        const OpenChain& c = dst.chains(p)[ci];
        std::size_t si = src.chain_index(p, c);
        std::size_t block = o.algebra(c.front()).dim;
        for (std::size_t i = 0; i + 1 < c.size(); ++i) block *= o.algebra(c[i]).dim;
        for (std::size_t j = 0; j < block; ++j)
            t.at(dst.chain_offset(p, ci) + j, src.chain_offset(p, si) + j) = Scalar::one(src.field());
    }
    return t;
}

/// Restriction C(b|_U) -> C(b|_V): builds the restricted complex and forgets
/// chains outside it.
inline std::pair<HochschildComplex, Cochain> restrict_cochain(const Cochain& f, PointSet v) {
    const HochschildComplex& cx = *f.complex;
    HochschildComplex sub(restrict_basis(cx.basis(), v), cx.presheaf(), cx.truncation());
    Matrix t = transition_matrix(cx, sub, f.degree);
    Cochain g{&sub, f.degree, t.apply(f.coords)};
    return {std::move(sub), std::move(g)};
}

/// Cup product: (f u g)(a_1..a_{p+q}) = f(a_1..a_p) o g(a_{p+1}..a_{p+q}).
inline Cochain cup(const Cochain& f, const Cochain& g) {
    if (f.complex != g.complex) throw HochschildError("cup: different complexes");
    const HochschildComplex& cx = *f.complex;
    std::size_t p = f.degree, q = g.degree, n = p + q;
    if (n > cx.truncation()) throw HochschildError("cup: degree beyond truncation");
    const auto& o = cx.presheaf();
    Cochain out = Cochain::zero(cx, n);
    for (std::size_t ci = 0; ci < cx.chains(n).size(); ++ci) {
        const OpenChain& w = cx.chains(n)[ci];
        OpenChain cf(w.begin() + q, w.end());
        OpenChain cg(w.begin(), w.begin() + q + 1);
        std::size_t fi = cx.chain_index(p, cf);
        std::size_t gi = cx.chain_index(q, cg);
        std::size_t dim_out = o.algebra(w[0]).dim;
        std::size_t dim_f = o.algebra(w[q]).dim;
        Matrix r = o.restriction(w[q], w[0]);
        const Algebra& alg0 = o.algebra(w[0]);
        auto adims = cx.arg_dims(w);
        auto adims_f = cx.arg_dims(cf);
        auto adims_g = cx.arg_dims(cg);
        std::size_t in_size = 1;
        for (auto d : adims) in_size *= d;
        std::vector<std::size_t> jj(adims.size());
        for (std::size_t in = 0; in < in_size; ++in) {
            std::size_t rem = in;
            for (std::size_t m = adims.size(); m-- > 0;) {
                jj[m] = rem % adims[m];
                rem /= adims[m];
            }
            std::vector<std::size_t> jf(jj.begin(), jj.begin() + p);
            std::vector<std::size_t> jg(jj.begin() + p, jj.end());
            std::size_t in_f = HochschildComplex::flat_index(adims_f, jf);
            std::size_t in_g = HochschildComplex::flat_index(adims_g, jg);
            Vector vf(dim_f, Scalar::zero(cx.field()));
            for (std::size_t t = 0; t < dim_f; ++t) vf[t] = f.coords[cx.coord(p, fi, in_f, t)];
            Vector vg(dim_out, Scalar::zero(cx.field()));
            for (std::size_t t = 0; t < dim_out; ++t) vg[t] = g.coords[cx.coord(q, gi, in_g, t)];
            Vector prod = alg0.mul(r.apply(vf), vg);
            for (std::size_t k = 0; k < dim_out; ++k)
                out.coords[cx.coord(n, ci, in, k)] += prod[k];
        }
    }
    return out;
}

/// Gerstenhaber circle product: signed sum over substitutions of g into the
/// argument slots of f, composing along the category structure.
inline Cochain circle(const Cochain& f, const Cochain& g) {
    if (f.complex != g.complex) throw HochschildError("circle: different complexes");
    const HochschildComplex& cx = *f.complex;
    std::size_t p = f.degree, q = g.degree;
    if (p == 0) return Cochain::zero(cx, 0);  // no slots to substitute into
    std::size_t n = p + q - 1;
    if (n > cx.truncation()) throw HochschildError("circle: degree beyond truncation");
    const auto& o = cx.presheaf();
    Cochain out = Cochain::zero(cx, n);
    for (std::size_t ci = 0; ci < cx.chains(n).size(); ++ci) {
        const OpenChain& w = cx.chains(n)[ci];
        auto adims = cx.arg_dims(w);
        std::size_t in_size = 1;
        for (auto d : adims) in_size *= d;
        std::vector<std::size_t> jj(adims.size());
        for (std::size_t in = 0; in < in_size; ++in) {
            std::size_t rem = in;
            for (std::size_t m = adims.size(); m-- > 0;) {
                jj[m] = rem % adims[m];
                rem /= adims[m];
            }
            for (std::size_t i = 1; i <= p; ++i) {
                // g eats a_i..a_{i+q-1}, spanning opens w[p-i] .. w[n-i+1]
                OpenChain cg(w.begin() + (p - i), w.begin() + (n - i + 1) + 1);
                std::vector<Vector> gargs;
                for (std::size_t m = i - 1; m <= i + q - 2 && q > 0; ++m) {
                    Vector e(adims[m], Scalar::zero(cx.field()));
                    e[jj[m]] = Scalar::one(cx.field());
                    gargs.push_back(std::move(e));
                }
                Vector gval = g.evaluate(cg, gargs);
                // f's chain: w[0..p-i] then w[n-i+1..n]
                OpenChain cf(w.begin(), w.begin() + (p - i) + 1);
                cf.insert(cf.end(), w.begin() + (n - i + 1), w.end());
                std::vector<Vector> fargs;
                for (std::size_t m = 0; m + 1 <= i - 1; ++m) {
                    Vector e(adims[m], Scalar::zero(cx.field()));
                    e[jj[m]] = Scalar::one(cx.field());
                    fargs.push_back(std::move(e));
                }
                fargs.push_back(gval);
                for (std::size_t m = i + q - 1; m < adims.size(); ++m) {
                    Vector e(adims[m], Scalar::zero(cx.field()));
                    e[jj[m]] = Scalar::one(cx.field());
                    fargs.push_back(std::move(e));
                }
                Vector fval = f.evaluate(cf, fargs);
                // sign (-1)^{(i-1)(q-1)}
                bool sign_neg = (((i - 1) % 2) != 0) && (((q + 1) % 2) != 0);
                std::size_t dim_out = o.algebra(w[0]).dim;
                for (std::size_t k = 0; k < dim_out; ++k) {
                    Scalar v = fval[k];
                    if (sign_neg) v = -v;
                    out.coords[cx.coord(n, ci, in, k)] += v;
                }
            }
        }
    }
    return out;
}

/// Gerstenhaber bracket [f, g] = f o g - (-1)^{(p-1)(q-1)} g o f.
inline Cochain bracket(const Cochain& f, const Cochain& g) {
    std::size_t p = f.degree, q = g.degree;
    Cochain a = circle(f, g);
    Cochain b = circle(g, f);
    bool neg = (((p + 1) % 2) != 0) && (((q + 1) % 2) != 0);  // (p-1)(q-1) odd
    return neg ? a + b : a - b;
}

/// The degree-2 multiplication-and-restriction cochain m: m(a_1, a_2) =
/// a_1 o a_2 (restrict a_1 down, multiply).
inline Cochain multiplication_cochain(const HochschildComplex& cx) {
    const auto& o = cx.presheaf();
    Cochain m = Cochain::zero(cx, 2);
    for (std::size_t ci = 0; ci < cx.chains(2).size(); ++ci) {
        const OpenChain& v = cx.chains(2)[ci];
        const Algebra& a0 = o.algebra(v[0]);
        Matrix r = o.restriction(v[1], v[0]);
        std::size_t d1 = o.algebra(v[1]).dim, d0 = a0.dim;
        for (std::size_t j1 = 0; j1 < d1; ++j1)
            for (std::size_t j2 = 0; j2 < d0; ++j2) {
                std::size_t in = j1 * d0 + j2;
                for (std::size_t k = 0; k < d0; ++k) {
                    Scalar coeff = Scalar::zero(cx.field());
                    for (std::size_t a = 0; a < d0; ++a) {
                        if (r.at(a, j1).is_zero()) continue;
                        coeff += r.at(a, j1) * a0.sc(a, j2, k);
                    }
                    m.coords[cx.coord(2, ci, in, k)] = coeff;
                }
            }
    }
    return m;
}

/// The unit 0-cochain: the unit of O(U_0) at every one-element chain.
inline Cochain unit_cochain(const HochschildComplex& cx) {
    const auto& o = cx.presheaf();
    Cochain u = Cochain::zero(cx, 0);
    for (std::size_t ci = 0; ci < cx.chains(0).size(); ++ci) {
        const Algebra& a = o.algebra(cx.chains(0)[ci][0]);
        for (std::size_t k = 0; k < a.dim; ++k)
            u.coords[cx.coord(0, ci, 0, k)] = a.unit[k];
    }
    return u;
}

}  // namespace hhsheaf
