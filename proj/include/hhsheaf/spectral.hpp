#pragma once

#include "presheaf.hpp"

#include <cassert>
#include <map>
#include <vector>

namespace hhsheaf {

struct SpectralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// First-quadrant double complex D^{p,q}: the direct sum over strict
/// specialization chains x_0 > ... > x_p (each minimal open strictly inside
/// the previous) of C^q of the colimit complex at min_open(x_p). The
/// horizontal differential is the derived-limit one; the vertical is
/// (-1)^p times the cochain differential, cut off to zero at the truncation
/// degree.
class DoubleComplex {
public:
    explicit DoubleComplex(const ColimitComplex& cb) : cb_(&cb), field_(cb.presheaf().field()) {
        const FiniteSpace& sp = cb.space();
        qmax_ = cb.truncation();
        auto chains = detail::point_chains(sp, sp.full(), sp.num_points());
        for (std::size_t n = 0; n <= sp.num_points(); ++n)
            if (!chains[n].empty()) pmax_ = n;
        chains_.assign(pmax_ + 1, {});
        for (std::size_t p = 0; p <= pmax_; ++p) chains_[p] = chains[p];

        dims_.assign(pmax_ + 1, std::vector<std::size_t>(qmax_ + 1, 0));
        offsets_.assign(pmax_ + 1, std::vector<std::vector<std::size_t>>(qmax_ + 1));
        for (std::size_t p = 0; p <= pmax_; ++p)
            for (std::size_t q = 0; q <= qmax_; ++q)
                for (const auto& c : chains_[p]) {
                    offsets_[p][q].push_back(dims_[p][q]);
                    dims_[p][q] += cb.dim(sp.min_open(c.back()), q);
                }

        dh_.assign(pmax_ + 1, std::vector<Matrix>(qmax_ + 1));
        dv_.assign(pmax_ + 1, std::vector<Matrix>(qmax_ + 1));
        for (std::size_t p = 0; p <= pmax_; ++p)
            for (std::size_t q = 0; q <= qmax_; ++q) {
                dh_[p][q] = build_dh(p, q);
                dv_[p][q] = build_dv(p, q);
            }
        for (std::size_t p = 0; p <= pmax_; ++p)
            for (std::size_t q = 0; q <= qmax_; ++q) {
                if (p + 2 <= pmax_) assert((dh_[p + 1][q] * dh_[p][q]).is_zero());
                if (q + 2 <= qmax_) assert((dv_[p][q + 1] * dv_[p][q]).is_zero());
                if (p + 1 <= pmax_ && q + 1 <= qmax_)
                    assert((dh_[p][q + 1] * dv_[p][q] + dv_[p + 1][q] * dh_[p][q]).is_zero());
            }
    }

    const ColimitComplex& colimit() const { return *cb_; }
    const Field& field() const { return field_; }
    std::size_t pmax() const { return pmax_; }
    std::size_t qmax() const { return qmax_; }
    std::size_t dim(std::size_t p, std::size_t q) const {
        return p <= pmax_ && q <= qmax_ ? dims_[p][q] : 0;
    }
    /// D^{p,q} -> D^{p+1,q} (zero-row matrix past the edge).
    const Matrix& dh(std::size_t p, std::size_t q) const { return dh_[p][q]; }
    /// D^{p,q} -> D^{p,q+1}, sign (-1)^p included; zero rows at q = qmax.
    const Matrix& dv(std::size_t p, std::size_t q) const { return dv_[p][q]; }

    const std::vector<std::vector<std::size_t>>& chains(std::size_t p) const { return chains_[p]; }

private:
    Matrix build_dh(std::size_t p, std::size_t q) const {
        std::size_t target_dim = p + 1 <= pmax_ ? dims_[p + 1][q] : 0;
        Matrix m(target_dim, dims_[p][q], field_);
        if (p + 1 > pmax_) return m;
        const FiniteSpace& sp = cb_->space();
        std::map<std::vector<std::size_t>, std::size_t> src_index;
        for (std::size_t i = 0; i < chains_[p].size(); ++i) src_index[chains_[p][i]] = i;
        for (std::size_t ti = 0; ti < chains_[p + 1].size(); ++ti) {
            const auto& c = chains_[p + 1][ti];
            std::size_t row0 = offsets_[p + 1][q][ti];
            for (std::size_t i = 0; i <= p + 1; ++i) {
                std::vector<std::size_t> face;
                for (std::size_t t = 0; t < c.size(); ++t)
                    if (t != i) face.push_back(c[t]);
                Scalar sign = (i % 2) ? -Scalar::one(field_) : Scalar::one(field_);
                std::size_t col0 = offsets_[p][q][src_index.at(face)];
                if (i == p + 1) {
                    Matrix r = cb_->restriction(sp.min_open(c[p]), sp.min_open(c[p + 1]), q);
                    for (std::size_t a = 0; a < r.rows(); ++a)
                        for (std::size_t b = 0; b < r.cols(); ++b)
                            if (!r.at(a, b).is_zero()) m.at(row0 + a, col0 + b) += sign * r.at(a, b);
                } else {
                    for (std::size_t a = 0; a < cb_->dim(sp.min_open(c.back()), q); ++a)
                        m.at(row0 + a, col0 + a) += sign;
                }
            }
        }
        return m;
    }

    Matrix build_dv(std::size_t p, std::size_t q) const {
        std::size_t target_dim = q + 1 <= qmax_ ? dims_[p][q + 1] : 0;
        Matrix m(target_dim, dims_[p][q], field_);
        if (q + 1 > qmax_) return m;
        const FiniteSpace& sp = cb_->space();
        Scalar sign = (p % 2) ? -Scalar::one(field_) : Scalar::one(field_);
        for (std::size_t ci = 0; ci < chains_[p].size(); ++ci) {
            const Matrix& d = cb_->complex_at(sp.min_open(chains_[p][ci].back())).differential(q);
            std::size_t row0 = offsets_[p][q + 1][ci], col0 = offsets_[p][q][ci];
            for (std::size_t a = 0; a < d.rows(); ++a)
                for (std::size_t b = 0; b < d.cols(); ++b)
                    if (!d.at(a, b).is_zero()) m.at(row0 + a, col0 + b) = sign * d.at(a, b);
        }
        return m;
    }

    const ColimitComplex* cb_;
    Field field_;
    std::size_t pmax_ = 0, qmax_ = 0;
    std::vector<std::vector<std::vector<std::size_t>>> chains_;
    std::vector<std::vector<std::size_t>> dims_;
    std::vector<std::vector<std::vector<std::size_t>>> offsets_;
    std::vector<std::vector<Matrix>> dh_, dv_;
};

struct SpectralPage {
    std::size_t r = 0;
    std::vector<std::vector<std::size_t>> dims;  // dims[p][q]
    /// d_r: E_r^{p,q} -> E_r^{p+r, q-r+1}, in the page's coordinates.
    std::map<std::pair<std::size_t, std::size_t>, Matrix> d;
    std::size_t dim(std::size_t p, std::size_t q) const {
        return p < dims.size() && q < dims[p].size() ? dims[p][q] : 0;
    }
};

/// The spectral sequence of the column filtration of a double complex,
/// computed through subspace arithmetic on the total complex:
///   Z_r^{p,q} = F^p T^n  cap  d^{-1}(F^{p+r} T^{n+1}),
///   E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2}).
class SpectralSequence {
public:
    explicit SpectralSequence(const DoubleComplex& dc) : dc_(&dc), field_(dc.field()) {
        nmax_ = dc.pmax() + dc.qmax();
        tot_dims_.assign(nmax_ + 1, 0);
        tot_off_.assign(nmax_ + 1, std::map<std::size_t, std::size_t>{});
        for (std::size_t n = 0; n <= nmax_; ++n)
            for (std::size_t p = 0; p <= std::min(n, dc.pmax()); ++p) {
                if (n - p > dc.qmax()) continue;
                tot_off_[n][p] = tot_dims_[n];
                tot_dims_[n] += dc.dim(p, n - p);
            }
        for (std::size_t n = 0; n < nmax_; ++n) {
            Matrix d(tot_dims_[n + 1], tot_dims_[n], field_);
            for (auto [p, off] : tot_off_[n]) {
                std::size_t q = n - p;
                place_block(d, dc.dh(p, q), n + 1, p + 1, off);
                place_block(d, dc.dv(p, q), n + 1, p, off);
            }
            tot_d_.push_back(std::move(d));
        }
        for (std::size_t n = 0; n + 1 < tot_d_.size(); ++n)
            assert((tot_d_[n + 1] * tot_d_[n]).is_zero());
    }

    const DoubleComplex& double_complex() const { return *dc_; }
    std::size_t nmax() const { return nmax_; }
    std::size_t total_dim(std::size_t n) const { return n <= nmax_ ? tot_dims_[n] : 0; }
    const Matrix& total_differential(std::size_t n) const { return tot_d_[n]; }

    std::vector<std::size_t> total_cohomology() const {
        std::vector<std::size_t> h;
        for (std::size_t n = 0; n <= nmax_; ++n) {
            std::size_t z = n < nmax_ ? tot_dims_[n] - rank(tot_d_[n]) : tot_dims_[n];
            std::size_t b = n > 0 ? rank(tot_d_[n - 1]) : 0;
            h.push_back(z - b);
        }
        return h;
    }

    /// E_r with its differentials; r >= 0. Every page beyond
    /// pmax + qmax + 1 equals E_infinity.
    SpectralPage page(std::size_t r) const {
        SpectralPage pg;
        pg.r = r;
        pg.dims.assign(dc_->pmax() + 1, std::vector<std::size_t>(dc_->qmax() + 1, 0));
        std::map<std::pair<std::size_t, std::size_t>, Subquotient> sq;
        for (std::size_t p = 0; p <= dc_->pmax(); ++p)
            for (std::size_t q = 0; q <= dc_->qmax(); ++q) {
                Matrix Z = cycle_space(r, p, q);
                Matrix B1 = cycle_space(r - 1, p + 1, static_cast<std::ptrdiff_t>(q) - 1);
                Matrix B2 = boundary_space(r, p, q);
                Matrix B = column_space_basis(hstack(B1, B2));
                sq[{p, q}] = Subquotient(Z, B);
                pg.dims[p][q] = sq[{p, q}].dim();
            }
        for (std::size_t p = 0; p <= dc_->pmax(); ++p)
            for (std::size_t q = 0; q <= dc_->qmax(); ++q) {
                std::size_t n = p + q;
                if (p + r > dc_->pmax() || q + 1 < r || q + 1 > dc_->qmax() + r ||
                    n + 1 > nmax_)
                    continue;
                const Subquotient& src = sq.at({p, q});
                const Subquotient& dst = sq.at({p + r, q - r + 1});
                Matrix m(dst.dim(), src.dim(), field_);
                for (std::size_t c = 0; c < src.dim(); ++c)
                    m.set_col(c, dst.coords(tot_d_[n].apply(src.representatives().col(c))));
                pg.d[{p, q}] = std::move(m);
            }
        return pg;
    }

    /// dim E_{r+1}^{p,q} recomputed as cohomology of (E_r, d_r); used to
    /// cross-check page() against itself.
    static std::size_t page_turn_dim(const SpectralPage& er, std::size_t p, std::size_t q) {
        std::size_t z = er.dim(p, q);
        auto out = er.d.find({p, q});
        if (out != er.d.end()) z -= rank(out->second);
        std::size_t b = 0;
        if (p >= er.r && q + er.r >= 1) {
            auto in = er.d.find({p - er.r, q + er.r - 1});
            if (in != er.d.end()) b = rank(in->second);
        }
        return z - b;
    }

    /// Inclusion matrix of F^p T^n (coordinates with filtration index >= p).
    Matrix filtration(std::size_t p, std::size_t n) const {
        if (n > nmax_) return Matrix(0, 0, field_);
        std::vector<Vector> cols;
        for (auto [pp, off] : tot_off_[n]) {
            if (pp < p) continue;
            for (std::size_t j = 0; j < dc_->dim(pp, n - pp); ++j) {
                Vector e(tot_dims_[n], Scalar::zero(field_));
                e[off + j] = Scalar::one(field_);
                cols.push_back(std::move(e));
            }
        }
        return from_columns(tot_dims_[n], field_, cols);
    }

private:
    void place_block(Matrix& d, const Matrix& blk, std::size_t n1, std::size_t p1,
                     std::size_t col0) const {
        if (blk.rows() == 0) return;
        std::size_t row0 = tot_off_[n1].at(p1);
        for (std::size_t a = 0; a < blk.rows(); ++a)
            for (std::size_t b = 0; b < blk.cols(); ++b)
                if (!blk.at(a, b).is_zero()) d.at(row0 + a, col0 + b) = blk.at(a, b);
    }

    /// Z_r^{p,q} as a column space in T^{p+q}. Only p and n = p+q matter;
    /// F^p for negative p is the whole space. r < 0 means Z_{-1} := Z_0.
    Matrix cycle_space(std::ptrdiff_t r, std::ptrdiff_t p, std::ptrdiff_t q) const {
        if (r < 0) r = 0;
        std::ptrdiff_t n = p + q;
        if (n < 0 || n > static_cast<std::ptrdiff_t>(nmax_))
            return Matrix(0, 0, field_);
        std::size_t pfrom = p < 0 ? 0 : static_cast<std::size_t>(p);
        std::size_t pto = p + r < 0 ? 0 : static_cast<std::size_t>(p + r);
        Matrix F = filtration(pfrom, n);
        if (n == static_cast<std::ptrdiff_t>(nmax_)) return F;  // d = 0 out of the top
        Matrix W = filtration(pto, n + 1);
        Matrix pre = preimage(tot_d_[n] * F, W);  // coords in F's columns
        Matrix Z(tot_dims_[n], pre.cols(), field_);
        for (std::size_t c = 0; c < pre.cols(); ++c) Z.set_col(c, F.apply(pre.col(c)));
        return Z;
    }

    /// d Z_{r-1}^{p-r+1, q+r-2} inside T^{p+q}.
    Matrix boundary_space(std::size_t r, std::size_t p, std::size_t q) const {
        std::size_t n = p + q;
        if (n == 0) return Matrix(tot_dims_[0], 0, field_);
        Matrix Z = cycle_space(static_cast<std::ptrdiff_t>(r) - 1,
                               static_cast<std::ptrdiff_t>(p) - static_cast<std::ptrdiff_t>(r) + 1,
                               static_cast<std::ptrdiff_t>(q) + static_cast<std::ptrdiff_t>(r) - 2);
        Matrix B(tot_dims_[n], Z.cols(), field_);
        for (std::size_t c = 0; c < Z.cols(); ++c) B.set_col(c, tot_d_[n - 1].apply(Z.col(c)));
        return B;
    }

    const DoubleComplex* dc_;
    Field field_;
    std::size_t nmax_ = 0;
    std::vector<std::size_t> tot_dims_;
    std::vector<std::map<std::size_t, std::size_t>> tot_off_;
    std::vector<Matrix> tot_d_;
};

struct ConvergenceReport {
    std::size_t max_n = 0;          // degrees checked: n <= truncation - 2
    bool e2_matches_sheaf = true;   // E_2^{p,q} = H^p(X, H^q(C))
    bool einf_sums_match = true;    // sum_p E_inf^{p,n-p} = dim H^n(Tot)
    bool abutment_matches = true;   // dim H^n(Tot) = dim H^n(C_B(X))
    bool pages_consistent = true;   // E_{r+1} = H(E_r, d_r), both computations
    std::vector<std::string> detail;
    bool pass() const {
        return e2_matches_sheaf && einf_sums_match && abutment_matches && pages_consistent;
    }
};

/// Checks the local-to-global comparison in the degrees the truncation
/// leaves intact (n <= truncation - 2): the E_2 page against sheaf
/// cohomology of the cohomology sheaves, page turning, and the abutment
/// against the cohomology of the global complex.
inline ConvergenceReport verify_local_to_global(const ColimitComplex& cb) {
    DoubleComplex dc(cb);
    SpectralSequence ss(dc);
    ConvergenceReport rep;
    if (cb.truncation() < 2) {
        rep.detail.push_back("truncation below 2: nothing to check");
        return rep;
    }
    rep.max_n = cb.truncation() - 2;
    const FiniteSpace& sp = cb.space();

    SpectralPage e2 = ss.page(2);
    for (std::size_t q = 0; q + 2 <= cb.truncation(); ++q) {
        auto h = sheaf_cohomology(cohomology_sheaf(cb, q), sp.full());
        for (std::size_t p = 0; p <= dc.pmax(); ++p) {
            std::size_t want = p < h.size() ? h[p] : 0;
            if (p + q <= rep.max_n && e2.dim(p, q) != want) {
                rep.e2_matches_sheaf = false;
                rep.detail.push_back("E_2^{" + std::to_string(p) + "," + std::to_string(q) +
                                     "} = " + std::to_string(e2.dim(p, q)) + " but H^p(X,H^q) = " +
                                     std::to_string(want));
            }
        }
    }

    std::size_t rinf = dc.pmax() + dc.qmax() + 2;
    SpectralPage prev = e2;
    for (std::size_t r = 2; r < rinf; ++r) {
        SpectralPage next = ss.page(r + 1);
        for (std::size_t p = 0; p <= dc.pmax(); ++p)
            for (std::size_t q = 0; q <= dc.qmax(); ++q)
                if (next.dim(p, q) != SpectralSequence::page_turn_dim(prev, p, q)) {
                    rep.pages_consistent = false;
                    rep.detail.push_back("page " + std::to_string(r + 1) + " at (" +
                                         std::to_string(p) + "," + std::to_string(q) +
                                         ") disagrees with H(E_" + std::to_string(r) + ", d_" +
                                         std::to_string(r) + ")");
                }
        prev = std::move(next);
    }
    SpectralPage einf = prev;

    auto htot = ss.total_cohomology();
    const HochschildComplex& global = cb.complex_at(sp.full());
    for (std::size_t n = 0; n <= rep.max_n; ++n) {
        std::size_t sum = 0;
        for (std::size_t p = 0; p <= std::min(n, dc.pmax()); ++p) sum += einf.dim(p, n - p);
        std::size_t ht = n < htot.size() ? htot[n] : 0;
        if (sum != ht) {
            rep.einf_sums_match = false;
            rep.detail.push_back("sum of E_inf on n=" + std::to_string(n) + " is " +
                                 std::to_string(sum) + " but dim H^n(Tot) = " + std::to_string(ht));
        }
        std::size_t hg = global.cohomology(n).dim;
        if (ht != hg) {
            rep.abutment_matches = false;
            rep.detail.push_back("dim H^" + std::to_string(n) + "(Tot) = " + std::to_string(ht) +
                                 " but dim H^n(C_B(X)) = " + std::to_string(hg));
        }
    }
    return rep;
}

}  // namespace hhsheaf
