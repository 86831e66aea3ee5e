#include <doctest.h>

#include "helpers.hpp"

#include <hhsheaf/presheaf.hpp>
#include <hhsheaf/spectral.hpp>

using namespace hhsheaf;
using testutil::load_model;

namespace {

struct Setup {
    Model model;
    BasisFamily fam;
    ColimitComplex cb;

    explicit Setup(const char* name, std::size_t n = 3)
        : model(load_model(name)),
          fam(generate_good_family(model.bases[0])),
          cb(*model.structure, fam, n) {}
};

std::size_t row_sum(const SpectralPage& pg, std::size_t n, std::size_t pmax,
                    std::size_t qmax) {
    std::size_t s = 0;
    for (std::size_t p = 0; p <= std::min(n, pmax); ++p)
        if (n - p <= qmax) s += pg.dim(p, n - p);
    return s;
}

}  // namespace

TEST_CASE("double complex squares to zero in both directions") {
    for (const char* name : {"pseudocircle_redundant", "point_dual", "chain2"}) {
        CAPTURE(name);
        Setup s(name);
        DoubleComplex dc(s.cb);
        // anticommutation is asserted in the constructor; spot-check shapes
        for (std::size_t p = 0; p + 1 <= dc.pmax(); ++p)
            for (std::size_t q = 0; q <= dc.qmax(); ++q) {
                CHECK(dc.dh(p, q).rows() == dc.dim(p + 1, q));
                CHECK(dc.dh(p, q).cols() == dc.dim(p, q));
            }
        // E_0 is the double complex itself
        SpectralSequence ss(dc);
        SpectralPage e0 = ss.page(0);
        for (std::size_t p = 0; p <= dc.pmax(); ++p)
            for (std::size_t q = 0; q <= dc.qmax(); ++q)
                CHECK(e0.dim(p, q) == dc.dim(p, q));
    }
}

TEST_CASE("pseudocircle: E_2 concentrates on the q = 0 row") {
    Setup s("pseudocircle_redundant");
    DoubleComplex dc(s.cb);
    SpectralSequence ss(dc);
    SpectralPage e2 = ss.page(2);
    // H^p(X, H^0) = H^p(circle, constant sheaf) = k, k in p = 0, 1
    CHECK(e2.dim(0, 0) == 1);
    CHECK(e2.dim(1, 0) == 1);
    CHECK(e2.dim(2, 0) == 0);
    CHECK(e2.dim(3, 0) == 0);
    // higher rows vanish in the degrees the truncation leaves intact
    for (std::size_t q = 1; q + 2 <= s.cb.truncation(); ++q)
        for (std::size_t p = 0; p + q + 2 <= s.cb.truncation() + 2 && p <= dc.pmax(); ++p)
            if (p + q + 2 <= s.cb.truncation())
                CHECK(e2.dim(p, q) == 0);
    auto htot = ss.total_cohomology();
    CHECK(htot[0] == 1);
    CHECK(htot[1] == 1);
    // the abutment agrees with the colimit complex over the whole space
    auto hx = s.cb.complex_at(s.model.space->full()).cohomology(0).dim;
    CHECK(hx == 1);
}

TEST_CASE("point models: the sequence degenerates at E_1") {
    Setup d("point_dual");
    DoubleComplex dcd(d.cb);
    SpectralSequence sd(dcd);
    auto htot = sd.total_cohomology();
    REQUIRE(htot.size() >= 3);
    CHECK(htot[0] == 2);
    CHECK(htot[1] == 1);
    CHECK(htot[2] == 1);
    SpectralPage e1 = sd.page(1);
    SpectralPage einf = sd.page(sd.nmax() + 2);
    for (std::size_t q = 0; q <= d.cb.truncation(); ++q)
        CHECK(e1.dim(0, q) == einf.dim(0, q));

    Setup c("chain2");
    DoubleComplex dcc(c.cb);
    SpectralSequence sc(dcc);
    auto hc = sc.total_cohomology();
    CHECK(hc[0] == 1);
    CHECK(hc[1] == 0);
    CHECK(hc[2] == 0);
}

TEST_CASE("page sizes only shrink and Euler characteristics are constant") {
    for (const char* name : {"pseudocircle_redundant", "point_dual", "chain2"}) {
        CAPTURE(name);
        Setup s(name);
        DoubleComplex dc(s.cb);
        SpectralSequence ss(dc);
        std::size_t rinf = ss.nmax() + 2;
        std::vector<SpectralPage> pages;
        for (std::size_t r = 0; r <= rinf; ++r) pages.push_back(ss.page(r));
        long chi0 = 0;
        for (std::size_t n = 0; n <= ss.nmax(); ++n)
            chi0 += (n % 2 ? -1 : 1) *
                    static_cast<long>(row_sum(pages[0], n, dc.pmax(), dc.qmax()));
        for (std::size_t r = 0; r < rinf; ++r) {
            long chi = 0;
            for (std::size_t n = 0; n <= ss.nmax(); ++n) {
                std::size_t a = row_sum(pages[r + 1], n, dc.pmax(), dc.qmax());
                std::size_t b = row_sum(pages[r], n, dc.pmax(), dc.qmax());
                CHECK(a <= b);
                chi += (n % 2 ? -1 : 1) * static_cast<long>(a);
            }
            CHECK(chi == chi0);
            // turning the page by hand reproduces the next page
            for (std::size_t p = 0; p <= dc.pmax(); ++p)
                for (std::size_t q = 0; q <= dc.qmax(); ++q)
                    CHECK(pages[r + 1].dim(p, q) ==
                          SpectralSequence::page_turn_dim(pages[r], p, q));
        }
        // E_infinity recovers the total cohomology degreewise
        auto htot = ss.total_cohomology();
        for (std::size_t n = 0; n <= ss.nmax(); ++n)
            CHECK(row_sum(pages[rinf], n, dc.pmax(), dc.qmax()) == htot[n]);
    }
}

TEST_CASE("local-to-global convergence report") {
    for (const char* name : {"pseudocircle_redundant", "point_dual", "chain2"}) {
        CAPTURE(name);
        Setup s(name);
        ConvergenceReport rep = verify_local_to_global(s.cb);
        for (const auto& line : rep.detail) CAPTURE(line);
        CHECK(rep.e2_matches_sheaf);
        CHECK(rep.einf_sums_match);
        CHECK(rep.abutment_matches);
        CHECK(rep.pages_consistent);
        CHECK(rep.pass());
    }
}
