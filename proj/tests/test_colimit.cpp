#include <doctest.h>

#include "helpers.hpp"

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

/// The witness cochain on the redundant basis: 1 on the length-one chain
/// (X), 0 elsewhere (degree 0 version) or on (X <= X) (degree 1 version).
ColimitSection witness_section(const Setup& s, std::size_t degree) {
    const Basis& b = s.model.bases[0];
    HochschildComplex cx(b, *s.model.structure, s.cb.truncation());
    Cochain phi = Cochain::zero(cx, degree);
    OpenChain c(degree + 1, s.model.space->full());
    phi.coords[cx.chain_offset(degree, cx.chain_index(degree, c))] = Scalar::one(cx.field());
    return ColimitSection(s.cb, s.model.space->full(), b, phi.coords, degree);
}

}  // namespace

TEST_CASE("canonical representatives live on the terminal basis") {
    Setup s("pseudocircle_redundant");
    CHECK(s.cb.terminal(15).members == std::vector<PointSet>{1, 2, 7, 11});
    CHECK(s.cb.dim(15, 0) == 4);
    CHECK(s.cb.dim(15, 1) == 8);

    // the witness supported on the redundant member maps to zero in the
    // colimit: it is a nonzero cochain that every refinement kills
    for (std::size_t degree : {std::size_t(0), std::size_t(1)}) {
        ColimitSection w = witness_section(s, degree);
        bool nonzero_rep = false;
        for (const Scalar& c : w.rep_coords())
            if (!c.is_zero()) nonzero_rep = true;
        CHECK(nonzero_rep);
        CHECK(w == ColimitSection::zero(s.cb, 15, degree));
    }
}

TEST_CASE("restriction of sections is the cochain restriction of representatives") {
    Setup s("pseudocircle_redundant");
    ColimitSection w = witness_section(s, 0);
    ColimitSection rc = restrict_section(w, 7);
    // the redundant member X does not survive restriction to U_c
    CHECK(rc.rep_basis().members == std::vector<PointSet>{1, 2, 7});
    CHECK(rc == ColimitSection::zero(s.cb, 7, 0));
    CHECK_THROWS_AS(restrict_section(rc, 11), ColimitError);  // not an inclusion
}

TEST_CASE("gluing compatible sections over a cover") {
    Setup s("pseudocircle_redundant");
    Field f = s.model.field;
    // a generic canonical section over X, restricted to the two legs
    Vector coords(s.cb.dim(15, 1), Scalar::zero(f));
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = Scalar(f, std::int64_t(i) + 1);
    ColimitSection global = ColimitSection::canonical(s.cb, 15, 1, coords);
    ColimitSection sc = restrict_section(global, 7);
    ColimitSection sd = restrict_section(global, 11);

    SUBCASE("round trip") {
        ColimitSection glued = glue_sections({sc, sd});
        CHECK(glued.domain() == 15);
        CHECK(glued == global);
    }
    SUBCASE("gluing is order-independent") {
        CHECK(glue_sections({sc, sd}) == glue_sections({sd, sc}));
    }
    SUBCASE("three-piece covers work and agree") {
        ColimitSection sab = restrict_section(global, 3);
        CHECK(glue_sections({sab, sc, sd}) == global);
        CHECK(glue_sections({sc, sab, sd}) == global);
    }
    SUBCASE("incompatible sections are rejected") {
        Vector other(s.cb.dim(11, 1), Scalar::zero(f));
        other[0] = Scalar(f, 77);
        ColimitSection bad = ColimitSection::canonical(s.cb, 11, 1, other);
        bool compatible = restrict_section(sc, 3) == restrict_section(bad, 3);
        if (!compatible) CHECK_THROWS_AS(glue_sections({sc, bad}), ColimitError);
    }
    SUBCASE("representative bases need not match for equality") {
        // glue of different representatives equals the canonical section
        ColimitSection wit = witness_section(s, 1);
        // zero section represented on the redundant basis == canonical zero
        ColimitSection z = ColimitSection::zero(s.cb, 15, 1);
        CHECK(wit == z);
        CHECK(!(global == z));
    }
}

TEST_CASE("flabby lift extends by zero and restricts back") {
    Setup s("pseudocircle_redundant");
    Field f = s.model.field;
    for (PointSet u : {PointSet(7), PointSet(11), PointSet(3)}) {
        for (std::size_t p : {std::size_t(0), std::size_t(1), std::size_t(2)}) {
            Vector coords(s.cb.dim(u, p), Scalar::zero(f));
            for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = Scalar(f, std::int64_t(2 * i) + 1);
            ColimitSection sec = ColimitSection::canonical(s.cb, u, p, coords);
            ColimitSection lifted = flabby_lift(sec, 15);
            CHECK(lifted.domain() == 15);
            CHECK(restrict_section(lifted, u) == sec);
        }
    }
    // surjectivity of every restriction from X, exact rank computation
    for (PointSet u : s.model.space->all_opens()) {
        if (!u) continue;
        for (std::size_t p = 0; p <= 3; ++p) CHECK(flabby_at(s.cb, u, p));
    }
}

TEST_CASE("sheaf condition: single basis fails, colimit passes") {
    Setup s("pseudocircle_redundant");
    auto single = single_basis_presheaf(s.model.bases[0], *s.model.structure, 3);
    auto colim = colimit_presheaf(s.cb);
    std::vector<PointSet> cover{7, 11};

    SheafReport bad = sheaf_check(single, 15, cover, 0);
    CHECK(!bad.separated);
    REQUIRE(bad.separated_witness.has_value());
    // the witness is (up to scale) the cochain supported on the redundant
    // member X alone: nonzero there, zero on the four honest members
    {
        HochschildComplex cx(s.model.bases[0], *s.model.structure, 3);
        const Vector& w = *bad.separated_witness;
        std::size_t x_index = cx.chain_index(0, {15});
        CHECK(!w[cx.chain_offset(0, x_index)].is_zero());
        for (std::size_t i = 0; i < w.size(); ++i)
            if (i != cx.chain_offset(0, x_index)) CHECK(w[i].is_zero());
    }

    for (std::size_t degree = 0; degree <= 3; ++degree) {
        CAPTURE(degree);
        SheafReport good = sheaf_check(colim, 15, cover, degree);
        CHECK(good.separated);
        CHECK(good.glues);
    }
    // the single-point cover is trivially a sheaf condition
    CHECK(sheaf_check(single, 15, {15}, 0).pass());
    CHECK_THROWS_AS(sheaf_check(colim, 15, {7}, 0), ColimitError);  // does not cover
}

TEST_CASE("sheaf condition on the non-redundant pseudocircle basis") {
    // without the redundant member, even the single-basis presheaf is a sheaf
    Setup s("pseudocircle");
    auto single = single_basis_presheaf(s.model.bases[0], *s.model.structure, 3);
    for (std::size_t degree = 0; degree <= 1; ++degree)
        CHECK(sheaf_check(single, 15, {7, 11}, degree).pass());
}

TEST_CASE("colimit restriction is functorial and commutes with d") {
    Setup s("pseudocircle_redundant");
    for (std::size_t p = 0; p <= 2; ++p) {
        Matrix direct = s.cb.restriction(15, 3, p);
        Matrix via = s.cb.restriction(7, 3, p) * s.cb.restriction(15, 7, p);
        CHECK(direct == via);
        Matrix lhs = s.cb.complex_at(7).differential(p) * s.cb.restriction(15, 7, p);
        Matrix rhs = s.cb.restriction(15, 7, p + 1) * s.cb.complex_at(15).differential(p);
        CHECK(lhs == rhs);
    }
}
