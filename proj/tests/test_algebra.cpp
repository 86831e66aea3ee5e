#include <doctest.h>

#include "helpers.hpp"

using namespace hhsheaf;
using testutil::constant_structure;
using testutil::dual_numbers;
using testutil::ground_field_algebra;
using testutil::pseudocircle_space;

TEST_CASE("algebra validation") {
    Field q = Field::rationals();
    SUBCASE("the dual numbers are valid and commutative") {
        AlgebraReport rep = validate_algebra(dual_numbers(q));
        CHECK(rep.valid);
        CHECK(rep.commutative);
    }
    SUBCASE("upper triangular 2x2 matrices are valid and noncommutative") {
        Model m = testutil::load_model("uppertriangular");
        const Algebra& ut = m.structure->algebra(1);
        AlgebraReport rep = validate_algebra(ut);
        CHECK(rep.valid);
        CHECK(!rep.commutative);
        CHECK(ut.dim == 3);
        // e12 * e12 = 0, e11 * e12 = e12
        Vector e12 = ut.basis_vector(2);
        for (const Scalar& s : ut.mul(e12, e12)) CHECK(s.is_zero());
        CHECK(ut.mul(ut.basis_vector(0), e12) == e12);
    }
    SUBCASE("a broken unit is reported") {
        Algebra a = dual_numbers(q);
        a.unit = a.basis_vector(1);  // x is not a unit
        AlgebraReport rep = validate_algebra(a);
        CHECK(!rep.valid);
        CHECK(!rep.violations.empty());
    }
    SUBCASE("wrong-size data is reported") {
        Algebra a = dual_numbers(q);
        a.c.pop_back();
        CHECK(!validate_algebra(a).valid);
    }
}

TEST_CASE("algebra maps check unitality and multiplicativity") {
    Field q = Field::rationals();
    Algebra dual = dual_numbers(q);
    Algebra k = ground_field_algebra(q);
    // the quotient by (x): 1 -> 1, x -> 0
    Matrix proj(1, 2, q);
    proj.at(0, 0) = Scalar(q, 1);
    AlgebraMap good{&dual, &k, proj};
    CHECK(good.violations().empty());
    // sending x to 1 is not multiplicative (x^2 = 0 would map to 1)
    Matrix bad(1, 2, q);
    bad.at(0, 0) = Scalar(q, 1);
    bad.at(0, 1) = Scalar(q, 1);
    AlgebraMap broken{&dual, &k, bad};
    CHECK(!broken.violations().empty());
}

TEST_CASE("structure presheaf: identity defaults and functoriality") {
    auto sp = pseudocircle_space();
    Field q = Field::rationals();
    auto o = constant_structure(sp, ground_field_algebra(q));
    CHECK(o->violations().empty());
    CHECK(o->restriction(15, 7) == Matrix::identity(1, q));
    CHECK_THROWS_AS(o->restriction(7, 15), AlgebraError);  // not an inclusion
    CHECK_THROWS_AS(o->algebra(0), AlgebraError);          // nothing on the empty set

    SUBCASE("an explicit non-functorial restriction is caught") {
        auto bad = constant_structure(sp, ground_field_algebra(q));
        Matrix doubled(1, 1, q);
        doubled.at(0, 0) = Scalar(q, 2);
        bad->set_restriction(15, 1, doubled);  // conflicts with identity 15->7->1
        auto errs = bad->violations();
        CHECK(!errs.empty());
    }
}

TEST_CASE("structure presheaf with a non-identity restriction") {
    // two-point chain with dual numbers upstairs and k at the closed point,
    // restriction = quotient by (x)
    auto sp = std::make_shared<FiniteSpace>(FiniteSpace::validated({"p", "q"}, {3, 2}));
    Field f = Field::rationals();
    auto o = std::make_shared<StructurePresheaf>(*sp, f);
    o->assign(3, dual_numbers(f));
    o->assign(2, ground_field_algebra(f));
    Matrix proj(1, 2, f);
    proj.at(0, 0) = Scalar(f, 1);
    o->set_restriction(3, 2, proj);
    CHECK(o->violations().empty());
    CHECK(o->restriction_map(3, 2).apply(dual_numbers(f).unit) ==
          ground_field_algebra(f).unit);
}
