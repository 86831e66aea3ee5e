#include <doctest.h>

#include "helpers.hpp"

#include <hhsheaf/colimit.hpp>
#include <hhsheaf/model.hpp>

using namespace hhsheaf;
using testutil::load_model;
using testutil::source_path;

TEST_CASE("all shipped models load and validate") {
    for (const char* name : {"point_field", "point_dual", "chain2", "pseudocircle",
                             "pseudocircle_redundant", "uppertriangular"}) {
        CAPTURE(name);
        Model m = load_model(name);
        CHECK(m.space->num_points() > 0);
        CHECK(m.structure->violations().empty());
        REQUIRE(!m.bases.empty());
        for (const Basis& b : m.bases) CHECK(b.basis_property_violations().empty());
    }
    Model m = load_model("pseudocircle_redundant");
    CHECK(m.name == "pseudocircle_redundant");
    CHECK(m.space->num_points() == 4);
    CHECK(m.truncation == 4);
    CHECK(m.field == Field::rationals());
    CHECK(m.bases[0].members.size() == 5);
}

TEST_CASE("broken fixtures are rejected with the validation exit code") {
    for (const char* name : {"bad_space", "bad_algebra"}) {
        CAPTURE(name);
        try {
            parse_model_file(source_path("tests/data/" + std::string(name) + ".json"));
            FAIL("expected ModelError");
        } catch (const ModelError& e) {
            CHECK(e.exit_code == 2);
            CHECK(std::string(e.what()).size() > 0);
        }
    }
    try {
        parse_model_file(source_path("tests/data/does_not_exist.json"));
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        CHECK(e.exit_code == 4);
    }
}

TEST_CASE("field parsing") {
    CHECK(parse_field("Q") == Field::rationals());
    CHECK(parse_field("fp:5") == Field::prime(5));
    CHECK_THROWS_AS(parse_field("fp:abc"), ModelError);
    CHECK_THROWS_AS(parse_field("R"), ModelError);
    Model m5 = load_model("pseudocircle_redundant", "fp:5");
    CHECK(m5.field == Field::prime(5));
}

TEST_CASE("cover specifications") {
    Model m = load_model("pseudocircle_redundant");
    const FiniteSpace& sp = *m.space;
    CHECK(parse_cover("X", sp) == std::vector<PointSet>{sp.full()});
    CHECK(parse_cover("Uc,Ud", sp) == std::vector<PointSet>{7, 11});
    CHECK(parse_cover("a+b+c,a+b+d", sp) == std::vector<PointSet>{7, 11});
    CHECK(parse_cover("Uc,a+b+d,X", sp) == std::vector<PointSet>{7, 11, 15});
    CHECK_THROWS_AS(parse_cover("Uz", sp), ModelError);
    CHECK_THROWS_AS(parse_cover("a+c", sp), ModelError);  // {a,c} is not open
    CHECK_THROWS_AS(parse_cover("", sp), ModelError);
}

TEST_CASE("malformed model documents") {
    auto reject = [](const char* text) {
        try {
            parse_model_json(nlohmann::json::parse(text));
            FAIL_CHECK("expected ModelError for: " << text);
        } catch (const ModelError&) {
        }
    };
    reject(R"({"space": {"points": []}})");
    reject(R"({"space": {"points": ["p"], "min_open": [["p"]]}, "truncation": 0})");
    reject(R"({"space": {"points": ["p"], "min_open": [["q"]]},
               "structure": {"constant": "k"},
               "algebras": {"k": {"labels": ["1"], "table": [[[1]]], "unit": [1]}},
               "basis": [[["p"]]]})");
    // basis missing the minimal open of p
    reject(R"({"space": {"points": ["p","q"], "min_open": [["p","q"],["q"]]},
               "structure": {"constant": "k"},
               "algebras": {"k": {"labels": ["1"], "table": [[[1]]], "unit": [1]}},
               "basis": [[["q"]]]})");
}

TEST_CASE("dimension tables match between Q and F_5 on the shipped models") {
    // characteristic 5 is generic for these integral structure constants, so
    // every rank we compute must agree with the rational computation
    for (const char* name : {"point_dual", "chain2", "pseudocircle_redundant"}) {
        CAPTURE(name);
        Model mq = load_model(name);
        Model m5 = load_model(name, "fp:5");
        std::size_t n = 3;
        ColimitComplex cq(*mq.structure, generate_good_family(mq.bases[0]), n);
        ColimitComplex c5(*m5.structure, generate_good_family(m5.bases[0]), n);
        for (std::size_t p = 0; p + 1 <= n; ++p) {
            CHECK(cq.complex_at(mq.space->full()).cohomology(p).dim ==
                  c5.complex_at(m5.space->full()).cohomology(p).dim);
        }
    }
}
