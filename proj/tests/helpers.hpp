#pragma once

#include <hhsheaf/model.hpp>

#include <memory>
#include <string>

namespace testutil {

using namespace hhsheaf;

#ifndef HHSHEAF_SOURCE_DIR
#define HHSHEAF_SOURCE_DIR "."
#endif

inline std::string source_path(const std::string& rel) {
    return std::string(HHSHEAF_SOURCE_DIR) + "/" + rel;
}

inline Model load_model(const std::string& name, const std::string& field = "") {
    return parse_model_file(source_path("models/" + name + ".json"), field);
}

/// The four-point circle-like space: a = {a}, b = {b}, c = {a,b,c},
/// d = {a,b,d}.
inline std::shared_ptr<FiniteSpace> pseudocircle_space() {
    return std::make_shared<FiniteSpace>(
        FiniteSpace::validated({"a", "b", "c", "d"}, {1, 2, 7, 11}));
}

inline Algebra ground_field_algebra(const Field& f) {
    Algebra k;
    k.name = "k";
    k.field = f;
    k.dim = 1;
    k.labels = {"1"};
    k.c = {Scalar::one(f)};
    k.unit = {Scalar::one(f)};
    return k;
}

inline std::shared_ptr<StructurePresheaf> constant_structure(
    const std::shared_ptr<FiniteSpace>& sp, const Algebra& a) {
    auto o = std::make_shared<StructurePresheaf>(*sp, a.field);
    for (PointSet u : sp->all_opens())
        if (u) o->assign(u, a);
    return o;
}

inline Algebra dual_numbers(const Field& f) {
    Algebra a;
    a.name = "dual";
    a.field = f;
    a.dim = 2;
    a.labels = {"1", "x"};
    Scalar z = Scalar::zero(f), e = Scalar::one(f);
    a.c = {e, z, z, e, z, e, z, z};  // 1*1=1, 1*x=x, x*1=x, x*x=0
    a.unit = {e, z};
    return a;
}

}  // namespace testutil
