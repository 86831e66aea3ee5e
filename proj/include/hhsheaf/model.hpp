#pragma once

#include "colimit.hpp"

#include <json.hpp>

#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace hhsheaf {

/// Error while loading a model file. `exit_code` follows the tool contract:
/// 2 = validation failure (syntax, unknown ids, validator findings),
/// 4 = usage error (unreadable file).
struct ModelError : std::runtime_error {
    int exit_code;
    explicit ModelError(const std::string& msg, int code = 2)
        : std::runtime_error(msg), exit_code(code) {}
};

/// A fully validated model: space, structure presheaf, and one or more
/// bases of the whole space. The space and presheaf are heap-held so the
/// internal pointers stay valid when the model moves.
struct Model {
    std::string name;
    Field field = Field::rationals();
    std::size_t truncation = 4;
    std::shared_ptr<FiniteSpace> space;
    std::shared_ptr<StructurePresheaf> structure;
    std::vector<Basis> bases;
};

namespace detail {

inline PointSet parse_open(const nlohmann::json& j, const FiniteSpace& sp) {
    if (!j.is_array()) throw ModelError("open sets must be arrays of point names");
    PointSet s = 0;
    for (const auto& e : j) {
        if (!e.is_string()) throw ModelError("point names must be strings");
        auto idx = sp.point_index(e.get<std::string>());
        if (!idx) throw ModelError("unknown point name '" + e.get<std::string>() + "'");
        s |= PointSet(1) << *idx;
    }
    return s;
}

inline Scalar parse_scalar(const nlohmann::json& j, const Field& f) {
    try {
        if (j.is_number_integer()) return Scalar(f, j.get<std::int64_t>());
        if (j.is_string()) return Scalar(f, parse_rational(j.get<std::string>()));
    } catch (const std::exception& e) {
        throw ModelError(std::string("bad scalar: ") + e.what());
    }
    throw ModelError("scalars must be integers or \"a/b\" strings");
}

inline Matrix parse_matrix(const nlohmann::json& j, const Field& f) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ModelError("matrices must be arrays of rows");
    Matrix m(j.size(), j[0].size(), f);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != m.cols())
            throw ModelError("matrix rows have inconsistent lengths");
        for (std::size_t k = 0; k < m.cols(); ++k) m.at(i, k) = parse_scalar(j[i][k], f);
    }
    return m;
}

inline Algebra parse_algebra(const std::string& name, const nlohmann::json& j, const Field& f) {
    Algebra a;
    a.name = name;
    a.field = f;
    if (!j.contains("dim") || !j["dim"].is_number_unsigned())
        throw ModelError("algebra '" + name + "': missing or bad 'dim'");
    a.dim = j["dim"].get<std::size_t>();
    if (j.contains("labels")) {
        for (const auto& l : j["labels"]) a.labels.push_back(l.get<std::string>());
        if (a.labels.size() != a.dim)
            throw ModelError("algebra '" + name + "': wrong number of labels");
    } else {
        for (std::size_t i = 0; i < a.dim; ++i) a.labels.push_back("e" + std::to_string(i));
    }
    // table[i][j] = coordinates of e_i * e_j
    if (!j.contains("table") || !j["table"].is_array() || j["table"].size() != a.dim)
        throw ModelError("algebra '" + name + "': missing or bad 'table'");
    a.c.assign(a.dim * a.dim * a.dim, Scalar::zero(f));
    for (std::size_t i = 0; i < a.dim; ++i) {
        if (j["table"][i].size() != a.dim)
            throw ModelError("algebra '" + name + "': table row has wrong length");
        for (std::size_t jj = 0; jj < a.dim; ++jj) {
            const auto& cell = j["table"][i][jj];
            if (!cell.is_array() || cell.size() != a.dim)
                throw ModelError("algebra '" + name + "': table cell has wrong length");
            for (std::size_t k = 0; k < a.dim; ++k) a.sc(i, jj, k) = parse_scalar(cell[k], f);
        }
    }
    if (!j.contains("unit") || !j["unit"].is_array() || j["unit"].size() != a.dim)
        throw ModelError("algebra '" + name + "': missing or bad 'unit'");
    for (const auto& u : j["unit"]) a.unit.push_back(parse_scalar(u, f));
    return a;
}

}  // namespace detail

inline Field parse_field(const std::string& s) {
    if (s == "Q") return Field::rationals();
    if (s.rfind("fp:", 0) == 0) {
        try {
            return Field::prime(std::stoll(s.substr(3)));
        } catch (const std::exception& e) {
            throw ModelError(std::string("bad field '") + s + "': " + e.what());
        }
    }
    throw ModelError("field must be \"Q\" or \"fp:<prime>\"");
}

/// Parses and fully validates a model document. `field_override`, when
/// nonempty, replaces the file's ground field (e.g. "fp:5" reruns).
inline Model parse_model_json(const nlohmann::json& j, const std::string& field_override = "") {
    Model m;
    if (j.contains("name")) m.name = j["name"].get<std::string>();
    m.field = parse_field(field_override.empty()
                              ? (j.contains("field") ? j["field"].get<std::string>() : "Q")
                              : field_override);
    if (j.contains("truncation")) {
        if (!j["truncation"].is_number_unsigned() || j["truncation"].get<std::size_t>() == 0)
            throw ModelError("truncation must be a positive integer");
        m.truncation = j["truncation"].get<std::size_t>();
    }

    if (!j.contains("space") || !j["space"].contains("points") ||
        !j["space"].contains("min_open"))
        throw ModelError("missing space.points / space.min_open");
    std::vector<std::string> names;
    for (const auto& p : j["space"]["points"]) names.push_back(p.get<std::string>());
    // the min_open table is parsed by name against the declared point list
    std::vector<PointSet> min_open;
    {
        std::map<std::string, std::size_t> idx;
        for (std::size_t i = 0; i < names.size(); ++i) idx[names[i]] = i;
        if (idx.size() != names.size()) throw ModelError("duplicate point names");
        for (const auto& row : j["space"]["min_open"]) {
            PointSet s = 0;
            for (const auto& e : row) {
                auto it = idx.find(e.get<std::string>());
                if (it == idx.end())
                    throw ModelError("unknown point name '" + e.get<std::string>() +
                                     "' in min_open");
                s |= PointSet(1) << it->second;
            }
            min_open.push_back(s);
        }
    }
    auto errs = FiniteSpace::violations(names, min_open);
    if (!errs.empty()) throw ModelError("space axiom violated: " + errs.front());
    m.space = std::make_shared<FiniteSpace>(FiniteSpace::validated(names, min_open));

    std::map<std::string, Algebra> algebras;
    if (j.contains("algebras"))
        for (const auto& [name, body] : j["algebras"].items()) {
            Algebra a = detail::parse_algebra(name, body, m.field);
            auto rep = validate_algebra(a);
            if (!rep) throw ModelError("algebra '" + name + "': " + rep.violations.front());
            algebras[name] = std::move(a);
        }

    m.structure = std::make_shared<StructurePresheaf>(*m.space, m.field);
    if (!j.contains("structure")) throw ModelError("missing structure section");
    const auto& st = j["structure"];
    auto algebra_named = [&](const std::string& n) -> const Algebra& {
        auto it = algebras.find(n);
        if (it == algebras.end()) throw ModelError("unknown algebra name '" + n + "'");
        return it->second;
    };
    if (st.contains("constant")) {
        const Algebra& a = algebra_named(st["constant"].get<std::string>());
        for (PointSet u : m.space->all_opens())
            if (u) m.structure->assign(u, a);
    }
    if (st.contains("assign"))
        for (const auto& entry : st["assign"])
            m.structure->assign(detail::parse_open(entry["open"], *m.space),
                                algebra_named(entry["algebra"].get<std::string>()));
    if (st.contains("restrictions"))
        for (const auto& entry : st["restrictions"])
            m.structure->set_restriction(detail::parse_open(entry["from"], *m.space),
                                         detail::parse_open(entry["to"], *m.space),
                                         detail::parse_matrix(entry["matrix"], m.field));

    auto parse_basis = [&](const nlohmann::json& arr) {
        std::vector<PointSet> mem;
        for (const auto& o : arr) mem.push_back(detail::parse_open(o, *m.space));
        Basis b;
        try {
            b = Basis(*m.space, m.space->full(), std::move(mem));
        } catch (const SpaceError& e) {
            throw ModelError(std::string("bad basis: ") + e.what());
        }
        auto missing = b.basis_property_violations();
        if (!missing.empty())
            throw ModelError("basis misses the minimal open of point '" +
                             m.space->point_name(missing.front()) + "'");
        return b;
    };
    if (j.contains("basis")) m.bases.push_back(parse_basis(j["basis"]));
    if (j.contains("bases"))
        for (const auto& b : j["bases"]) m.bases.push_back(parse_basis(b));
    if (m.bases.empty()) throw ModelError("no basis given");

    // every open a basis member can hit must carry an algebra
    for (const Basis& b : m.bases)
        for (PointSet mem : b.members)
            if (!m.structure->has_algebra(mem))
                throw ModelError("no algebra assigned to basic open " + m.space->set_name(mem));
    auto sv = m.structure->violations();
    if (!sv.empty()) throw ModelError("structure presheaf invalid: " + sv.front());
    return m;
}

inline Model parse_model_file(const std::string& path, const std::string& field_override = "") {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file '" + path + "'", 4);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ModelError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    try {
        return parse_model_json(j, field_override);
    } catch (const ModelError&) {
        throw;
    } catch (const std::exception& e) {
        throw ModelError("model file '" + path + "': " + e.what());
    }
}

/// Parses a cover specification such as "X", "Uc,Ud" or "a+b+c,Ud":
/// X is the whole space, U<point> the minimal open of that point, and
/// '+'-joined point names an explicit open set.
inline std::vector<PointSet> parse_cover(const std::string& spec, const FiniteSpace& sp) {
    std::vector<PointSet> cover;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        pos = comma == std::string::npos ? spec.size() + 1 : comma + 1;
        if (tok.empty()) continue;
        if (tok == "X") {
            cover.push_back(sp.full());
            continue;
        }
        if (tok.size() > 1 && tok[0] == 'U' && sp.point_index(tok.substr(1))) {
            cover.push_back(sp.min_open(*sp.point_index(tok.substr(1))));
            continue;
        }
        PointSet s = 0;
        std::size_t p2 = 0;
        while (p2 <= tok.size()) {
            std::size_t plus = tok.find('+', p2);
            std::string nm = tok.substr(p2, plus == std::string::npos ? plus : plus - p2);
            p2 = plus == std::string::npos ? tok.size() + 1 : plus + 1;
            if (nm.empty()) continue;
            auto idx = sp.point_index(nm);
            if (!idx) throw ModelError("unknown point '" + nm + "' in cover", 4);
            s |= PointSet(1) << *idx;
        }
        if (!sp.is_open(s)) throw ModelError("cover element " + sp.set_name(s) + " is not open", 4);
        cover.push_back(s);
    }
    if (cover.empty()) throw ModelError("empty cover", 4);
    return cover;
}

}  // namespace hhsheaf
