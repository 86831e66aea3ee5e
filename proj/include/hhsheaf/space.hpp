#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhsheaf {

/// Point sets as bit masks; spaces are capped at 20 points.
using PointSet = std::uint32_t;

struct SpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool subset(PointSet a, PointSet b) { return (a & ~b) == 0; }

/// A finite T0 space given by the minimal open neighborhood of each point.
/// Opens are exactly the unions of minimal opens.
class FiniteSpace {
public:
    static constexpr std::size_t kMaxPoints = 20;

    /// Checks the axioms on a raw table; returns violations (empty = valid).
    static std::vector<std::string> violations(const std::vector<std::string>& names,
                                               const std::vector<PointSet>& min_open) {
        std::vector<std::string> errs;
        std::size_t n = names.size();
        if (n > kMaxPoints) {
            errs.push_back("too many points (max 20)");
            return errs;
        }
        if (min_open.size() != n) {
            errs.push_back("min_open table size does not match point count");
            return errs;
        }
        for (std::size_t x = 0; x < n; ++x)
            if (!(min_open[x] & (PointSet(1) << x)))
                errs.push_back(names[x] + " is not in its own minimal open");
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                if ((min_open[x] & (PointSet(1) << y)) && !subset(min_open[y], min_open[x]))
                    errs.push_back("min_open(" + names[y] + ") is not contained in min_open(" +
                                   names[x] + ") although " + names[y] + " lies in it");
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y)
                if (min_open[x] == min_open[y])
                    errs.push_back("points " + names[x] + " and " + names[y] +
                                   " share a minimal open (space not T0)");
        return errs;
    }

    static FiniteSpace validated(std::vector<std::string> names, std::vector<PointSet> min_open) {
        auto errs = violations(names, min_open);
        if (!errs.empty()) throw SpaceError("invalid space: " + errs.front());
        return FiniteSpace(std::move(names), std::move(min_open));
    }

    std::size_t num_points() const { return names_.size(); }
    const std::string& point_name(std::size_t i) const { return names_[i]; }
    PointSet min_open(std::size_t point) const { return min_open_[point]; }
    PointSet full() const { return (PointSet(1) << names_.size()) - 1; }

    std::optional<std::size_t> point_index(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        return std::nullopt;
    }

    bool is_open(PointSet s) const {
        for (std::size_t x = 0; x < names_.size(); ++x)
            if ((s >> x) & 1)
                if (!subset(min_open_[x], s)) return false;
        return true;
    }

    /// All opens of the space, ascending as integers (so starting with the
    /// empty set). Cached.
    const std::vector<PointSet>& all_opens() const {
        if (opens_.empty()) {
            for (PointSet s = 0; s <= full(); ++s)
                if (is_open(s)) opens_.push_back(s);
        }
        return opens_;
    }

    std::vector<PointSet> opens_inside(PointSet u) const {
        std::vector<PointSet> out;
        for (PointSet s : all_opens())
            if (subset(s, u)) out.push_back(s);
        return out;
    }

    std::string set_name(PointSet s) const {
        std::string out = "{";
        bool first = true;
        for (std::size_t x = 0; x < names_.size(); ++x)
            if ((s >> x) & 1) {
                if (!first) out += ",";
                out += names_[x];
                first = false;
            }
        return out + "}";
    }

private:
    FiniteSpace(std::vector<std::string> names, std::vector<PointSet> min_open)
        : names_(std::move(names)), min_open_(std::move(min_open)) {}

    std::vector<std::string> names_;
    std::vector<PointSet> min_open_;
    mutable std::vector<PointSet> opens_;
};

/// A basis of basic opens of the open set `domain`. Members are nonempty
/// opens contained in the domain, kept sorted and deduplicated.
struct Basis {
    const FiniteSpace* space = nullptr;
    PointSet domain = 0;
    std::vector<PointSet> members;

    Basis() = default;
    Basis(const FiniteSpace& sp, PointSet dom, std::vector<PointSet> mem)
        : space(&sp), domain(dom), members(std::move(mem)) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (PointSet m : members) {
            if (m == 0) throw SpaceError("empty set cannot be a basic open");
            if (!subset(m, domain)) throw SpaceError("basis member not contained in the domain");
            if (!space->is_open(m)) throw SpaceError("basis member is not open");
        }
    }

    bool contains(PointSet m) const {
        return std::binary_search(members.begin(), members.end(), m);
    }

    bool operator==(const Basis& o) const {
        return domain == o.domain && members == o.members;
    }
    bool operator<(const Basis& o) const {
        return std::tie(domain, members) < std::tie(o.domain, o.members);
    }

    /// A set of opens is a basis of U iff it contains the minimal open of
    /// every point of U (any basic neighborhood of x inside min_open(x) is
    /// forced to equal min_open(x)). Returns the uncovered points.
    std::vector<std::size_t> basis_property_violations() const {
        std::vector<std::size_t> missing;
        for (std::size_t x = 0; x < space->num_points(); ++x)
            if ((domain >> x) & 1)
                if (!contains(space->min_open(x))) missing.push_back(x);
        return missing;
    }
    bool is_basis() const { return basis_property_violations().empty(); }
};

/// b|_V = { B in b : B subset of V }.
inline Basis restrict_basis(const Basis& b, PointSet v) {
    if (!subset(v, b.domain)) throw SpaceError("restrict_basis: target is not inside the domain");
    if (!b.space->is_open(v)) throw SpaceError("restrict_basis: target is not open");
    std::vector<PointSet> mem;
    for (PointSet m : b.members)
        if (subset(m, v)) mem.push_back(m);
    return Basis(*b.space, v, std::move(mem));
}

/// Intersection of two bases on the same domain. The result need not be a
/// basis; with strict=true a failure of the basis property throws.
inline Basis intersect_bases(const Basis& a, const Basis& b, bool strict = false) {
    if (a.domain != b.domain) throw SpaceError("intersect_bases: domains differ");
    std::vector<PointSet> mem;
    std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                          std::back_inserter(mem));
    Basis out(*a.space, a.domain, std::move(mem));
    if (strict && !out.is_basis())
        throw SpaceError("intersect_bases: intersection is not a basis of the domain");
    return out;
}

/// Union of bases that coincide on the intersection of their domains.
inline Basis glue_bases(const Basis& a, const Basis& b) {
    PointSet inter = a.domain & b.domain;
    if (!(restrict_basis(a, inter) == restrict_basis(b, inter)))
        throw SpaceError("glue_bases: bases do not coincide on the intersection of domains");
    std::vector<PointSet> mem = a.members;
    mem.insert(mem.end(), b.members.begin(), b.members.end());
    Basis out(*a.space, a.domain | b.domain, std::move(mem));
    if (!out.is_basis()) throw SpaceError("glue_bases: union is not a basis");
    return out;
}

/// b_U o b_V = { B in b_U : B subset of V implies B in b_V }, for V inside U.
inline Basis plug(const Basis& bu, const Basis& bv) {
    if (!subset(bv.domain, bu.domain)) throw SpaceError("plug: finer domain not inside coarser");
    std::vector<PointSet> mem;
    for (PointSet m : bu.members)
        if (!subset(m, bv.domain) || bv.contains(m)) mem.push_back(m);
    Basis out(*bu.space, bu.domain, std::move(mem));
    if (!out.is_basis()) throw SpaceError("plug: result is not a basis");
    return out;
}

/// b_delta = { B in b : B subset of (union of delta) implies B fits inside a
/// single member of delta }.
inline Basis delta_refine(const Basis& b, const std::vector<PointSet>& delta) {
    PointSet uni = 0;
    for (PointSet d : delta) {
        if (!subset(d, b.domain)) throw SpaceError("delta_refine: delta member not inside domain");
        if (!b.space->is_open(d)) throw SpaceError("delta_refine: delta member is not open");
        uni |= d;
    }
    std::vector<PointSet> mem;
    for (PointSet m : b.members) {
        bool keep = true;
        if (subset(m, uni)) {
            keep = false;
            for (PointSet d : delta)
                if (subset(m, d)) {
                    keep = true;
                    break;
                }
        }
        if (keep) mem.push_back(m);
    }
    Basis out(*b.space, b.domain, std::move(mem));
    if (!out.is_basis()) throw SpaceError("delta_refine: result is not a basis");
    return out;
}

/// An assignment U -> B(U) of collections of bases.
struct BasisFamily {
    const FiniteSpace* space = nullptr;
    std::map<PointSet, std::vector<Basis>> at;

    const std::vector<Basis>& collection(PointSet u) const {
        auto it = at.find(u);
        if (it == at.end()) throw SpaceError("family has no collection for this open");
        return it->second;
    }

    bool member(PointSet u, const Basis& b) const {
        auto it = at.find(u);
        if (it == at.end()) return false;
        return std::find(it->second.begin(), it->second.end(), b) != it->second.end();
    }
};

/// Intersection of all members of B(U); terminal in the order by reverse
/// inclusion when B(U) is intersection-closed.
inline Basis terminal_basis(const BasisFamily& fam, PointSet u) {
    const auto& coll = fam.collection(u);
    if (coll.empty()) throw SpaceError("terminal_basis: empty collection");
    Basis acc = coll.front();
    for (std::size_t i = 1; i < coll.size(); ++i) acc = intersect_bases(acc, coll[i]);
    if (!fam.member(u, acc))
        throw SpaceError("terminal_basis: intersection of members is not itself a member");
    return acc;
}

/// The smallest good family containing the given basis of the whole space:
/// B(U) = all iterated delta-refinements of b|_U. Computed as a fixpoint;
/// finite because every refinement is a subset of b|_U.
inline BasisFamily generate_good_family(const Basis& b) {
    const FiniteSpace& sp = *b.space;
    if (b.domain != sp.full())
        throw SpaceError("generate_good_family: seed basis must cover the whole space");
    if (!b.is_basis()) throw SpaceError("generate_good_family: seed is not a basis");
    BasisFamily fam;
    fam.space = &sp;
    for (PointSet u : sp.all_opens()) {
        std::vector<PointSet> opens_u = sp.opens_inside(u);
        // nonempty opens only; an empty delta member can never absorb anything
        std::vector<PointSet> deltas_pool;
        for (PointSet o : opens_u)
            if (o != 0) deltas_pool.push_back(o);
        std::set<Basis> seen;
        std::vector<Basis> work{restrict_basis(b, u)};
        seen.insert(work.front());
        while (!work.empty()) {
            Basis cur = work.back();
            work.pop_back();
            std::size_t k = deltas_pool.size();
            for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
                std::vector<PointSet> delta;
                for (std::size_t i = 0; i < k; ++i)
                    if ((mask >> i) & 1) delta.push_back(deltas_pool[i]);
                Basis next = delta_refine(cur, delta);
                if (seen.insert(next).second) work.push_back(next);
            }
        }
        fam.at[u] = std::vector<Basis>(seen.begin(), seen.end());
    }
    return fam;
}

struct GoodFamilyReport {
    bool good = true;
    std::string violation;  // first violation, with witnesses; empty if good

    explicit operator bool() const { return good; }
};

/// Checks nonemptiness at X and closure under intersection, restriction,
/// glueing, plugging and delta-refinement.
inline GoodFamilyReport is_good_family(const BasisFamily& fam) {
    const FiniteSpace& sp = *fam.space;
    auto fail = [](std::string msg) { return GoodFamilyReport{false, std::move(msg)}; };
    auto coll_of = [&](PointSet u) -> const std::vector<Basis>* {
        auto it = fam.at.find(u);
        return it == fam.at.end() ? nullptr : &it->second;
    };
    for (PointSet u : sp.all_opens())
        if (!coll_of(u)) return fail("no collection assigned to open " + sp.set_name(u));
    if (fam.collection(sp.full()).empty()) return fail("B(X) is empty");

    for (PointSet u : sp.all_opens()) {
        const auto& coll = *coll_of(u);
        for (const Basis& x : coll)
            if (!x.is_basis())
                return fail("member of B(" + sp.set_name(u) + ") fails the basis property");
        // (1) intersections
        for (const Basis& x : coll)
            for (const Basis& y : coll) {
                Basis z = intersect_bases(x, y);
                if (!fam.member(u, z))
                    return fail("B(" + sp.set_name(u) + ") not closed under intersection");
            }
        // (2) restrictions
        for (PointSet v : sp.opens_inside(u))
            for (const Basis& x : coll)
                if (!fam.member(v, restrict_basis(x, v)))
                    return fail("restriction of a member of B(" + sp.set_name(u) +
                                ") to " + sp.set_name(v) + " is missing");
        // (5) plugging
        for (PointSet v : sp.opens_inside(u))
            for (const Basis& x : coll)
                for (const Basis& y : *coll_of(v)) {
                    Basis z = plug(x, y);
                    if (!fam.member(u, z))
                        return fail("B(" + sp.set_name(u) + ") not closed under plugging from " +
                                    sp.set_name(v));
                }
        // (6) delta-refinements
        std::vector<PointSet> pool;
        for (PointSet o : sp.opens_inside(u))
            if (o != 0) pool.push_back(o);
        for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
            std::vector<PointSet> delta;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if ((mask >> i) & 1) delta.push_back(pool[i]);
            for (const Basis& x : coll)
                if (!fam.member(u, delta_refine(x, delta)))
                    return fail("B(" + sp.set_name(u) + ") not closed under delta-refinement");
        }
    }
    // (4) glueing
    for (PointSet u : sp.all_opens())
        for (PointSet v : sp.all_opens()) {
            PointSet inter = u & v, uni = u | v;
            for (const Basis& x : *coll_of(u))
                for (const Basis& y : *coll_of(v)) {
                    if (!(restrict_basis(x, inter) == restrict_basis(y, inter))) continue;
                    Basis z = glue_bases(x, y);
                    if (!fam.member(uni, z))
                        return fail("B(" + sp.set_name(uni) + ") not closed under glueing " +
                                    sp.set_name(u) + " with " + sp.set_name(v));
                }
        }
    return GoodFamilyReport{};
}

}  // namespace hhsheaf
