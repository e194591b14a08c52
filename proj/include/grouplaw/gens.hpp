#pragma once

#include <deque>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "grouplaw/group.hpp"

namespace grouplaw {

// Symmetric atom list driving random walks and ball enumeration. Invariants:
// closed under inverse, duplicate-free, and the identity is present exactly
// when `contains_identity` is set (lazy walks).
struct GeneratingSet {
    std::vector<GroupElement> atoms;
    bool contains_identity = false;
};

inline GeneratingSet make_generating_set(const GroupHandle& g, std::vector<GroupElement> atoms) {
    GeneratingSet s;
    std::unordered_set<std::string> seen;
    for (auto& a : atoms) {
        std::string k = element_key(a);
        if (seen.insert(k).second) s.atoms.push_back(std::move(a));
    }
    if (s.atoms.empty()) throw ArgumentError("generating set is empty");
    for (const auto& a : s.atoms) {
        if (is_identity_element(a)) s.contains_identity = true;
        if (!seen.count(element_key(inverse(g, a))))
            throw ArgumentError("generating set is not symmetric");
    }
    return s;
}

namespace detail {

inline void append_standard_atoms(const GroupHandle& g, std::vector<GroupElement>& out);

inline std::vector<GroupElement> quaternion_generators() {
    // Left-regular action of i and j on (1,-1,i,-i,j,-j,k,-k).
    PermElem li{{2, 3, 1, 0, 6, 7, 5, 4}};
    PermElem lj{{4, 5, 7, 6, 1, 0, 2, 3}};
    return {GroupElement(li), GroupElement(lj)};
}

inline void embed_product_atom(const GroupHandle& g, std::size_t slot, const GroupElement& a,
                               std::vector<GroupElement>& out) {
    TupleElem t;
    for (std::size_t i = 0; i < g.factor_count(); ++i)
        t.parts.push_back(i == slot ? a : identity(g.factor(i)));
    out.emplace_back(std::move(t));
}

inline void append_standard_atoms(const GroupHandle& g, std::vector<GroupElement>& out) {
    const auto& impl = g.impl();
    using detail::Kind;
    switch (impl.kind) {
        case Kind::Free: {
            for (unsigned i = 1; i <= impl.rank; ++i) {
                out.push_back(make_freeword({static_cast<std::int32_t>(i)}));
                out.push_back(make_freeword({-static_cast<std::int32_t>(i)}));
            }
            return;
        }
        case Kind::Lattice: {
            for (unsigned i = 0; i < impl.rank; ++i) {
                std::vector<std::int64_t> c(impl.rank, 0);
                c[i] = 1;
                out.push_back(canonicalize(g, make_lattice(c)));
                c[i] = -1;
                out.push_back(canonicalize(g, make_lattice(c)));
            }
            return;
        }
        case Kind::Cyclic: {
            if (impl.rank >= 2) {
                out.push_back(CyclicResidue{1, impl.rank});
                out.push_back(CyclicResidue{impl.rank - 1, impl.rank});
            }
            return;
        }
        case Kind::Semidirect: {
            for (unsigned i = 0; i < impl.dim; ++i) {
                std::vector<BigInt> v(impl.dim, 0);
                v[i] = 1;
                out.push_back(canonicalize(g, SemidirectElem{v, CyclicResidue{0, impl.rank}}));
                v[i] = -1;
                out.push_back(canonicalize(g, SemidirectElem{v, CyclicResidue{0, impl.rank}}));
            }
            for (unsigned k = 1; k < impl.rank; ++k)
                out.push_back(
                    SemidirectElem{std::vector<BigInt>(impl.dim, 0), CyclicResidue{k, impl.rank}});
            return;
        }
        case Kind::Heisenberg: {
            for (unsigned i = 0; i < impl.dim; ++i)
                for (int s : {1, -1}) {
                    HeisenbergElem e{std::vector<BigInt>(impl.dim, 0), 0,
                                     std::vector<BigInt>(impl.dim, 0)};
                    e.u[i] = s;
                    out.push_back(canonicalize(g, GroupElement(e)));
                    HeisenbergElem f{std::vector<BigInt>(impl.dim, 0), 0,
                                     std::vector<BigInt>(impl.dim, 0)};
                    f.v[i] = s;
                    out.push_back(canonicalize(g, GroupElement(f)));
                }
            for (int s : {1, -1}) {
                HeisenbergElem e{std::vector<BigInt>(impl.dim, 0), s,
                                 std::vector<BigInt>(impl.dim, 0)};
                out.push_back(canonicalize(g, GroupElement(e)));
            }
            return;
        }
        case Kind::HeisenbergSemidirect: {
            GroupHandle inner = build_group(heisenberg(impl.rank));
            std::vector<GroupElement> hatoms;
            append_standard_atoms(inner, hatoms);
            for (auto& h : hatoms) {
                TupleElem t;
                t.parts.push_back(std::move(h));
                t.parts.emplace_back(CyclicResidue{0, impl.rank});
                out.push_back(canonicalize(g, GroupElement(std::move(t))));
            }
            for (unsigned k = 1; k < impl.rank; ++k) {
                TupleElem t;
                t.parts.emplace_back(HeisenbergElem{std::vector<BigInt>(impl.dim, 0), 0,
                                                    std::vector<BigInt>(impl.dim, 0)});
                t.parts.emplace_back(CyclicResidue{k, impl.rank});
                out.emplace_back(std::move(t));
            }
            return;
        }
        case Kind::Wreath: {
            // switch-move-switch: adjust a lamp at the current position, move,
            // adjust a lamp at the new position; any leg may be skipped.
            std::vector<GroupElement> lamp_atoms;
            append_standard_atoms(g.lamp(), lamp_atoms);
            std::vector<GroupElement> base_atoms;
            append_standard_atoms(g.base(), base_atoms);
            std::vector<GroupElement> switches;
            switches.push_back(identity(g));
            for (const auto& la : lamp_atoms)
                switches.push_back(
                    make_wreath_element(g, {{identity(g.base()), la}}, identity(g.base())));
            std::vector<GroupElement> moves;
            moves.push_back(identity(g));
            for (const auto& ba : base_atoms) moves.push_back(make_wreath_element(g, {}, ba));
            for (const auto& s1 : switches)
                for (const auto& m : moves)
                    for (const auto& s2 : switches)
                        out.push_back(multiply(g, multiply(g, s1, m), s2));
            return;
        }
        case Kind::Product: {
            for (std::size_t i = 0; i < g.factor_count(); ++i) {
                std::vector<GroupElement> fa;
                append_standard_atoms(g.factor(i), fa);
                for (const auto& a : fa) embed_product_atom(g, i, a, out);
            }
            return;
        }
        case Kind::Symmetric: {
            for (unsigned i = 0; i < impl.rank; ++i)
                for (unsigned j = i + 1; j < impl.rank; ++j) {
                    PermElem p;
                    p.images.resize(impl.rank);
                    for (unsigned t = 0; t < impl.rank; ++t) p.images[t] = static_cast<std::uint8_t>(t);
                    std::swap(p.images[i], p.images[j]);
                    out.emplace_back(std::move(p));
                }
            return;
        }
        case Kind::Quaternion: {
            for (const auto& p : quaternion_generators()) out.push_back(p);
            for (const auto& p : quaternion_generators()) out.push_back(inverse(g, p));
            return;
        }
    }
    throw ConstructionError("unreachable");
}

}  // namespace detail

// Natural symmetric generating set for each construction; the identity atom
// is included exactly when `lazy` is set.
inline GeneratingSet standard_generators(const GroupHandle& g, bool lazy) {
    std::vector<GroupElement> atoms;
    detail::append_standard_atoms(g, atoms);
    if (lazy) atoms.push_back(identity(g));
    if (!lazy) {
        std::vector<GroupElement> kept;
        for (auto& a : atoms)
            if (!is_identity_element(a)) kept.push_back(std::move(a));
        atoms = std::move(kept);
    }
    GeneratingSet s = make_generating_set(g, std::move(atoms));
    if (s.contains_identity != lazy)
        throw ConstructionError("laziness flag does not match the generating set");
    return s;
}

// The 160-atom shifted generating set for a wreath product over Z^5 with a
// two-generated lamp group: s1*m*s2, where s1,s2 place a lamp-generator at the
// origin (first generator) or at offset*e1 (second generator), and m moves by
// one of the ten unit steps.
inline GeneratingSet shifted_wreath_generators(const GroupHandle& g, long offset) {
    const auto& impl = g.impl();
    if (impl.kind != detail::Kind::Wreath) throw ArgumentError("handle is not a wreath product");
    GroupHandle base = g.base();
    GroupHandle lamp = g.lamp();
    const auto& bimpl = base.impl();
    if (bimpl.kind != detail::Kind::Lattice || bimpl.rank != 5)
        throw ArgumentError("shifted generators need base Z^5");
    const auto& limpl = lamp.impl();
    if (limpl.kind != detail::Kind::Free || limpl.rank < 2)
        throw ArgumentError("shifted generators need a lamp group with two designated generators");
    if (offset < 0) throw ArgumentError("shift offset must be nonnegative");

    GroupElement origin = identity(base);
    GroupElement offset_pos = make_lattice({offset, 0, 0, 0, 0});
    std::vector<GroupElement> switches;
    for (int s : {1, -1}) {
        switches.push_back(make_wreath_element(g, {{origin, make_freeword({s})}}, origin));
        switches.push_back(
            make_wreath_element(g, {{offset_pos, make_freeword({s > 0 ? 2 : -2})}}, origin));
    }
    std::vector<GroupElement> moves;
    for (unsigned i = 0; i < 5; ++i)
        for (int s : {1, -1}) {
            std::vector<std::int64_t> c(5, 0);
            c[i] = s;
            moves.push_back(make_wreath_element(g, {}, make_lattice(c)));
        }
    std::vector<GroupElement> atoms;
    for (const auto& s1 : switches)
        for (const auto& m : moves)
            for (const auto& s2 : switches) atoms.push_back(multiply(g, multiply(g, s1, m), s2));
    GeneratingSet s = make_generating_set(g, std::move(atoms));
    if (s.atoms.size() != 160)
        throw ConstructionError("shifted generating set does not have 160 atoms");
    return s;
}

// All products of up to `power` atoms (identity must be present so this is the
// ball of radius `power` as a generating set).
inline GeneratingSet generating_set_power(const GroupHandle& g, const GeneratingSet& s,
                                          unsigned power) {
    if (!s.contains_identity)
        throw ArgumentError("generating_set_power requires the identity atom");
    std::vector<GroupElement> cur = {identity(g)};
    for (unsigned p = 0; p < power; ++p) {
        std::vector<GroupElement> next;
        std::unordered_set<std::string> seen;
        for (const auto& x : cur)
            for (const auto& a : s.atoms) {
                GroupElement y = multiply(g, x, a);
                if (seen.insert(element_key(y)).second) next.push_back(std::move(y));
            }
        cur = std::move(next);
    }
    return make_generating_set(g, std::move(cur));
}

// Breadth-first closure of a set of atoms; throws BudgetError beyond `budget`.
inline std::vector<GroupElement> bfs_closure(const GroupHandle& g,
                                             const std::vector<GroupElement>& atoms,
                                             std::size_t budget) {
    std::vector<GroupElement> elements;
    std::unordered_map<std::string, std::size_t> index;
    std::deque<std::size_t> frontier;
    GroupElement id = identity(g);
    index.emplace(element_key(id), 0);
    elements.push_back(id);
    frontier.push_back(0);
    while (!frontier.empty()) {
        std::size_t cur = frontier.front();
        frontier.pop_front();
        for (const auto& a : atoms) {
            GroupElement y = multiply(g, elements[cur], a);
            std::string k = element_key(y);
            if (index.count(k)) continue;
            if (elements.size() >= budget)
                throw BudgetError("group closure exceeded the element budget");
            index.emplace(std::move(k), elements.size());
            frontier.push_back(elements.size());
            elements.push_back(std::move(y));
        }
    }
    return elements;
}

// Generating set for a product of an infinite factor with a finite factor:
// (S^power x {1}) united with ({1} x H), H listed in full. This is the set
// used by the uniform-on-balls experiments.
inline GeneratingSet product_split_generators(const GroupHandle& g, unsigned power = 1,
                                              std::size_t finite_budget = 100000) {
    const auto& impl = g.impl();
    if (impl.kind != detail::Kind::Product || g.factor_count() != 2)
        throw ArgumentError("split generators need a product of exactly two factors");
    GroupHandle g0 = g.factor(0);
    GroupHandle g1 = g.factor(1);
    GeneratingSet s0 = standard_generators(g0, /*lazy=*/true);
    if (power > 1) s0 = generating_set_power(g0, s0, power);
    std::vector<GroupElement> h_all =
        bfs_closure(g1, standard_generators(g1, false).atoms, finite_budget);

    std::vector<GroupElement> atoms;
    for (const auto& a : s0.atoms) atoms.push_back(make_tuple({a, identity(g1)}));
    for (const auto& h : h_all) atoms.push_back(make_tuple({identity(g0), h}));
    return make_generating_set(g, std::move(atoms));
}

}  // namespace grouplaw
