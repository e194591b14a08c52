#pragma once

#include <vector>

#include "grouplaw/gens.hpp"
#include "grouplaw/group.hpp"
#include "grouplaw/law.hpp"
#include "grouplaw/rng.hpp"

namespace grouplaw {

// Seeded random elements and laws for property tests and fuzzing.

inline GroupElement random_element(const GroupHandle& g, RngStream& rng, int size = 6) {
    const auto& impl = g.impl();
    using detail::Kind;
    switch (impl.kind) {
        case Kind::Free: {
            std::vector<std::int32_t> letters;
            int len = static_cast<int>(rng.below(size + 1));
            for (int i = 0; i < len; ++i) {
                auto v = static_cast<std::int32_t>(1 + rng.below(impl.rank));
                letters.push_back(rng.coin() ? v : -v);
            }
            return make_freeword(letters);
        }
        case Kind::Lattice: {
            std::vector<std::int64_t> c(impl.rank);
            for (auto& x : c) x = rng.in_range(-size, size);
            return canonicalize(g, make_lattice(std::move(c)));
        }
        case Kind::Cyclic:
            return CyclicResidue{static_cast<std::uint32_t>(rng.below(impl.rank)), impl.rank};
        case Kind::Semidirect: {
            std::vector<BigInt> v(impl.dim);
            for (auto& x : v) x = rng.in_range(-size, size);
            SemidirectElem e{std::move(v),
                             CyclicResidue{static_cast<std::uint32_t>(rng.below(impl.rank)),
                                           impl.rank}};
            return canonicalize(g, GroupElement(std::move(e)));
        }
        case Kind::Heisenberg: {
            HeisenbergElem e;
            e.u.resize(impl.dim);
            e.v.resize(impl.dim);
            for (auto& x : e.u) x = rng.in_range(-size, size);
            for (auto& x : e.v) x = rng.in_range(-size, size);
            e.a = rng.in_range(-size, size);
            return canonicalize(g, GroupElement(std::move(e)));
        }
        case Kind::HeisenbergSemidirect: {
            GroupHandle inner = build_group(heisenberg(impl.rank));
            TupleElem t;
            t.parts.push_back(random_element(inner, rng, size));
            t.parts.emplace_back(
                CyclicResidue{static_cast<std::uint32_t>(rng.below(impl.rank)), impl.rank});
            return canonicalize(g, GroupElement(std::move(t)));
        }
        case Kind::Wreath: {
            int lamps = static_cast<int>(rng.below(4));
            std::vector<std::pair<GroupElement, GroupElement>> entries;
            for (int i = 0; i < lamps; ++i)
                entries.emplace_back(random_element(g.base(), rng, size),
                                     random_element(g.lamp(), rng, size));
            return make_wreath_element(g, std::move(entries), random_element(g.base(), rng, size));
        }
        case Kind::Product: {
            TupleElem t;
            for (std::size_t i = 0; i < g.factor_count(); ++i)
                t.parts.push_back(random_element(g.factor(i), rng, size));
            return t;
        }
        case Kind::Symmetric:
        case Kind::Quaternion: {
            if (impl.kind == Kind::Quaternion) {
                // random product of the generators keeps us inside the subgroup
                GroupElement e = identity(g);
                GeneratingSet s = standard_generators(g, false);
                int len = static_cast<int>(rng.below(8));
                for (int i = 0; i < len; ++i)
                    e = multiply(g, e, s.atoms[rng.below(s.atoms.size())]);
                return e;
            }
            PermElem p;
            p.images.resize(impl.rank);
            for (unsigned i = 0; i < impl.rank; ++i) p.images[i] = static_cast<std::uint8_t>(i);
            for (unsigned i = impl.rank; i > 1; --i)
                std::swap(p.images[i - 1], p.images[rng.below(i)]);
            return p;
        }
    }
    throw ArgumentError("unreachable");
}

inline LawExpr random_law(RngStream& rng, int max_vars, int depth = 3) {
    int kind = depth <= 0 ? 0 : static_cast<int>(rng.below(6));
    switch (kind) {
        case 1:
            return LawExpr::inv(random_law(rng, max_vars, depth - 1));
        case 2:
            return LawExpr::pow(random_law(rng, max_vars, depth - 1), rng.in_range(-3, 3));
        case 3:
            return LawExpr::mul(random_law(rng, max_vars, depth - 1),
                                random_law(rng, max_vars, depth - 1));
        case 4:
            return LawExpr::comm(random_law(rng, max_vars, depth - 1),
                                 random_law(rng, max_vars, depth - 1));
        case 5:
            return LawExpr::conj(random_law(rng, max_vars, depth - 1),
                                 random_law(rng, max_vars, depth - 1));
        default:
            return LawExpr::var(1 + static_cast<int>(rng.below(max_vars)));
    }
}

}  // namespace grouplaw
