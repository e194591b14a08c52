#include <catch_amalgamated.hpp>

#include "grouplaw/descriptor_text.hpp"
#include "grouplaw/gens.hpp"
#include "grouplaw/group.hpp"
#include "grouplaw/random_gen.hpp"
#include "oracles.hpp"

using namespace grouplaw;

namespace {
std::vector<GroupHandle> sample_groups() {
    return {
        build_group(free_group(2)),
        build_group(lattice(3)),
        build_group(cyclic(6)),
        build_group(dihedral_infinite()),
        build_group(semidirect_companion(6)),
        build_group(semidirect_cyclotomic(12)),
        build_group(heisenberg(2)),
        build_group(heisenberg(4)),
        build_group(heisenberg_semidirect(2)),
        build_group(heisenberg_semidirect(3)),
        build_group(wreath(cyclic(2), lattice(1))),
        build_group(wreath(free_group(2), lattice(5))),
        build_group(wreath(cyclic(2), dihedral_infinite())),
        build_group(product({lattice(1), finite_symmetric(3)})),
        build_group(finite_dihedral(4)),
        build_group(finite_symmetric(4)),
        build_group(finite_extraspecial3()),
        build_group(finite_quaternion8()),
        build_group(finite_quotient(semidirect_companion(2), 7)),
    };
}
}  // namespace

TEST_CASE("heisenberg multiplication frozen example") {
    // (e1,0,0) * (0,0,e1) = (e1,1,e1) for m = 2.
    GroupHandle g = build_group(heisenberg(2));
    HeisenbergElem x{{1}, 0, {0}};
    HeisenbergElem y{{0}, 0, {1}};
    GroupElement p = multiply(g, GroupElement(x), GroupElement(y));
    const auto& r = p.get<HeisenbergElem>();
    CHECK(r.u == std::vector<BigInt>{1});
    CHECK(r.a == 1);
    CHECK(r.v == std::vector<BigInt>{1});
}

TEST_CASE("wreath multiplication frozen example") {
    // ({0 -> 1}, +1) * ({0 -> 1}, +1) = ({0 -> 1, 1 -> 1}, 2) in Z/2 wr Z.
    GroupHandle g = build_group(wreath(cyclic(2), lattice(1)));
    GroupElement flip = make_wreath_element(g, {{make_lattice({0}), make_cyclic(1, 2)}},
                                            make_lattice({1}));
    GroupElement p = multiply(g, flip, flip);
    const auto& w = p.get<WreathElem>();
    REQUIRE(w.keys.size() == 2);
    CHECK(w.key_elems[0].get<LatticeVec>().coords != w.key_elems[1].get<LatticeVec>().coords);
    for (const auto& k : w.key_elems) {
        auto c = k.get<LatticeVec>().coords[0];
        CHECK((c == 0 || c == 1));
    }
    CHECK(w.pos[0].get<LatticeVec>().coords == std::vector<std::int64_t>{2});
}

TEST_CASE("infinite dihedral multiplication against the presentation oracle") {
    GroupHandle g = build_group(dihedral_infinite());
    // (3,1)*(2,0) = (1,1), checked against <r,s | s^2, s r s = r^-1>.
    GroupElement a = make_semidirect(g, {3}, 1);
    GroupElement b = make_semidirect(g, {2}, 0);
    GroupElement p = multiply(g, a, b);
    CHECK(p.get<SemidirectElem>().vec[0] == 1);
    CHECK(p.get<SemidirectElem>().rot.value == 1);

    oracle::DinfWord oa{3, 1}, ob{2, 0};
    auto op = oracle::dinf_mul(oa, ob);
    CHECK(op.a == 1);
    CHECK(op.e == 1);

    RngStream rng = derive_stream(11, {1});
    for (int rep = 0; rep < 300; ++rep) {
        long long va = rng.in_range(-9, 9), vb = rng.in_range(-9, 9);
        int ka = static_cast<int>(rng.below(2)), kb = static_cast<int>(rng.below(2));
        GroupElement x = make_semidirect(g, {va}, ka);
        GroupElement y = make_semidirect(g, {vb}, kb);
        auto lp = multiply(g, x, y).get<SemidirectElem>();
        auto om = oracle::dinf_mul(oracle::DinfWord{va, ka}, oracle::DinfWord{vb, kb});
        CHECK(lp.vec[0] == om.a);
        CHECK(lp.rot.value == static_cast<unsigned>(om.e));
        auto li = inverse(g, x).get<SemidirectElem>();
        auto oi = oracle::dinf_inv(oracle::DinfWord{va, ka});
        CHECK(li.vec[0] == oi.a);
        CHECK(li.rot.value == static_cast<unsigned>(oi.e));
    }
}

TEST_CASE("semidirect inverse frozen example") {
    GroupHandle g = build_group(dihedral_infinite());
    GroupElement a = make_semidirect(g, {3}, 1);
    GroupElement ai = inverse(g, a);
    CHECK(ai == a);  // (3,1)(3,1) = (0,0)
    CHECK(is_identity_element(multiply(g, a, ai)));
}

TEST_CASE("free word operations") {
    GroupHandle g = build_group(free_group(2));
    GroupElement ab = make_freeword({1, 2});
    GroupElement inv = inverse(g, ab);
    CHECK(inv.get<FreeWord>().letters == std::vector<std::int32_t>{-2, -1});
    CHECK(is_identity_element(multiply(g, ab, inv)));
    // canonicalize reduces a a^-1 b
    GroupElement raw = GroupElement(FreeWord{{1, -1, 2}});
    CHECK(canonicalize(g, raw).get<FreeWord>().letters == std::vector<std::int32_t>{2});
}

TEST_CASE("canonicalize prunes identity lamps and normalizes residues") {
    GroupHandle g = build_group(wreath(cyclic(2), lattice(1)));
    WreathElem w;
    GroupElement key = make_lattice({0});
    w.keys.push_back(element_key(key));
    w.key_elems.push_back(key);
    w.values.push_back(make_cyclic(0, 2));  // identity value must be pruned
    w.pos.push_back(make_lattice({4}));
    GroupElement c = canonicalize(g, GroupElement(w));
    CHECK(c.get<WreathElem>().keys.empty());

    GroupHandle z6 = build_group(cyclic(6));
    CHECK(make_cyclic(-1, 6).get<CyclicResidue>().value == 5);
}

TEST_CASE("group axioms hold on seeded random triples") {
    for (const auto& g : sample_groups()) {
        RngStream rng = derive_stream(5, {std::hash<std::string>{}(descriptor_text(g.descriptor()))});
        GroupElement id = identity(g);
        for (int rep = 0; rep < 1000; ++rep) {
            GroupElement a = random_element(g, rng);
            GroupElement b = random_element(g, rng);
            GroupElement c = random_element(g, rng);
            CHECK(multiply(g, multiply(g, a, b), c) == multiply(g, a, multiply(g, b, c)));
            if (rep < 200) {
                CHECK(multiply(g, a, id) == a);
                CHECK(multiply(g, id, a) == a);
                CHECK(is_identity_element(multiply(g, a, inverse(g, a))));
                CHECK(is_identity_element(multiply(g, inverse(g, a), a)));
                CHECK(canonicalize(g, a) == a);
            }
        }
    }
}

TEST_CASE("serialization separates elements and is stable under round trips") {
    for (const auto& g : sample_groups()) {
        RngStream rng = derive_stream(6, {std::hash<std::string>{}(descriptor_text(g.descriptor()))});
        for (int rep = 0; rep < 150; ++rep) {
            GroupElement a = random_element(g, rng);
            GroupElement b = random_element(g, rng);
            CHECK((serialize_element(a) == serialize_element(b)) == (a == b));
        }
        CHECK(serialize_element(identity(g))[0] == static_cast<char>(kSerializationVersion));
    }
}

TEST_CASE("type errors on descriptor mismatch") {
    GroupHandle z = build_group(lattice(2));
    GroupHandle f = build_group(free_group(2));
    CHECK_THROWS_AS(multiply(z, identity(z), identity(f)), TypeError);
    CHECK_THROWS_AS(multiply(z, identity(z), make_lattice({1, 2, 3})), TypeError);
}

TEST_CASE("build_group validates the action matrix") {
    IntMat bad(2, 2);
    bad(0, 0) = 2;  // 2I has infinite order
    bad(1, 1) = 2;
    CHECK_THROWS_AS(build_group(semidirect(bad, 3)), ConstructionError);
    CHECK_THROWS_AS(build_group(finite_quotient(free_group(2), 5)), ConstructionError);
}

TEST_CASE("wreath product support arithmetic") {
    GroupHandle g = build_group(wreath(free_group(2), lattice(5)));
    RngStream rng = derive_stream(17, {3});
    for (int rep = 0; rep < 200; ++rep) {
        GroupElement a = random_element(g, rng);
        GroupElement b = random_element(g, rng);
        GroupElement p = multiply(g, a, b);
        const auto& wa = a.get<WreathElem>();
        const auto& wb = b.get<WreathElem>();
        const auto& wp = p.get<WreathElem>();
        std::vector<std::string> allowed = wa.keys;
        for (const auto& k : wb.key_elems)
            allowed.push_back(element_key(multiply(g.base(), wa.pos[0], k)));
        for (const auto& k : wp.keys)
            CHECK(std::find(allowed.begin(), allowed.end(), k) != allowed.end());
    }
}

TEST_CASE("pointwise commuting lamp configurations commute when positions are trivial") {
    GroupHandle g = build_group(wreath(free_group(2), lattice(5)));
    RngStream rng = derive_stream(23, {5});
    GroupElement origin_pos = identity(g.base());
    for (int rep = 0; rep < 200; ++rep) {
        // both elements have trivial base position; at every site the two lamp
        // values are powers of the same free generator, so they commute there.
        std::vector<std::pair<GroupElement, GroupElement>> l1, l2;
        for (int i = 0; i < 3; ++i) {
            GroupElement site = random_element(g.base(), rng);
            std::int32_t gen = rng.coin() ? 1 : 2;
            long e1 = rng.in_range(-2, 2), e2 = rng.in_range(-2, 2);
            std::vector<std::int32_t> w1(static_cast<std::size_t>(std::abs(e1)),
                                         e1 >= 0 ? gen : -gen);
            std::vector<std::int32_t> w2(static_cast<std::size_t>(std::abs(e2)),
                                         e2 >= 0 ? gen : -gen);
            l1.emplace_back(site, make_freeword(w1));
            l2.emplace_back(site, make_freeword(w2));
        }
        GroupElement a = make_wreath_element(g, l1, origin_pos);
        GroupElement b = make_wreath_element(g, l2, origin_pos);
        CHECK(is_identity_element(commutator(g, a, b)));
    }
}

TEST_CASE("shifted wreath generating set") {
    GroupHandle g = build_group(wreath(free_group(2), lattice(5)));
    for (long k : {0L, 50L}) {
        GeneratingSet s = shifted_wreath_generators(g, k);
        REQUIRE(s.atoms.size() == 160);
        CHECK_FALSE(s.contains_identity);
        // closed under inverse by construction of make_generating_set; inspect
        // the lamp supports
        for (const auto& a : s.atoms) {
            const auto& w = a.get<WreathElem>();
            REQUIRE(w.keys.size() >= 1);
            REQUIRE(w.keys.size() <= 2);
            const auto& mv = w.pos[0].get<LatticeVec>().coords;
            long manhattan = 0;
            for (auto c : mv) manhattan += std::abs(c);
            CHECK(manhattan == 1);
            for (const auto& site : w.key_elems) {
                auto c = site.get<LatticeVec>().coords;
                // support lies in {0, ke1} union {m, ke1 + m}
                bool at_origin = std::all_of(c.begin(), c.end(), [](auto x) { return x == 0; });
                bool at_offset = c[0] == k && c[1] == 0 && c[2] == 0 && c[3] == 0 && c[4] == 0;
                std::vector<std::int64_t> shifted = c;
                std::vector<std::int64_t> unshifted = c;
                shifted[0] -= k;
                long norm_shift = 0, norm_unshift = 0;
                for (auto x : shifted) norm_shift += std::abs(x);
                for (auto x : unshifted) norm_unshift += std::abs(x);
                CHECK((at_origin || at_offset || norm_shift == 1 || norm_unshift == 1));
            }
        }
    }
    CHECK_THROWS_AS(shifted_wreath_generators(build_group(wreath(cyclic(2), lattice(5))), 1),
                    ArgumentError);
    CHECK_THROWS_AS(shifted_wreath_generators(build_group(wreath(free_group(2), lattice(3))), 1),
                    ArgumentError);
}

TEST_CASE("standard generating sets are symmetric and respect laziness") {
    for (const auto& g : sample_groups()) {
        GeneratingSet lazy = standard_generators(g, true);
        CHECK(lazy.contains_identity);
        if (g.impl().kind != detail::Kind::Wreath) {
            GeneratingSet strict = standard_generators(g, false);
            CHECK_FALSE(strict.contains_identity);
        }
    }
}

TEST_CASE("quaternion handle realizes the quaternion group") {
    GroupHandle g = build_group(finite_quaternion8());
    GeneratingSet s = standard_generators(g, false);
    auto elements = bfs_closure(g, s.atoms, 100);
    CHECK(elements.size() == 8);
    // i^2 = j^2, i^4 = 1, j i j^-1 = i^-1
    GroupElement i = detail::quaternion_generators()[0];
    GroupElement j = detail::quaternion_generators()[1];
    CHECK(power(g, i, 2) == power(g, j, 2));
    CHECK(is_identity_element(power(g, i, 4)));
    CHECK_FALSE(is_identity_element(power(g, i, 2)));
    CHECK(conjugate(g, i, j) == inverse(g, i));
    // cross-check the full multiplication against the hand-built Cayley table
    auto closure = bfs_closure(g, s.atoms, 100);
    // map table indices to permutations: 0=1, 2=i, 4=j via products
    std::vector<GroupElement> by_index(8, identity(g));
    by_index[0] = identity(g);
    by_index[2] = i;
    by_index[4] = j;
    by_index[1] = power(g, i, 2);                 // -1
    by_index[3] = inverse(g, i);                  // -i
    by_index[5] = inverse(g, j);                  // -j
    by_index[6] = multiply(g, i, j);              // k
    by_index[7] = inverse(g, multiply(g, i, j));  // -k
    const auto& tab = oracle::q8_table();
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y)
            CHECK(multiply(g, by_index[x], by_index[y]) == by_index[tab[x][y]]);
}

TEST_CASE("descriptor text round trips") {
    std::vector<std::string> texts = {
        "free(2)",
        "lattice(5)",
        "cyclic(6)",
        "dihedral-infinite",
        "semidirect(companion,6)",
        "semidirect(cyclotomic,12)",
        "semidirect([[0,-1],[1,-1]],3)",
        "heisenberg(2)",
        "heisenberg-semidirect(2)",
        "wreath(free(2),lattice(5))",
        "wreath(cyclic(2),dihedral-infinite)",
        "product(wreath(cyclic(2),lattice(1)),sym(4))",
        "dihedral(7)",
        "sym(4)",
        "extraspecial3",
        "quaternion8",
        "quotient(dihedral-infinite,7)",
    };
    for (const auto& t : texts) {
        Descriptor d = parse_descriptor(t);
        CHECK(descriptor_text(d) == t);
        CHECK(build_group(d).valid());
    }
    // alias: the companion action of order 2 is the infinite dihedral group
    CHECK(descriptor_text(parse_descriptor("semidirect(companion,2)")) == "dihedral-infinite");
    CHECK_THROWS_AS(parse_descriptor("frobnicate(3)"), ParseError);
    CHECK_THROWS_AS(parse_descriptor("free(2) trailing"), ParseError);
}
