#include <catch_amalgamated.hpp>

#include <map>

#include "grouplaw/finite.hpp"
#include "grouplaw/random_gen.hpp"
#include "grouplaw/walk.hpp"
#include "oracles.hpp"

using namespace grouplaw;

TEST_CASE("walk basics") {
    GroupHandle z = build_group(lattice(1));
    GeneratingSet s = standard_generators(z, true);
    RngStream rng = derive_stream(1, {0});
    auto trace = run_walk(z, s, 0, rng);
    REQUIRE(trace.size() == 1);
    CHECK(is_identity_element(trace[0]));

    RngStream r1 = derive_stream(9, {1});
    RngStream r2 = derive_stream(9, {1});
    auto t1 = run_walk(z, s, 64, r1);
    auto t2 = run_walk(z, s, 64, r2);
    CHECK(t1 == t2);  // determinism contract

    for (std::size_t i = 0; i + 1 < t1.size(); ++i) {
        auto step = multiply(z, inverse(z, t1[i]), t1[i + 1]);
        bool found = false;
        for (const auto& a : s.atoms) found |= a == step;
        CHECK(found);
    }
}

TEST_CASE("standard dihedral generators are the four expected atoms") {
    GroupHandle dinf = build_group(dihedral_infinite());
    GeneratingSet s = standard_generators(dinf, true);
    REQUIRE(s.atoms.size() == 4);  // identity, (+-1, 0), (0, 1)
    std::vector<GroupElement> expected = {
        identity(dinf),
        make_semidirect(dinf, {1}, 0),
        make_semidirect(dinf, {-1}, 0),
        make_semidirect(dinf, {0}, 1),
    };
    for (const auto& e : expected) {
        bool found = false;
        for (const auto& a : s.atoms) found |= a == e;
        CHECK(found);
    }
}

TEST_CASE("lazy dihedral walk equidistributes over the reflection coset") {
    GroupHandle dinf = build_group(dihedral_infinite());
    GeneratingSet s = standard_generators(dinf, true);
    // exact rotation-coset distribution from the step-convolution oracle
    auto marginal = oracle::rotation_marginal(2, 1, 400, true);
    CHECK(std::abs(marginal[1] - 0.5) < 1e-9);

    long long trials = 4000, hits = 0;
    for (long long t = 0; t < trials; ++t) {
        RngStream rng = derive_stream(33, {static_cast<std::uint64_t>(t)});
        GroupElement e = walk_endpoint(dinf, s, 400, rng);
        if (e.get<SemidirectElem>().rot.value == 1) ++hits;
    }
    double p = static_cast<double>(hits) / static_cast<double>(trials);
    CHECK(p > 0.45);
    CHECK(p < 0.55);
}

TEST_CASE("word path of a single variable is the walk itself") {
    GroupHandle z = build_group(lattice(2));
    GeneratingSet s = standard_generators(z, true);
    RngStream rng = derive_stream(3, {7});
    auto trace = run_walk(z, s, 40, rng);
    PathTrace p = word_path(parse_law("x1"), z, {trace});
    CHECK(p.points == trace);
    CHECK(p.segment_bounds == std::vector<std::size_t>{0, 40});
}

TEST_CASE("commutator paths on the lattice are loops") {
    GroupHandle z5 = build_group(lattice(5));
    GeneratingSet s = standard_generators(z5, true);
    LawExpr comm = parse_law("[x1,x2]");
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<std::vector<GroupElement>> traces;
        for (int v = 0; v < 2; ++v) {
            RngStream rng = derive_stream(100 + rep, {static_cast<std::uint64_t>(v)});
            traces.push_back(run_walk(z5, s, 50, rng));
        }
        PathTrace p = word_path(comm, z5, traces);
        REQUIRE(p.points.size() == 201);
        CHECK(is_identity_element(p.points.back()));
        CHECK(p.segment_bounds == std::vector<std::size_t>{0, 50, 100, 150, 200});
    }
}

TEST_CASE("power path closes when the rotation part is coprime") {
    GroupHandle g = build_group(semidirect_companion(6));
    GeneratingSet s = standard_generators(g, true);
    LawExpr law = parse_law("x1^6");
    int closed_seen = 0;
    for (int rep = 0; rep < 60 && closed_seen < 10; ++rep) {
        RngStream rng = derive_stream(200 + rep, {0});
        auto trace = run_walk(g, s, 30, rng);
        unsigned k = trace.back().get<SemidirectElem>().rot.value;
        if (k != 1 && k != 5) continue;
        ++closed_seen;
        PathTrace p = word_path(law, g, {trace});
        CHECK(is_identity_element(p.points.back()));
    }
    CHECK(closed_seen == 10);
}

TEST_CASE("fuzzed word paths satisfy the step and endpoint identities") {
    std::vector<GroupHandle> groups = {
        build_group(lattice(3)),
        build_group(dihedral_infinite()),
        build_group(finite_symmetric(4)),
        build_group(heisenberg_semidirect(2)),
        build_group(wreath(cyclic(2), lattice(1))),
    };
    RngStream pick = derive_stream(55, {1});
    int paths_checked = 0;
    for (int rep = 0; rep < 400; ++rep) {
        const GroupHandle& g = groups[pick.below(groups.size())];
        GeneratingSet s = standard_generators(g, true);
        LawExpr e = random_law(pick, 3);
        FreeWord w = flatten_allow_trivial(e);
        if (w.letters.empty()) continue;
        int n = 4 + static_cast<int>(pick.below(10));
        std::vector<std::vector<GroupElement>> traces;
        for (int v = 0; v < 3; ++v) {
            RngStream rng = derive_stream(10000 + rep, {static_cast<std::uint64_t>(v)});
            traces.push_back(run_walk(g, s, n, rng));
        }
        PathTrace p = word_path(e, g, traces);
        ++paths_checked;
        REQUIRE(p.points.size() == w.letters.size() * n + 1);
        // consecutive increments are atoms (the set is symmetric)
        for (std::size_t i = 0; i + 1 < p.points.size(); i += 7) {
            GroupElement step = multiply(g, inverse(g, p.points[i]), p.points[i + 1]);
            bool found = false;
            for (const auto& a : s.atoms) found |= a == step;
            CHECK(found);
        }
        std::vector<GroupElement> endpoints;
        for (auto& t : traces) endpoints.push_back(t.back());
        CHECK(p.points.back() == evaluate(e, g, endpoints));
    }
    CHECK(paths_checked > 300);
}

TEST_CASE("commutator estimates on the lattice are exactly one") {
    GroupHandle z3 = build_group(lattice(3));
    GeneratingSet s = standard_generators(z3, true);
    Estimate e = estimate_law(z3, s, parse_law("[x1,x2]"), WalkConfig{60, 500, 4, true});
    CHECK(e.successes == e.trials);
    CHECK(e.p_hat == 1.0);
}

TEST_CASE("estimates are bitwise independent of the thread count") {
    GroupHandle dinf = build_group(dihedral_infinite());
    GeneratingSet s = standard_generators(dinf, true);
    WalkConfig cfg{120, 2500, 42, true};
    Estimate e1 = estimate_law(dinf, s, parse_law("x1^2"), cfg, 1);
    Estimate e2 = estimate_law(dinf, s, parse_law("x1^2"), cfg, 2);
    Estimate e3 = estimate_law(dinf, s, parse_law("x1^2"), cfg, 5);
    CHECK(e1 == e2);
    CHECK(e1 == e3);
}

TEST_CASE("dihedral squares estimate brackets one half") {
    GroupHandle dinf = build_group(dihedral_infinite());
    GeneratingSet s = standard_generators(dinf, true);
    Estimate e = estimate_law(dinf, s, parse_law("x1^2"), WalkConfig{400, 4000, 7, true});
    CHECK(e.p_hat > 0.45);
    CHECK(e.p_hat < 0.55);
}

TEST_CASE("estimate curve reports running extremes") {
    GroupHandle dinf = build_group(dihedral_infinite());
    GeneratingSet s = standard_generators(dinf, true);
    auto curve = estimate_curve(dinf, s, parse_law("x1^2"), {50, 100, 200}, 1500, 11);
    REQUIRE(curve.size() == 3);
    double expect_max = 0, expect_min = 1;
    for (const auto& pt : curve) {
        expect_max = std::max(expect_max, pt.estimate.p_hat);
        expect_min = std::min(expect_min, pt.estimate.p_hat);
        CHECK(pt.running_max == expect_max);
        CHECK(pt.running_min == expect_min);
    }
    CHECK(ci_contains(wilson_estimate(curve.back().estimate.successes,
                                      curve.back().estimate.trials, 0),
                      0.5));
    CHECK_THROWS_AS(estimate_curve(dinf, s, parse_law("x1^2"), {100, 50}, 10, 0), ArgumentError);
}

TEST_CASE("wilson interval calibration on a finite group") {
    // Exact commuting probability of Sym(3) is 1/2; at n = 60 the lazy walk is
    // uniform to far below Monte Carlo noise, so coverage of the 95% interval
    // over 200 repeats must stay above 93%.
    GroupHandle s3 = build_group(finite_symmetric(3));
    GeneratingSet gens = standard_generators(s3, true);
    FiniteGroupTable table = enumerate_group(s3);
    double exact = exact_law_probability(table, parse_law("[x1,x2]")).value();
    int covered = 0;
    const int repeats = 200;
    for (int r = 0; r < repeats; ++r) {
        Estimate e = estimate_law(s3, gens, parse_law("[x1,x2]"),
                                  WalkConfig{60, 400, 9000 + static_cast<std::uint64_t>(r), true});
        if (ci_contains(e, exact)) ++covered;
    }
    CHECK(covered >= 186);  // 93% of 200
}

TEST_CASE("walk estimates converge into the exact value's interval on finite groups") {
    struct Case {
        Descriptor d;
        const char* law;
    };
    std::vector<Case> cases = {{finite_dihedral(4), "x1^2"},
                               {finite_symmetric(3), "[x1,x2]"},
                               {finite_quaternion8(), "[x1,x2]"}};
    for (const auto& c : cases) {
        GroupHandle g = build_group(c.d);
        FiniteGroupTable t = enumerate_group(g);
        double exact = exact_law_probability(t, parse_law(c.law)).value();
        GeneratingSet s = standard_generators(g, true);
        Estimate e = estimate_law(g, s, parse_law(c.law), WalkConfig{80, 6000, 21, true});
        CHECK(ci_contains(e, exact));
    }
}

TEST_CASE("simple products of walks are distributed like longer walks") {
    // evaluate z^-1 x w on independent n-walks and compare with a direct
    // 3n-step walk: total-variation distance of the empirical distributions
    // on Sym(3) must be small.
    GroupHandle s3 = build_group(finite_symmetric(3));
    GeneratingSet s = standard_generators(s3, true);
    LawExpr zxw = LawExpr::mul(LawExpr::mul(LawExpr::inv(LawExpr::var(3)), LawExpr::var(1)),
                               LawExpr::var(4));
    const int n = 16;
    const long long trials = 20000;
    std::map<std::string, long long> dist1, dist2;
    for (long long t = 0; t < trials; ++t) {
        std::vector<GroupElement> endpoints;
        for (int v = 0; v < 4; ++v) {
            RngStream rng = derive_stream(77, {static_cast<std::uint64_t>(t),
                                               static_cast<std::uint64_t>(v)});
            endpoints.push_back(walk_endpoint(s3, s, n, rng));
        }
        ++dist1[element_key(evaluate(zxw, s3, endpoints))];
        RngStream rng = derive_stream(78, {static_cast<std::uint64_t>(t)});
        ++dist2[element_key(walk_endpoint(s3, s, 3 * n, rng))];
    }
    double tv = 0;
    for (const auto& [k, c1] : dist1) {
        long long c2 = dist2.count(k) ? dist2.at(k) : 0;
        tv += std::abs(static_cast<double>(c1) - static_cast<double>(c2));
    }
    for (const auto& [k, c2] : dist2)
        if (!dist1.count(k)) tv += static_cast<double>(c2);
    tv /= 2.0 * static_cast<double>(trials);
    CHECK(tv < 0.05);
}

TEST_CASE("goodness probe") {
    GroupHandle es = build_group(finite_extraspecial3());
    GeneratingSet s_es = standard_generators(es, true);
    GoodnessReport r = goodness_probe(es, s_es, 24, 300, 5);
    CHECK(r.fraction_good == 1.0);  // exponent 3: every product cubes to 1
    CHECK(r.good_with_trivial_commutator == r.good);
    CHECK_FALSE(r.counterexample.has_value());

    GroupHandle s3 = build_group(finite_symmetric(3));
    GeneratingSet s_s3 = standard_generators(s3, true);
    GoodnessReport r3 = goodness_probe(s3, s_s3, 24, 300, 5);
    CHECK(r3.fraction_good < 1.0);  // transpositions have order 2
    CHECK_FALSE(r3.counterexample.has_value());
}

TEST_CASE("sampled good quadruples always have a trivial fourfold commutator") {
    std::vector<Descriptor> models = {finite_extraspecial3(), finite_dihedral(6),
                                      finite_quaternion8(), finite_symmetric(4),
                                      cyclic(9)};
    for (const auto& d : models) {
        GroupHandle g = build_group(d);
        GeneratingSet s = standard_generators(g, true);
        GoodnessReport r = goodness_probe(g, s, 20, 400, 17);
        CHECK(r.good == r.good_with_trivial_commutator);
        CHECK_FALSE(r.counterexample.has_value());
    }
}

TEST_CASE("goodness fast path agrees with the law-level definition") {
    GroupHandle s3 = build_group(finite_symmetric(3));
    auto products = simple_products();
    RngStream rng = derive_stream(91, {4});
    for (int rep = 0; rep < 25; ++rep) {
        std::array<GroupElement, 4> x;
        std::vector<GroupElement> assign;
        for (int v = 0; v < 4; ++v) {
            x[v] = random_element(s3, rng);
            assign.push_back(x[v]);
        }
        bool slow = true;
        for (const auto& p : products) {
            GroupElement val = evaluate(p, s3, assign);
            if (!is_identity_element(power(s3, val, 3))) {
                slow = false;
                break;
            }
        }
        CHECK(quadruple_is_good(s3, x) == slow);
    }
}

TEST_CASE("wreath endpoint fast path agrees with pure multiplication") {
    for (auto desc : {wreath(cyclic(2), dihedral_infinite()), wreath(free_group(2), lattice(5))}) {
        GroupHandle g = build_group(desc);
        GeneratingSet s = standard_generators(g, true);
        for (int rep = 0; rep < 30; ++rep) {
            RngStream r1 = derive_stream(400 + rep, {1});
            RngStream r2 = derive_stream(400 + rep, {1});
            GroupElement fast = walk_endpoint(g, s, 50, r1);
            GroupElement slow = identity(g);
            for (int t = 0; t < 50; ++t)
                slow = multiply(g, slow, s.atoms[r2.below(s.atoms.size())]);
            CHECK(fast == slow);
        }
    }
}

TEST_CASE("walk configuration validation") {
    GroupHandle z = build_group(lattice(1));
    GeneratingSet strict = standard_generators(z, false);
    CHECK_THROWS_AS(estimate_law(z, strict, parse_law("x1"), WalkConfig{10, 5, 0, true}),
                    ArgumentError);
    GeneratingSet lazy = standard_generators(z, true);
    CHECK_THROWS_AS(estimate_law(z, lazy, parse_law("x1"), WalkConfig{10, 0, 0, true}),
                    ArgumentError);
}
