#include <catch_amalgamated.hpp>

#include "grouplaw/finite.hpp"
#include "grouplaw/geometry.hpp"
#include "grouplaw/random_gen.hpp"

using namespace grouplaw;

TEST_CASE("translated intersection is symmetric") {
    GroupHandle z5 = build_group(lattice(5));
    GeneratingSet s = standard_generators(z5, true);
    RngStream rng = derive_stream(61, {1});
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<GroupElement> a, b;
        GroupElement x = identity(z5), y = make_lattice({3, 0, 0, 0, 0});
        for (int i = 0; i < 60; ++i) {
            x = multiply(z5, x, s.atoms[rng.below(s.atoms.size())]);
            y = multiply(z5, y, s.atoms[rng.below(s.atoms.size())]);
            a.push_back(x);
            b.push_back(y);
        }
        std::vector<std::int64_t> off = {rng.in_range(-3, 3), 0, rng.in_range(-2, 2), 0, 0};
        GroupElement v = make_lattice(off);
        GroupElement vinv = inverse(z5, v);
        CHECK(paths_intersect_translated(z5, a, b, v) ==
              paths_intersect_translated(z5, b, a, vinv));
    }
}

TEST_CASE("balanced word paths on the lattice close up") {
    GroupHandle z5 = build_group(lattice(5));
    GeneratingSet s = standard_generators(z5, true);
    RngStream pick = derive_stream(62, {2});
    int balanced_seen = 0;
    for (int rep = 0; rep < 800 && balanced_seen < 40; ++rep) {
        LawExpr e = random_law(pick, 2);
        FreeWord w = flatten_allow_trivial(e);
        if (w.letters.empty() || !is_balanced(e)) continue;
        ++balanced_seen;
        std::vector<std::vector<GroupElement>> traces;
        for (int v = 0; v < 2; ++v) {
            RngStream rng = derive_stream(900 + rep, {static_cast<std::uint64_t>(v)});
            traces.push_back(run_walk(z5, s, 16, rng));
        }
        PathTrace p = word_path(w, z5, traces);
        CHECK(is_identity_element(p.points.back()));
    }
    CHECK(balanced_seen == 40);
}

TEST_CASE("loop intersection at offset zero is certain") {
    Estimate e = loop_intersection_prob(parse_law("[x1,x2]"), parse_law("[x1,x2]"), 5, 30,
                                        {0, 0, 0, 0, 0}, 200, 3);
    CHECK(e.successes == e.trials);
}

TEST_CASE("loop intersection probability decays with the offset") {
    LawExpr comm = parse_law("[x1,x2]");
    std::vector<long> offsets = {5, 10, 20, 40};
    std::vector<Estimate> est;
    for (long k : offsets)
        est.push_back(
            loop_intersection_prob(comm, comm, 5, 200, {k, 0, 0, 0, 0}, 2500, 77));
    CHECK(est[0].p_hat > est[1].p_hat);
    CHECK(est[1].p_hat > est[2].p_hat);
    CHECK(est[2].p_hat > est[3].p_hat);
    CHECK(est[3].p_hat <= est[0].p_hat / 2.0);
}

TEST_CASE("intersection decay follows a power law in the diffusive window") {
    // offsets must sit inside the diffusive range (k^2 well below n) for the
    // power law to show; there the fitted exponent lands between the proved
    // -1/2 envelope and the expected -1 asymptotic, with fitting slack
    LawExpr comm = parse_law("[x1,x2]");
    std::vector<unsigned> offsets = {5, 10, 20, 40};
    std::vector<double> ps;
    for (unsigned k : offsets)
        ps.push_back(loop_intersection_prob(comm, comm, 5, 4000,
                                            {static_cast<std::int64_t>(k), 0, 0, 0, 0}, 500, 77)
                         .p_hat);
    double expo = loglog_slope(offsets, ps);
    CHECK(expo > -2.0);
    CHECK(expo < -0.5);
}

TEST_CASE("independent walk paths started apart intersect with vanishing probability") {
    // statement-level proxy with a finite horizon; anchor the envelope at the
    // smallest radius and require at-least-sqrt decay relative to it
    std::vector<long> rs = {8, 16, 32};
    std::vector<Estimate> est;
    for (long r : rs) est.push_back(srw_pair_intersection(5, r, 300, 5));
    CHECK(est[0].p_hat > est[1].p_hat);
    CHECK(est[1].p_hat > est[2].p_hat);
    double c = est[0].p_hat * std::sqrt(8.0);
    for (std::size_t i = 1; i < rs.size(); ++i) {
        double se = (est[i].ci_hi - est[i].ci_lo) / 2.0;
        CHECK(est[i].p_hat <= c / std::sqrt(static_cast<double>(rs[i])) + 2 * se);
    }
}

TEST_CASE("ball enumeration on the line") {
    GroupHandle z = build_group(lattice(1));
    BallMap b = ball_enumerate(z, standard_generators(z, true), 3);
    CHECK(b.elements.size() == 7);  // {-3..3}
    CHECK(b.count_by_radius == std::vector<std::size_t>{1, 3, 5, 7});
}

TEST_CASE("ball properties: monotone, symmetric, budget-checked") {
    GroupHandle g = build_group(wreath(cyclic(2), lattice(1)));
    GeneratingSet s = standard_generators(g, true);
    BallMap b = ball_enumerate(g, s, 6);
    for (std::size_t r = 1; r < b.count_by_radius.size(); ++r)
        CHECK(b.count_by_radius[r] >= b.count_by_radius[r - 1]);
    for (std::size_t i = 0; i < b.elements.size(); ++i) {
        GroupElement inv = inverse(g, b.elements[i]);
        auto it = b.dist_of.find(element_key(inv));
        REQUIRE(it != b.dist_of.end());
        CHECK(it->second == b.distance[i]);
    }
    CHECK_THROWS_AS(ball_enumerate(g, s, 12, 500), BudgetError);
}

TEST_CASE("lamplighter balls grow exponentially") {
    GroupHandle g = build_group(wreath(cyclic(2), lattice(1)));
    GeneratingSet s = standard_generators(g, true);
    BallMap b = ball_enumerate(g, s, 8);
    for (unsigned r = 4; r <= 8; ++r) {
        double ratio = static_cast<double>(b.count_by_radius[r]) /
                       static_cast<double>(b.count_by_radius[r - 1]);
        CHECK(ratio > 1.0);
    }
    // growth exponent comfortably above 1 at the outer radii
    double outer = static_cast<double>(b.count_by_radius[8]) /
                   static_cast<double>(b.count_by_radius[7]);
    CHECK(outer > 1.3);
}

TEST_CASE("symmetric group balls stabilize at the group order") {
    GroupHandle s4 = build_group(finite_symmetric(4));
    BallMap b = ball_enumerate(s4, standard_generators(s4, true), 6);
    CHECK(b.count_by_radius.back() == 24);
    CHECK(b.count_by_radius[5] == 24);  // diameter of Sym(4) with transpositions is small
}

TEST_CASE("occupation profile counts whole path inside a huge ball") {
    GroupHandle z2 = build_group(lattice(2));
    GeneratingSet s = standard_generators(z2, true);
    LawExpr comm = parse_law("[x1,x2]");
    int n = 10;
    OccupationProfile time_mode =
        occupation_profile(z2, s, comm, n, {100}, 50, 4, /*distinct=*/false);
    CHECK(time_mode.mean_counts[0] == 4 * n + 1);  // every time point counted
    OccupationProfile distinct_mode =
        occupation_profile(z2, s, comm, n, {100}, 50, 4, /*distinct=*/true);
    CHECK(distinct_mode.mean_counts[0] <= time_mode.mean_counts[0]);
    CHECK(distinct_mode.mean_counts[0] > 1.0);
}

TEST_CASE("occupation means are monotone in radius and in length") {
    GroupHandle z5 = build_group(lattice(5));
    GeneratingSet s = standard_generators(z5, true);
    LawExpr comm = parse_law("[x1,x2]");
    OccupationProfile p40 = occupation_profile(z5, s, comm, 40, {1, 2, 4, 8}, 600, 9);
    for (std::size_t i = 1; i < p40.mean_counts.size(); ++i)
        CHECK(p40.mean_counts[i] >= p40.mean_counts[i - 1]);
    OccupationProfile p160 = occupation_profile(z5, s, comm, 160, {1, 2, 4, 8}, 600, 9);
    // means increase with the walk length, up to Monte Carlo noise
    for (std::size_t i = 0; i < p40.mean_counts.size(); ++i)
        CHECK(p160.mean_counts[i] >=
              p40.mean_counts[i] - 2.0 * (p40.stderrs[i] + p160.stderrs[i]));
    CHECK_THROWS_AS(occupation_profile(z5, s, comm, 50, {4, 2}, 10, 0), ArgumentError);
}

TEST_CASE("occupation profiles work with breadth-first word metrics") {
    // non-lattice handle: membership in B(1,r) comes from the enumerated ball
    GroupHandle g = build_group(wreath(cyclic(2), lattice(1)));
    GeneratingSet s = standard_generators(g, true);
    OccupationProfile prof =
        occupation_profile(g, s, parse_law("[x1,x2]"), 10, {1, 2, 4}, 120, 15);
    for (std::size_t i = 1; i < prof.mean_counts.size(); ++i)
        CHECK(prof.mean_counts[i] >= prof.mean_counts[i - 1]);
    CHECK(prof.mean_counts.back() <= 41.0);  // path has 4n+1 points
    CHECK(prof.mean_counts.front() >= 1.0);  // the origin is always inside
}

TEST_CASE("occupation log-log slope stays under the cubic bound") {
    GroupHandle z5 = build_group(lattice(5));
    GeneratingSet s = standard_generators(z5, true);
    OccupationProfile prof = occupation_profile(z5, s, parse_law("[x1,x2]"), 200,
                                                {1, 2, 3, 4, 5, 6, 7, 8}, 400, 12);
    double slope = loglog_slope(prof.radii, prof.mean_counts);
    CHECK(slope <= 3.0);
    CHECK(slope <= 2.5);  // transient-lattice behavior is quadratic-ish
    CHECK(slope >= 1.0);
}

TEST_CASE("uniform ball estimates") {
    GroupHandle z2 = build_group(lattice(2));
    GeneratingSet s = standard_generators(z2, true);
    Estimate ab = uniform_ball_estimate(z2, s, 5, parse_law("[x1,x2]"), 500, 2);
    CHECK(ab.p_hat == 1.0);

    // Sym(4) with a ball covering the whole group: sampling is uniform, so the
    // estimate must cover the exact metabelian probability.
    GroupHandle s4 = build_group(finite_symmetric(4));
    FiniteGroupTable t4 = enumerate_group(s4);
    double exact = exact_law_probability(t4, parse_law("[[x1,x2],[x3,x4]]")).value();
    Estimate eb = uniform_ball_estimate(s4, standard_generators(s4, true), 6,
                                        parse_law("[[x1,x2],[x3,x4]]"), 20000, 8);
    CHECK(ci_contains(eb, exact));
}

TEST_CASE("sparse system: identity matrix over Z/2 meets the bound with equality") {
    for (unsigned m : {3u, 6u, 10u}) {
        SparseSystem sys;
        sys.modulus = 2;
        sys.rows = sys.cols = m;
        sys.sparsity = 1;
        for (unsigned i = 0; i < m; ++i) sys.entries.push_back(SparseEntry{i, i, 1});
        sys.target.assign(m, 0);
        sys.dist.assign(m, {0.5, 0.5});
        SparseHitResult r = sparse_system_hit_prob(sys, 40000, 3);
        double expect = std::pow(0.5, static_cast<double>(m));
        CHECK(std::abs(r.bound - expect) < 1e-12);
        CHECK(r.bound_satisfied);
        CHECK(ci_contains(r.estimate, expect));
    }
}

TEST_CASE("sparse system validation catches broken certificates") {
    SparseSystem sys;
    sys.modulus = 3;
    sys.rows = 2;
    sys.cols = 2;
    sys.sparsity = 1;
    sys.entries = {SparseEntry{0, 0, 1}};  // row 1 is identically zero
    sys.target = {0, 0};
    sys.dist = {{0.4, 0.3, 0.3}, {0.4, 0.3, 0.3}};
    CHECK_THROWS_AS(sys.validate(), ArgumentError);
    sys.entries.push_back(SparseEntry{1, 0, 1});  // column 0 now has 2 > k entries
    CHECK_THROWS_AS(sys.validate(), ArgumentError);
    sys.entries.back() = SparseEntry{1, 1, 1};
    sys.validate();
}

TEST_CASE("random sparse instances never violate the hit bound") {
    RngStream rng = derive_stream(2718, {1});
    const unsigned moduli[3] = {2, 3, 5};
    for (int inst = 0; inst < 30; ++inst) {
        SparseSystem sys = random_sparse_system(rng, 12, moduli[inst % 3], 3);
        SparseHitResult r = sparse_system_hit_prob(sys, 20000, 1000 + inst);
        CHECK(r.bound_satisfied);
    }
}

TEST_CASE("slope fitting recovers exact power laws") {
    std::vector<unsigned> xs = {1, 2, 4, 8, 16};
    std::vector<double> ys;
    for (auto x : xs) ys.push_back(3.0 * std::pow(static_cast<double>(x), 2.5));
    CHECK(std::abs(loglog_slope(xs, ys) - 2.5) < 1e-9);
}
