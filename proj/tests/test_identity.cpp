#include <catch_amalgamated.hpp>

#include "grouplaw/identity.hpp"
#include "grouplaw/walk.hpp"
#include "grouplaw/random_gen.hpp"
#include "perturb.hpp"

using namespace grouplaw;

TEST_CASE("manifest parses and round trips") {
    auto claims = builtin_manifest();
    REQUIRE(claims.size() >= 15);
    for (const auto& c : claims) {
        IdentityClaim back = parse_claim_line(claim_text(c));
        CHECK(back.name == c.name);
        CHECK(back.kind == c.kind);
        CHECK(claim_text(back) == claim_text(c));
    }
    CHECK_THROWS_AS(parse_claim_line("nonsense foo : x1 = 1"), ParseError);
    CHECK_THROWS_AS(parse_claim_line("conditional foo : x1^3 x1 = 1"), ParseError);
}

TEST_CASE("the registered unconditional identities verify by free reduction") {
    int unconditional = 0;
    for (const auto& c : builtin_manifest()) {
        if (c.kind != IdentityClaim::Kind::Unconditional) continue;
        ++unconditional;
        CHECK(verify_free_identity(c));
    }
    CHECK(unconditional == 3);
}

TEST_CASE("a swapped product identity fails") {
    // [a,bc] = [a,c][a,b]^c is the factors-swapped variant and must not hold
    IdentityClaim wrong;
    wrong.name = "swapped";
    wrong.lhs = parse_law("[x1,x2*x3]");
    wrong.rhs = detail::LawParser("[x1,x3]*conj([x1,x2],x3)").parse();
    CHECK_FALSE(verify_free_identity(wrong));
}

TEST_CASE("perturbed identities all fail") {
    auto mutants = perturb::failing_perturbations(20, 37);
    REQUIRE(mutants.size() == 20);
    for (const auto& m : mutants) CHECK_FALSE(verify_free_identity(m));
}

TEST_CASE("conditional claims verify exhaustively on the extraspecial group") {
    FiniteGroupTable es = enumerate_group(finite_extraspecial3());
    for (const auto& c : builtin_manifest()) {
        if (c.kind != IdentityClaim::Kind::Conditional) continue;
        INFO(c.name);
        auto cex = conditional_check(c, es, ExhaustiveMode{});
        CHECK_FALSE(cex.has_value());
    }
}

TEST_CASE("conditional claims verify by sampling on the other models") {
    std::vector<Descriptor> models = {finite_symmetric(4), finite_dihedral(8),
                                      finite_quaternion8()};
    for (const auto& d : models) {
        FiniteGroupTable t = enumerate_group(d);
        for (const auto& c : builtin_manifest()) {
            if (c.kind != IdentityClaim::Kind::Conditional) continue;
            INFO(c.name);
            auto cex = conditional_check(c, t, SampledMode{10000, 13});
            CHECK_FALSE(cex.has_value());
        }
    }
}

TEST_CASE("dropping a hypothesis exposes a counterexample") {
    // remove b^3 = 1 from the conditional cube lemma and search Sym(3)
    IdentityClaim weakened;
    for (const auto& c : builtin_manifest())
        if (c.name == "cubes-give-conj-comm") weakened = c;
    REQUIRE(weakened.hypotheses.size() == 3);
    weakened.hypotheses.erase(weakened.hypotheses.begin());  // drop x2^3

    FiniteGroupTable s3 = enumerate_group(finite_symmetric(3));
    auto cex = conditional_check(weakened, s3, ExhaustiveMode{});
    REQUIRE(cex.has_value());
    // the returned assignment satisfies the remaining hypotheses and breaks
    // the conclusion
    std::vector<std::uint32_t> assign = cex->assignment;
    for (const auto& h : weakened.hypotheses)
        CHECK(evaluate_indexed(h, s3, assign) == s3.identity_index());
    CHECK(evaluate_indexed(weakened.difference(), s3, assign) != s3.identity_index());

    // the full claim still verifies
    IdentityClaim full;
    for (const auto& c : builtin_manifest())
        if (c.name == "cubes-give-conj-comm") full = c;
    CHECK_FALSE(conditional_check(full, s3, ExhaustiveMode{}).has_value());
}

TEST_CASE("indexed goodness agrees with the element-level definition") {
    // guards the exhaustive search against a vacuously-false hypothesis test
    for (auto d : {finite_extraspecial3(), finite_symmetric(3), finite_quaternion8()}) {
        FiniteGroupTable t = enumerate_group(d);
        std::vector<bool> cube_trivial(t.order());
        for (std::uint32_t i = 0; i < t.order(); ++i)
            cube_trivial[i] = t.mul(t.mul(i, i), i) == t.identity_index();
        GroupHandle g = t.group();
        RngStream rng = derive_stream(71, {t.order()});
        long long good_count = 0;
        for (int rep = 0; rep < 200; ++rep) {
            std::uint32_t x[4], xi[4];
            std::array<GroupElement, 4> ex;
            for (int v = 0; v < 4; ++v) {
                x[v] = static_cast<std::uint32_t>(rng.below(t.order()));
                xi[v] = t.inv(x[v]);
                ex[v] = t.element(x[v]);
            }
            bool fast = detail::quadruple_is_good_indexed(t, cube_trivial, x, xi);
            CHECK(fast == quadruple_is_good(g, ex));
            if (fast) ++good_count;
        }
        if (d.get_if<FiniteExtraspecial3D>()) {
            CHECK(good_count == 200);  // exponent 3: everything is good
        }
    }
    // identity quadruples are always good
    FiniteGroupTable s3 = enumerate_group(finite_symmetric(3));
    std::vector<bool> cube_trivial(s3.order());
    for (std::uint32_t i = 0; i < s3.order(); ++i)
        cube_trivial[i] = s3.mul(s3.mul(i, i), i) == s3.identity_index();
    std::uint32_t id4[4] = {s3.identity_index(), s3.identity_index(), s3.identity_index(),
                            s3.identity_index()};
    CHECK(detail::quadruple_is_good_indexed(s3, cube_trivial, id4, id4));
}

TEST_CASE("goodness claim is vacuous outside exponent-3 models but never refuted") {
    IdentityClaim good;
    for (const auto& c : builtin_manifest())
        if (c.goodness_hypotheses) good = c;
    REQUIRE(good.goodness_hypotheses);
    FiniteGroupTable s3 = enumerate_group(finite_symmetric(3));
    CHECK_FALSE(conditional_check(good, s3, SampledMode{2000, 3}).has_value());
}

TEST_CASE("exhaustive search is budget limited") {
    FiniteGroupTable s4 = enumerate_group(finite_symmetric(4));
    IdentityClaim good;
    for (const auto& c : builtin_manifest())
        if (c.goodness_hypotheses) good = c;
    CHECK_THROWS_AS(conditional_check(good, s4, ExhaustiveMode{1000}), BudgetError);
}
