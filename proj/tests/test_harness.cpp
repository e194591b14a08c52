#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "grouplaw/harness.hpp"

using namespace grouplaw;

namespace {
std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("config parsing") {
    ExperimentConfig cfg = ExperimentConfig::from_text(
        "# comment\n"
        "kind = estimate\n"
        "group = dihedral-infinite\n"
        "law = x1^2\n"
        "walk.n = 50\n"
        "walk.trials = 100\n"
        "walk.lazy = true\n"
        "seed = 3\n");
    CHECK(cfg.get("kind") == "estimate");
    CHECK(cfg.get_int("walk.n", 0) == 50);
    CHECK(cfg.get_bool("walk.lazy", false));
    CHECK(cfg.get_ints("walk.grid", {1, 2}) == std::vector<long long>{1, 2});
    CHECK_THROWS_AS(ExperimentConfig::from_text("just words\n"), ParseError);
    CHECK_THROWS_AS(cfg.get_bool("kind", false), ParseError);
}

TEST_CASE("dry run validates every experiment kind") {
    for (const char* text : {
             "kind = estimate\ngroup = dihedral-infinite\nlaw = x1^2\n",
             "kind = exact\ngroup = sym(3)\nlaw = [x1,x2]\n",
             "kind = intersect\nlaw = [x1,x2]\n",
             "kind = occupation\ngroup = lattice(5)\nlaw = [x1,x2]\n",
             "kind = ball\ngroup = lattice(1)\n",
             "kind = verify\n",
             "kind = reproduce\nreproduce.section = 10\n",
         }) {
        ExperimentConfig cfg = ExperimentConfig::from_text(text);
        Report rep = run_experiment(cfg, /*dry_run=*/true);
        CHECK(rep.records.empty());
        REQUIRE_FALSE(rep.messages.empty());
        CHECK(rep.messages[0].rfind("dry-run ok", 0) == 0);
    }
    ExperimentConfig bad = ExperimentConfig::from_text("kind = estimate\ngroup = nope(1)\nlaw = x1\n");
    CHECK_THROWS_AS(run_experiment(bad, true), ParseError);
    ExperimentConfig badkind = ExperimentConfig::from_text("kind = frobnicate\n");
    CHECK_THROWS_AS(run_experiment(badkind, true), ArgumentError);
    ExperimentConfig badsection =
        ExperimentConfig::from_text("kind = reproduce\nreproduce.section = 99\n");
    CHECK_THROWS_AS(run_experiment(badsection, true), ArgumentError);
}

TEST_CASE("estimate reports carry the full record schema") {
    ExperimentConfig cfg = ExperimentConfig::from_text(
        "kind = estimate\ngroup = dihedral-infinite\nlaw = x1^2\n"
        "walk.n = 80\nwalk.trials = 400\nseed = 5\n");
    Report rep = run_experiment(cfg);
    REQUIRE(rep.records.size() == 1);
    const Json& r = rep.records[0];
    for (const char* key : {"law", "group", "n", "trials", "successes", "p_hat", "ci_lo",
                            "ci_hi", "seed"})
        CHECK(r.contains(key));
    // every number in the summary appears in the machine records
    REQUIRE(rep.summary.size() == 2);
    std::string row = rep.summary[1];
    CHECK(row.find(std::to_string(r["successes"].get<long long>())) != std::string::npos);
    CHECK(row.find(std::to_string(r["trials"].get<long long>())) != std::string::npos);
}

TEST_CASE("reports reproduce bit for bit") {
    ExperimentConfig cfg = ExperimentConfig::from_text(
        "kind = estimate\ngroup = lattice(2)\nlaw = [x1,x2]\n"
        "walk.n = 40\nwalk.trials = 200\nseed = 12\nthreads = 2\n");
    std::filesystem::path dir1 = std::filesystem::temp_directory_path() / "grouplaw-rep1";
    std::filesystem::path dir2 = std::filesystem::temp_directory_path() / "grouplaw-rep2";
    write_report(run_experiment(cfg), dir1.string());
    // echo the provenance config back through the runner
    Report first = run_experiment(cfg);
    ExperimentConfig echoed;
    for (auto it = first.provenance["config"].begin(); it != first.provenance["config"].end();
         ++it)
        echoed.set(it.key(), it.value().get<std::string>());
    write_report(run_experiment(echoed), dir2.string());
    for (const char* name : {"results.jsonl", "summary.csv", "provenance.json"})
        CHECK(slurp(dir1 / name) == slurp(dir2 / name));
}

TEST_CASE("exact experiment emits the fraction") {
    ExperimentConfig cfg =
        ExperimentConfig::from_text("kind = exact\ngroup = sym(3)\nlaw = [x1,x2]\n");
    Report rep = run_experiment(cfg);
    REQUIRE(rep.records.size() == 1);
    CHECK(rep.records[0]["numerator"] == "1");
    CHECK(rep.records[0]["denominator"] == "2");
    CHECK(rep.records[0]["order"] == 6);
}

TEST_CASE("exact family runs the running infimum") {
    ExperimentConfig cfg = ExperimentConfig::from_text(
        "kind = exact\ngroup = dihedral(3)\nlaw = x1^2\n"
        "family.descriptors = dihedral(3); dihedral(5); dihedral(7)\n");
    Report rep = run_experiment(cfg);
    REQUIRE(rep.records.size() == 3);
    CHECK(rep.records[2]["running_inf"].get<double>() == Catch::Approx(4.0 / 7.0));
}

TEST_CASE("verify experiment passes the builtin manifest") {
    ExperimentConfig cfg = ExperimentConfig::from_text(
        "kind = verify\nverify.trials = 2000\nseed = 4\n");
    Report rep = run_experiment(cfg);
    CHECK(rep.ok);
    bool saw_unconditional = false, saw_conditional = false;
    for (const auto& r : rep.records) {
        CHECK(r["verified"].get<bool>());
        if (r["kind"] == "unconditional") saw_unconditional = true;
        if (r["kind"] == "conditional") saw_conditional = true;
    }
    CHECK(saw_unconditional);
    CHECK(saw_conditional);
}

TEST_CASE("verify loads a manifest from a file") {
    std::filesystem::path path = std::filesystem::temp_directory_path() / "grouplaw-manifest.txt";
    {
        std::ofstream out(path);
        out << "unconditional inverse-of-product : (x1*x2)^-1 = x2^-1*x1^-1\n";
        out << "conditional square-commutes : x1^2 => [x1^2,x1] = 1\n";
    }
    ExperimentConfig cfg = ExperimentConfig::from_text(
        "kind = verify\nverify.manifest = " + path.string() +
        "\nverify.trials = 200\nverify.sampled-models = sym(3)\n");
    Report rep = run_experiment(cfg);
    CHECK(rep.ok);
    CHECK(rep.records.size() == 3);  // free check + exhaustive + one sampled model
}

TEST_CASE("ball experiment dumps the growth table") {
    ExperimentConfig cfg = ExperimentConfig::from_text(
        "kind = ball\ngroup = lattice(1)\nball.radius = 3\nball.dump = true\n");
    Report rep = run_experiment(cfg);
    REQUIRE(rep.records.size() == 1);
    CHECK(rep.records[0]["growth"].size() == 4);
    CHECK(rep.records[0]["growth"][3]["count"] == 7);
    CHECK(rep.records[0]["elements"].size() == 7);
}

TEST_CASE("metabelian curve grows toward certainty with the shifted generators") {
    GroupHandle g = build_group(wreath(free_group(2), lattice(5)));
    GeneratingSet s = shifted_wreath_generators(g, 50);
    auto curve = estimate_curve(g, s, parse_law("[[x1,x2],[x3,x4]]"), {50, 100, 200}, 500, 19);
    REQUIRE(curve.size() == 3);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        double se_sum = (curve[i - 1].estimate.ci_hi - curve[i - 1].estimate.ci_lo) / 2 +
                        (curve[i].estimate.ci_hi - curve[i].estimate.ci_lo) / 2;
        CHECK(curve[i].estimate.p_hat >= curve[i - 1].estimate.p_hat - se_sum);
    }
    CHECK(curve.back().running_max >= 0.85);
}

TEST_CASE("generating set resolution") {
    GroupHandle g = build_group(wreath(free_group(2), lattice(5)));
    CHECK(resolve_generators(g, "shifted:50", false).atoms.size() == 160);
    CHECK_THROWS_AS(resolve_generators(g, "bogus", true), ParseError);
    GroupHandle p = build_group(product({wreath(cyclic(2), lattice(1)), finite_symmetric(3)}));
    GeneratingSet t = resolve_generators(p, "product-split:1", true);
    CHECK(t.contains_identity);
}
