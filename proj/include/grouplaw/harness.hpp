#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "grouplaw/descriptor_text.hpp"
#include "grouplaw/finite.hpp"
#include "grouplaw/geometry.hpp"
#include "grouplaw/identity.hpp"
#include "grouplaw/random_gen.hpp"
#include "grouplaw/report.hpp"
#include "grouplaw/walk.hpp"

namespace grouplaw {

// ---------------------------------------------------------------------------
// Experiment configuration: flat key=value map with dotted keys
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::map<std::string, std::string> kv;

    static ExperimentConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read config file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return from_text(ss.str());
    }

    static ExperimentConfig from_text(const std::string& text) {
        ExperimentConfig cfg;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t a = line.find_first_not_of(" \t\r");
            if (a == std::string::npos || line[a] == '#') continue;
            std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError("config line " + std::to_string(lineno) + " is not key=value");
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return cfg;
    }

    void set(const std::string& key, const std::string& value) { kv[key] = value; }
    bool has(const std::string& key) const { return kv.count(key) != 0; }

    std::string get(const std::string& key, const std::string& dflt = "") const {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    }
    long long get_int(const std::string& key, long long dflt) const {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : std::stoll(it->second);
    }
    bool get_bool(const std::string& key, bool dflt) const {
        auto it = kv.find(key);
        if (it == kv.end()) return dflt;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ParseError("config key " + key + " must be a boolean");
    }
    std::vector<long long> get_ints(const std::string& key,
                                    const std::vector<long long>& dflt) const {
        auto it = kv.find(key);
        if (it == kv.end()) return dflt;
        std::vector<long long> out;
        std::istringstream in(it->second);
        std::string piece;
        while (std::getline(in, piece, ',')) out.push_back(std::stoll(trim(piece)));
        return out;
    }

    static std::string trim(const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }
};

// Generating-set selector: standard | shifted:K | product-split:P
inline GeneratingSet resolve_generators(const GroupHandle& g, const std::string& spec, bool lazy) {
    if (spec.empty() || spec == "standard") return standard_generators(g, lazy);
    if (spec.rfind("shifted:", 0) == 0) {
        long k = std::stol(spec.substr(8));
        return shifted_wreath_generators(g, k);
    }
    if (spec.rfind("product-split:", 0) == 0) {
        unsigned p = static_cast<unsigned>(std::stoul(spec.substr(14)));
        return product_split_generators(g, p);
    }
    throw ParseError("unknown generating set spec '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Bundled experiments with pinned thresholds
// ---------------------------------------------------------------------------

struct CriterionResult {
    std::string id;
    bool pass;
    std::string detail;
};

struct BundleOutput {
    std::vector<Json> records;
    std::vector<std::string> summary;
    std::vector<CriterionResult> criteria;
};

namespace detail {

inline Json estimate_record(const std::string& experiment, const std::string& group,
                            const std::string& law, int n, const Estimate& e) {
    return Json{{"experiment", experiment}, {"group", group},     {"law", law},
                {"n", n},                   {"trials", e.trials}, {"successes", e.successes},
                {"p_hat", e.p_hat},         {"ci_lo", e.ci_lo},   {"ci_hi", e.ci_hi},
                {"seed", e.seed}};
}

inline std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

}  // namespace detail

namespace bundles {

// Squares on the infinite dihedral group plus the finite-quotient route.
inline BundleOutput dihedral_squares(std::uint64_t seed, int threads) {
    BundleOutput out;
    GroupHandle g = build_group(dihedral_infinite());
    GeneratingSet s = standard_generators(g, true);
    LawExpr law = parse_law("x1^2");
    Estimate e = estimate_law(g, s, law, WalkConfig{400, 10000, seed, true}, threads);
    out.records.push_back(detail::estimate_record("estimate", "dihedral-infinite", "x1^2", 400, e));

    std::vector<Descriptor> family;
    for (unsigned m = 3; m <= 49; m += 2) family.push_back(finite_dihedral(m));
    auto steps = quotient_family_infimum(family, law, 0, 100000000, threads);
    for (const auto& st : steps)
        out.records.push_back(Json{{"experiment", "quotient-family"},
                                   {"group", st.descriptor},
                                   {"order", st.order},
                                   {"law", "x1^2"},
                                   {"numerator", st.probability.num.str()},
                                   {"denominator", st.probability.den.str()},
                                   {"running_inf", st.running_inf.value()}});
    double inf = steps.back().running_inf.value();

    bool in_band = e.p_hat >= 0.45 && e.p_hat <= 0.55;
    bool close = std::abs(e.p_hat - inf) <= 0.02;
    out.criteria.push_back({"dihedral-squares-band", in_band,
                            "p_hat=" + detail::fmt(e.p_hat) + " target [0.45,0.55]"});
    out.criteria.push_back({"dihedral-squares-quotient-agreement", close,
                            "p_hat=" + detail::fmt(e.p_hat) + " inf=" + detail::fmt(inf) +
                                " tolerance 0.02"});
    out.summary.push_back("experiment,group,law,n,trials,p_hat,ci_lo,ci_hi");
    out.summary.push_back("estimate,dihedral-infinite,x1^2,400," + std::to_string(e.trials) + "," +
                          detail::fmt(e.p_hat) + "," + detail::fmt(e.ci_lo) + "," +
                          detail::fmt(e.ci_hi));
    return out;
}

// x^6 on Z^5 x| Z/6: probability lands at phi(6)/6 = 1/3 while no nonzero
// rotation-free element satisfies the law.
inline BundleOutput power_law_six(std::uint64_t seed, int threads) {
    BundleOutput out;
    GroupHandle g = build_group(semidirect_companion(6));
    GeneratingSet s = standard_generators(g, true);
    Estimate e = estimate_law(g, s, parse_law("x1^6"), WalkConfig{400, 10000, seed, true}, threads);
    out.records.push_back(
        detail::estimate_record("estimate", "semidirect(companion,6)", "x1^6", 400, e));

    RngStream rng = derive_stream(seed, {tag(StreamTag::Fuzz), 6u});
    int witnesses = 0;
    for (int i = 0; i < 100; ++i) {
        std::vector<BigInt> v(5);
        bool zero = true;
        for (auto& c : v) {
            c = rng.in_range(-50, 50);
            zero = zero && c == 0;
        }
        if (zero) v[0] = 1;
        GroupElement x = make_semidirect(g, v, 0);
        if (!is_identity_element(power(g, x, 6))) ++witnesses;
    }
    out.records.push_back(Json{{"experiment", "torsion-free-witness"},
                               {"group", "semidirect(companion,6)"},
                               {"law", "x1^6"},
                               {"sampled", 100},
                               {"nonsatisfying", witnesses}});

    bool band = std::abs(e.p_hat - 1.0 / 3.0) <= 0.05;
    out.criteria.push_back({"power-law-band", band,
                            "p_hat=" + detail::fmt(e.p_hat) + " target 1/3 +- 0.05"});
    out.criteria.push_back({"power-law-witness", witnesses == 100,
                            std::to_string(witnesses) + "/100 sampled (v,0) violate x^6=1"});
    out.summary.push_back("experiment,group,law,n,trials,p_hat,ci_lo,ci_hi");
    out.summary.push_back("estimate,semidirect(companion,6),x1^6,400," +
                          std::to_string(e.trials) + "," + detail::fmt(e.p_hat) + "," +
                          detail::fmt(e.ci_lo) + "," + detail::fmt(e.ci_hi));
    return out;
}

// Commutator-loop intersections on Z^5 at a ladder of offsets.
inline BundleOutput loop_intersections(std::uint64_t seed, int threads) {
    BundleOutput out;
    LawExpr comm = parse_law("[x1,x2]");
    const int n = 200;
    const long long trials = 20000;
    std::vector<long> offsets = {5, 10, 20, 40};
    std::vector<Estimate> est;
    out.summary.push_back("offset,n,p_hat,ci_lo,ci_hi");
    for (long k : offsets) {
        Estimate e = loop_intersection_prob(comm, comm, 5, n, {k, 0, 0, 0, 0}, trials, seed,
                                            threads);
        est.push_back(e);
        out.records.push_back(Json{{"experiment", "intersection"},
                                   {"group", "lattice(5)"},
                                   {"law", "[x1,x2]"},
                                   {"law2", "[x1,x2]"},
                                   {"offset", k},
                                   {"n", n},
                                   {"trials", e.trials},
                                   {"successes", e.successes},
                                   {"p_hat", e.p_hat},
                                   {"ci_lo", e.ci_lo},
                                   {"ci_hi", e.ci_hi},
                                   {"seed", e.seed}});
        out.summary.push_back(std::to_string(k) + "," + std::to_string(n) + "," +
                              detail::fmt(e.p_hat) + "," + detail::fmt(e.ci_lo) + "," +
                              detail::fmt(e.ci_hi));
    }
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < est.size(); ++i) decreasing &= ci_below(est[i + 1], est[i]);
    bool halved = est.back().p_hat <= est.front().p_hat / 2.0;
    out.criteria.push_back({"loop-intersection-decreasing", decreasing,
                            "intervals separate at each offset step"});
    out.criteria.push_back({"loop-intersection-halved", halved,
                            "p(40)=" + detail::fmt(est.back().p_hat) +
                                " <= p(5)/2=" + detail::fmt(est.front().p_hat / 2.0)});
    return out;
}

// Metabelian law on the wreath product over Z^5 with the 160-atom set at
// shifts 0 and 50.
inline BundleOutput metabelian_wreath(std::uint64_t seed, int threads) {
    BundleOutput out;
    GroupHandle g = build_group(wreath(free_group(2), lattice(5)));
    LawExpr law = parse_law("[[x1,x2],[x3,x4]]");
    const int n = 200;
    const long long trials = 2000;
    std::map<long, Estimate> by_offset;
    out.summary.push_back("shift,n,p_hat,ci_lo,ci_hi");
    for (long k : {0L, 50L}) {
        GeneratingSet s = shifted_wreath_generators(g, k);
        Estimate e = estimate_law(g, s, law, WalkConfig{n, trials, seed, false}, threads);
        by_offset.emplace(k, e);
        Json rec = detail::estimate_record("estimate", "wreath(free(2),lattice(5))",
                                           "[[x1,x2],[x3,x4]]", n, e);
        rec["gens"] = "shifted:" + std::to_string(k);
        out.records.push_back(rec);
        out.summary.push_back(std::to_string(k) + "," + std::to_string(n) + "," +
                              detail::fmt(e.p_hat) + "," + detail::fmt(e.ci_lo) + "," +
                              detail::fmt(e.ci_hi));
    }
    double p0 = by_offset.at(0).p_hat, p50 = by_offset.at(50).p_hat;
    out.criteria.push_back({"metabelian-high", p50 >= 0.9,
                            "p_hat(shift 50)=" + detail::fmt(p50) + " >= 0.9"});
    out.criteria.push_back({"metabelian-shift-gain", p50 >= p0 + 0.1,
                            "p_hat(50)=" + detail::fmt(p50) + " vs p_hat(0)=" + detail::fmt(p0) +
                                " + 0.1"});
    return out;
}

// Component checks for the cyclotomic construction: the power law lands at
// phi(m)/m, and far translates of the power/commutator paths rarely meet.
inline BundleOutput cyclotomic_components(std::uint64_t seed, int threads) {
    BundleOutput out;
    const unsigned m = 3;
    GroupHandle gm = build_group(semidirect_cyclotomic(m));
    GeneratingSet sm = standard_generators(gm, true);
    Estimate e = estimate_law(gm, sm, parse_law("x1^3"), WalkConfig{400, 10000, seed, true},
                              threads);
    out.records.push_back(
        detail::estimate_record("estimate", "semidirect(cyclotomic,3)", "x1^3", 400, e));
    double target = static_cast<double>(euler_phi(m)) / m;
    out.criteria.push_back({"cyclotomic-power-band", std::abs(e.p_hat - target) <= 0.05,
                            "p_hat=" + detail::fmt(e.p_hat) + " target phi(3)/3=" +
                                detail::fmt(target)});

    // Translated intersections of the power path with a disjoint commutator
    // path, on a single copy. On the fivefold product the probability is the
    // fifth power of this quantity and sits far below Monte Carlo resolution,
    // so the decrease in |v0| is probed component-wise here.
    FreeWord power_word = flatten(parse_law("x1^3"));
    FreeWord comm_word = flatten(rename(parse_law("[x1,x2]"), 1));  // letters x2, x3
    const int n = 200;
    const long long trials = 2000;
    std::vector<long> shifts = {2, 16, 24};
    std::vector<Estimate> est;
    out.summary.push_back("offset,n,p_hat,ci_lo,ci_hi");
    for (long c : shifts) {
        SemidirectElem q0{std::vector<BigInt>{c, 0}, CyclicResidue{0, m}};
        GroupElement qe(q0);
        long long succ = parallel_count(trials, threads, [&](long long t) {
            std::vector<std::vector<GroupElement>> tr1, tr2;
            for (int v = 0; v < 3; ++v) {
                RngStream rng = derive_stream(
                    seed, {tag(StreamTag::Intersection), static_cast<std::uint64_t>(c),
                           static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(v)});
                auto trace = run_walk(gm, sm, n, rng);
                if (v < 1)
                    tr1.push_back(std::move(trace));
                else
                    tr2.push_back(std::move(trace));
            }
            tr2.insert(tr2.begin(), tr1[0]);  // word on letters x2,x3 ignores slot 1
            PathTrace p1 = word_path(power_word, gm, tr1);
            PathTrace p2 = word_path(comm_word, gm, tr2);
            return paths_intersect_translated(gm, p1.points, p2.points, qe);
        });
        Estimate ie = wilson_estimate(succ, trials, seed);
        est.push_back(ie);
        out.records.push_back(Json{{"experiment", "intersection"},
                                   {"group", "semidirect(cyclotomic,3)"},
                                   {"law", "x1^3"},
                                   {"law2", "[x2,x3]"},
                                   {"offset", c},
                                   {"n", n},
                                   {"trials", ie.trials},
                                   {"successes", ie.successes},
                                   {"p_hat", ie.p_hat},
                                   {"ci_lo", ie.ci_lo},
                                   {"ci_hi", ie.ci_hi},
                                   {"seed", ie.seed}});
        out.summary.push_back(std::to_string(c) + "," + std::to_string(n) + "," +
                              detail::fmt(ie.p_hat) + "," + detail::fmt(ie.ci_lo) + "," +
                              detail::fmt(ie.ci_hi));
    }
    bool decay = ci_below(est[1], est[0]) && ci_below(est[2], est[1]);
    out.criteria.push_back({"cyclotomic-translate-decay", decay,
                            "p decreases beyond interval overlap over |v0| in {2,16,24}"});
    return out;
}

// Commutator of a square with a fresh letter on the Heisenberg extension.
inline BundleOutput heisenberg_comm_power(std::uint64_t seed, int threads) {
    BundleOutput out;
    GroupHandle g = build_group(heisenberg_semidirect(2));
    GeneratingSet s = standard_generators(g, true);
    Estimate e = estimate_law(g, s, parse_law("[x1^2,x2]"), WalkConfig{400, 10000, seed, true},
                              threads);
    out.records.push_back(
        detail::estimate_record("estimate", "heisenberg-semidirect(2)", "[x1^2,x2]", 400, e));
    out.criteria.push_back({"heisenberg-comm-power", e.p_hat >= 0.45,
                            "p_hat=" + detail::fmt(e.p_hat) + " >= 0.45 (phi(2)/2 - margin)"});
    out.summary.push_back("experiment,group,law,n,trials,p_hat,ci_lo,ci_hi");
    out.summary.push_back("estimate,heisenberg-semidirect(2),[x1^2,x2],400," +
                          std::to_string(e.trials) + "," + detail::fmt(e.p_hat) + "," +
                          detail::fmt(e.ci_lo) + "," + detail::fmt(e.ci_hi));
    return out;
}

// Self-commutator of squares on the lamplighter over the infinite dihedral
// group, plus the sparse-system bound sweep.
inline BundleOutput self_commutator(std::uint64_t seed, int threads) {
    BundleOutput out;
    GroupHandle g = build_group(wreath(cyclic(2), dihedral_infinite()));
    GeneratingSet s = standard_generators(g, true);
    Estimate e = estimate_law(g, s, parse_law("[x1^2,x2^2]"), WalkConfig{400, 10000, seed, true},
                              threads);
    out.records.push_back(detail::estimate_record(
        "estimate", "wreath(cyclic(2),dihedral-infinite)", "[x1^2,x2^2]", 400, e));
    out.criteria.push_back({"self-commutator-floor", e.p_hat >= 0.20,
                            "p_hat=" + detail::fmt(e.p_hat) + " >= 0.20 ((1-eps)^2, eps=1/2)"});
    out.summary.push_back("experiment,group,law,n,trials,p_hat,ci_lo,ci_hi");
    out.summary.push_back("estimate,wreath(cyclic(2),dihedral-infinite),[x1^2,x2^2],400," +
                          std::to_string(e.trials) + "," + detail::fmt(e.p_hat) + "," +
                          detail::fmt(e.ci_lo) + "," + detail::fmt(e.ci_hi));
    return out;
}

// One hundred random sparse systems against the analytic hit bound.
inline BundleOutput sparse_sweep(std::uint64_t seed, int threads) {
    BundleOutput out;
    RngStream rng = derive_stream(seed, {tag(StreamTag::Sparse), 99u});
    const unsigned moduli[3] = {2, 3, 5};
    int violations = 0;
    out.summary.push_back("instance,rows,modulus,sparsity,p_hat,bound,satisfied");
    for (int inst = 0; inst < 100; ++inst) {
        SparseSystem sys = random_sparse_system(rng, 12, moduli[inst % 3], 3);
        SparseHitResult r = sparse_system_hit_prob(sys, 20000, seed + inst, threads);
        if (!r.bound_satisfied) ++violations;
        out.records.push_back(Json{{"experiment", "sparse-system"},
                                   {"instance", inst},
                                   {"rows", sys.rows},
                                   {"cols", sys.cols},
                                   {"modulus", sys.modulus},
                                   {"sparsity", sys.sparsity},
                                   {"epsilon", sys.epsilon()},
                                   {"p_hat", r.estimate.p_hat},
                                   {"ci_lo", r.estimate.ci_lo},
                                   {"bound", r.bound},
                                   {"satisfied", r.bound_satisfied}});
        out.summary.push_back(std::to_string(inst) + "," + std::to_string(sys.rows) + "," +
                              std::to_string(sys.modulus) + "," + std::to_string(sys.sparsity) +
                              "," + detail::fmt(r.estimate.p_hat) + "," + detail::fmt(r.bound) +
                              "," + (r.bound_satisfied ? "yes" : "no"));
    }
    out.criteria.push_back({"sparse-bound-sweep", violations == 0,
                            std::to_string(violations) + " of 100 instances violate the bound"});
    return out;
}

// Occupation of balls by the commutator path on Z^5.
inline BundleOutput occupation_bundle(std::uint64_t seed, int threads) {
    BundleOutput out;
    GroupHandle g = build_group(lattice(5));
    GeneratingSet s = standard_generators(g, true);
    OccupationProfile prof = occupation_profile(g, s, parse_law("[x1,x2]"), 200,
                                                {1, 2, 3, 4, 5, 6, 7, 8}, 2000, seed, false,
                                                threads);
    out.summary.push_back("r,mean,stderr");
    for (std::size_t i = 0; i < prof.radii.size(); ++i) {
        out.records.push_back(Json{{"experiment", "occupation"},
                                   {"group", "lattice(5)"},
                                   {"law", "[x1,x2]"},
                                   {"n", 200},
                                   {"r", prof.radii[i]},
                                   {"mean", prof.mean_counts[i]},
                                   {"stderr", prof.stderrs[i]},
                                   {"trials", prof.trials},
                                   {"seed", seed}});
        out.summary.push_back(std::to_string(prof.radii[i]) + "," +
                              detail::fmt(prof.mean_counts[i]) + "," +
                              detail::fmt(prof.stderrs[i]));
    }
    double slope = loglog_slope(prof.radii, prof.mean_counts);
    out.records.push_back(Json{{"experiment", "occupation-fit"},
                               {"group", "lattice(5)"},
                               {"law", "[x1,x2]"},
                               {"slope", slope}});
    out.criteria.push_back({"occupation-cubic-bound", slope <= 3.0,
                            "log-log slope " + detail::fmt(slope) + " <= 3"});
    return out;
}

// Uniform-on-balls estimates on (Z/2 wr Z) x Sym(4): squaring the infinite
// factor's generators raises the metabelian probability at matched radius.
inline BundleOutput uniform_balls(std::uint64_t seed, int threads, unsigned base_radius = 3,
                                  long long trials = 40000) {
    BundleOutput out;
    GroupHandle g =
        build_group(product({wreath(cyclic(2), lattice(1)), finite_symmetric(4)}));
    LawExpr law = parse_law("[[x1,x2],[x3,x4]]");
    GeneratingSet t1 = product_split_generators(g, 1);
    GeneratingSet t2 = product_split_generators(g, 2);
    Estimate e1 = uniform_ball_estimate(g, t1, 2 * base_radius, law, trials, seed, 2000000,
                                        threads);
    Estimate e2 = uniform_ball_estimate(g, t2, base_radius, law, trials, seed + 1, 2000000,
                                        threads);
    out.summary.push_back("gens,radius,p_hat,ci_lo,ci_hi");
    auto rec = [&](const char* gens, unsigned radius, const Estimate& e) {
        out.records.push_back(Json{{"experiment", "uniform-ball"},
                                   {"group", "product(wreath(cyclic(2),lattice(1)),sym(4))"},
                                   {"law", "[[x1,x2],[x3,x4]]"},
                                   {"gens", gens},
                                   {"radius", radius},
                                   {"trials", e.trials},
                                   {"successes", e.successes},
                                   {"p_hat", e.p_hat},
                                   {"ci_lo", e.ci_lo},
                                   {"ci_hi", e.ci_hi},
                                   {"seed", e.seed}});
        out.summary.push_back(std::string(gens) + "," + std::to_string(radius) + "," +
                              detail::fmt(e.p_hat) + "," + detail::fmt(e.ci_lo) + "," +
                              detail::fmt(e.ci_hi));
    };
    rec("product-split:1", 2 * base_radius, e1);
    rec("product-split:2", base_radius, e2);
    out.criteria.push_back({"uniform-ball-gain", ci_below(e1, e2),
                            "p(S^2 gens)=" + detail::fmt(e2.p_hat) + " above p(S gens)=" +
                                detail::fmt(e1.p_hat) + " beyond interval overlap"});
    return out;
}

}  // namespace bundles

inline BundleOutput run_bundle(const std::string& section, std::uint64_t seed, int threads) {
    BundleOutput out;
    auto merge = [&](BundleOutput&& b) {
        for (auto& r : b.records) out.records.push_back(std::move(r));
        for (auto& s : b.summary) out.summary.push_back(std::move(s));
        for (auto& c : b.criteria) out.criteria.push_back(std::move(c));
    };
    if (section == "5.1")
        merge(bundles::dihedral_squares(seed, threads));
    else if (section == "5.3")
        merge(bundles::power_law_six(seed, threads));
    else if (section == "6") {
        merge(bundles::loop_intersections(seed, threads));
        merge(bundles::metabelian_wreath(seed, threads));
    } else if (section == "7")
        merge(bundles::cyclotomic_components(seed, threads));
    else if (section == "8")
        merge(bundles::heisenberg_comm_power(seed, threads));
    else if (section == "9.1") {
        merge(bundles::self_commutator(seed, threads));
        merge(bundles::sparse_sweep(seed, threads));
    } else if (section == "10")
        merge(bundles::occupation_bundle(seed, threads));
    else if (section == "11")
        merge(bundles::uniform_balls(seed, threads));
    else
        throw ArgumentError("unknown reproduce section '" + section + "'");
    return out;
}

// ---------------------------------------------------------------------------
// Experiment dispatch
// ---------------------------------------------------------------------------

namespace detail {

inline void echo_provenance(Report& rep, const ExperimentConfig& cfg) {
    Json echo = Json::object();
    for (const auto& [k, v] : cfg.kv) echo[k] = v;
    rep.provenance["config"] = echo;
    rep.provenance["version"] = kVersion;
    rep.provenance["seed"] = cfg.get_int("seed", 0);
}

}  // namespace detail

inline Report run_experiment(const ExperimentConfig& cfg, bool dry_run = false) {
    Report rep;
    detail::echo_provenance(rep, cfg);
    const std::string kind = cfg.get("kind");
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    const int threads = static_cast<int>(cfg.get_int("threads", 0));
    const bool lazy = cfg.get_bool("walk.lazy", true);

    auto group_and_gens = [&](GroupHandle& g, GeneratingSet& s) {
        g = build_group(parse_descriptor(cfg.get("group")));
        s = resolve_generators(g, cfg.get("gens", "standard"), lazy);
    };

    if (kind == "estimate") {
        GroupHandle g;
        GeneratingSet s;
        group_and_gens(g, s);
        LawExpr law = parse_law(cfg.get("law"));
        auto grid = cfg.get_ints("walk.grid", {});
        long long trials = cfg.get_int("walk.trials", 10000);
        if (dry_run) {
            rep.messages.push_back("dry-run ok: estimate " + cfg.get("group") + " " +
                                   cfg.get("law"));
            return rep;
        }
        rep.summary.push_back("law,group,n,trials,successes,p_hat,ci_lo,ci_hi,seed");
        auto push = [&](int n, const Estimate& e, const Json& extra) {
            Json r = detail::estimate_record("estimate", cfg.get("group"), cfg.get("law"), n, e);
            for (auto it = extra.begin(); it != extra.end(); ++it) r[it.key()] = it.value();
            rep.records.push_back(r);
            rep.summary.push_back(cfg.get("law") + "," + cfg.get("group") + "," +
                                  std::to_string(n) + "," + std::to_string(e.trials) + "," +
                                  std::to_string(e.successes) + "," + detail::fmt(e.p_hat) + "," +
                                  detail::fmt(e.ci_lo) + "," + detail::fmt(e.ci_hi) + "," +
                                  std::to_string(e.seed));
            rep.messages.push_back("n=" + std::to_string(n) + " p_hat=" + detail::fmt(e.p_hat) +
                                   " ci=[" + detail::fmt(e.ci_lo) + "," + detail::fmt(e.ci_hi) +
                                   "]");
        };
        if (grid.empty()) {
            int n = static_cast<int>(cfg.get_int("walk.n", 400));
            push(n, estimate_law(g, s, law, WalkConfig{n, trials, seed, lazy}, threads), Json::object());
        } else {
            std::vector<int> ns(grid.begin(), grid.end());
            auto curve = estimate_curve(g, s, law, ns, trials, seed, threads);
            for (const auto& pt : curve)
                push(pt.n, pt.estimate,
                     Json{{"running_max", pt.running_max}, {"running_min", pt.running_min}});
        }
        return rep;
    }

    if (kind == "exact") {
        LawExpr law = parse_law(cfg.get("law"));
        long long budget = cfg.get_int("exact.budget", 100000000);
        if (dry_run) {
            rep.messages.push_back("dry-run ok: exact " + cfg.get("group") + " " + cfg.get("law"));
            if (cfg.has("family.descriptors")) parse_descriptor(cfg.get("group"));
            return rep;
        }
        rep.summary.push_back("group,order,law,numerator,denominator,value,running_inf");
        if (cfg.has("family.descriptors")) {
            std::vector<Descriptor> family;
            std::istringstream in(cfg.get("family.descriptors"));
            std::string piece;
            while (std::getline(in, piece, ';'))
                family.push_back(parse_descriptor(ExperimentConfig::trim(piece)));
            auto steps = quotient_family_infimum(family, law, 0, budget, threads);
            for (const auto& st : steps) {
                rep.records.push_back(Json{{"experiment", "exact"},
                                           {"group", st.descriptor},
                                           {"order", st.order},
                                           {"law", cfg.get("law")},
                                           {"numerator", st.probability.num.str()},
                                           {"denominator", st.probability.den.str()},
                                           {"running_inf", st.running_inf.value()}});
                rep.summary.push_back(st.descriptor + "," + std::to_string(st.order) + "," +
                                      cfg.get("law") + "," + st.probability.num.str() + "," +
                                      st.probability.den.str() + "," +
                                      detail::fmt(st.probability.value()) + "," +
                                      detail::fmt(st.running_inf.value()));
            }
            rep.messages.push_back("running infimum " +
                                   detail::fmt(steps.back().running_inf.value()));
            return rep;
        }
        FiniteGroupTable t = enumerate_group(build_group(parse_descriptor(cfg.get("group"))),
                                             static_cast<std::size_t>(cfg.get_int("exact.elements", 1 << 20)));
        ExactProbability p = exact_law_probability(t, law, budget, threads);
        rep.records.push_back(Json{{"experiment", "exact"},
                                   {"group", cfg.get("group")},
                                   {"order", t.order()},
                                   {"law", cfg.get("law")},
                                   {"numerator", p.num.str()},
                                   {"denominator", p.den.str()}});
        rep.summary.push_back(cfg.get("group") + "," + std::to_string(t.order()) + "," +
                              cfg.get("law") + "," + p.num.str() + "," + p.den.str() + "," +
                              detail::fmt(p.value()) + ",");
        rep.messages.push_back("exact probability " + p.str());
        return rep;
    }

    if (kind == "intersect") {
        unsigned dim = static_cast<unsigned>(cfg.get_int("intersect.dim", 5));
        LawExpr w1 = parse_law(cfg.get("law"));
        LawExpr w2 = parse_law(cfg.get("law2", cfg.get("law")));
        int n = static_cast<int>(cfg.get_int("walk.n", 200));
        long long trials = cfg.get_int("walk.trials", 20000);
        auto offsets = cfg.get_ints("intersect.offsets", {5, 10, 20, 40});
        if (dry_run) {
            rep.messages.push_back("dry-run ok: intersect dim=" + std::to_string(dim));
            return rep;
        }
        rep.summary.push_back("offset,n,p_hat,ci_lo,ci_hi");
        for (long long k : offsets) {
            std::vector<std::int64_t> off(dim, 0);
            off[0] = k;
            Estimate e = loop_intersection_prob(w1, w2, dim, n, off, trials, seed, threads, lazy);
            rep.records.push_back(Json{{"experiment", "intersection"},
                                       {"group", "lattice(" + std::to_string(dim) + ")"},
                                       {"law", cfg.get("law")},
                                       {"law2", cfg.get("law2", cfg.get("law"))},
                                       {"offset", k},
                                       {"n", n},
                                       {"trials", e.trials},
                                       {"successes", e.successes},
                                       {"p_hat", e.p_hat},
                                       {"ci_lo", e.ci_lo},
                                       {"ci_hi", e.ci_hi},
                                       {"seed", e.seed}});
            rep.summary.push_back(std::to_string(k) + "," + std::to_string(n) + "," +
                                  detail::fmt(e.p_hat) + "," + detail::fmt(e.ci_lo) + "," +
                                  detail::fmt(e.ci_hi));
            rep.messages.push_back("offset " + std::to_string(k) + ": p_hat=" +
                                   detail::fmt(e.p_hat));
        }
        return rep;
    }

    if (kind == "occupation") {
        GroupHandle g;
        GeneratingSet s;
        group_and_gens(g, s);
        LawExpr law = parse_law(cfg.get("law"));
        int n = static_cast<int>(cfg.get_int("walk.n", 200));
        long long trials = cfg.get_int("walk.trials", 2000);
        auto radii_ll = cfg.get_ints("occupation.radii", {1, 2, 3, 4, 5, 6, 7, 8});
        bool distinct = cfg.get_bool("occupation.distinct", false);
        if (dry_run) {
            rep.messages.push_back("dry-run ok: occupation " + cfg.get("group"));
            return rep;
        }
        std::vector<unsigned> radii(radii_ll.begin(), radii_ll.end());
        OccupationProfile prof =
            occupation_profile(g, s, law, n, radii, trials, seed, distinct, threads);
        rep.summary.push_back("r,mean,stderr");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            rep.records.push_back(Json{{"experiment", "occupation"},
                                       {"group", cfg.get("group")},
                                       {"law", cfg.get("law")},
                                       {"n", n},
                                       {"r", prof.radii[i]},
                                       {"mean", prof.mean_counts[i]},
                                       {"stderr", prof.stderrs[i]},
                                       {"trials", trials},
                                       {"seed", seed}});
            rep.summary.push_back(std::to_string(prof.radii[i]) + "," +
                                  detail::fmt(prof.mean_counts[i]) + "," +
                                  detail::fmt(prof.stderrs[i]));
        }
        double slope = loglog_slope(prof.radii, prof.mean_counts);
        rep.records.push_back(Json{{"experiment", "occupation-fit"},
                                   {"group", cfg.get("group")},
                                   {"law", cfg.get("law")},
                                   {"slope", slope}});
        rep.messages.push_back("log-log slope " + detail::fmt(slope));
        return rep;
    }

    if (kind == "ball") {
        GroupHandle g;
        GeneratingSet s;
        group_and_gens(g, s);
        unsigned radius = static_cast<unsigned>(cfg.get_int("ball.radius", 6));
        std::size_t budget = static_cast<std::size_t>(cfg.get_int("ball.budget", 2000000));
        if (dry_run) {
            rep.messages.push_back("dry-run ok: ball " + cfg.get("group"));
            return rep;
        }
        BallMap ball = ball_enumerate(g, s, radius, budget);
        rep.summary.push_back("r,count");
        Json growth = Json::array();
        for (std::size_t r = 0; r < ball.count_by_radius.size(); ++r) {
            growth.push_back(Json{{"r", r}, {"count", ball.count_by_radius[r]}});
            rep.summary.push_back(std::to_string(r) + "," +
                                  std::to_string(ball.count_by_radius[r]));
        }
        Json rec{{"experiment", "ball"},
                 {"group", cfg.get("group")},
                 {"radius", radius},
                 {"growth", growth}};
        if (cfg.get_bool("ball.dump", false)) {
            Json elems = Json::array();
            for (std::size_t i = 0; i < ball.elements.size(); ++i)
                elems.push_back(Json{{"element", element_text(ball.elements[i])},
                                     {"distance", ball.distance[i]}});
            rec["elements"] = elems;
        }
        rep.records.push_back(rec);
        rep.messages.push_back("|B(" + std::to_string(radius) + ")| = " +
                               std::to_string(ball.elements.size()));
        if (cfg.has("law")) {
            LawExpr law = parse_law(cfg.get("law"));
            long long trials = cfg.get_int("walk.trials", 20000);
            Estimate e = uniform_ball_estimate(g, s, radius, law, trials, seed, budget, threads);
            rep.records.push_back(
                detail::estimate_record("uniform-ball", cfg.get("group"), cfg.get("law"),
                                        static_cast<int>(radius), e));
            rep.messages.push_back("uniform-on-ball p_hat=" + detail::fmt(e.p_hat));
        }
        return rep;
    }

    if (kind == "verify") {
        std::vector<IdentityClaim> claims;
        std::string manifest = cfg.get("verify.manifest", "builtin");
        if (manifest == "builtin") {
            claims = builtin_manifest();
        } else {
            std::ifstream in(manifest);
            if (!in) throw IoError("cannot read manifest " + manifest);
            std::stringstream ss;
            ss << in.rdbuf();
            claims = parse_manifest(ss.str());
        }
        if (dry_run) {
            rep.messages.push_back("dry-run ok: verify " + std::to_string(claims.size()) +
                                   " claims");
            return rep;
        }
        long long trials = cfg.get_int("verify.trials", 100000);
        std::string exhaustive_model = cfg.get("verify.exhaustive-model", "extraspecial3");
        std::vector<std::string> sampled_models;
        {
            std::istringstream in(cfg.get("verify.sampled-models", "sym(4);dihedral(8);quaternion8"));
            std::string piece;
            while (std::getline(in, piece, ';'))
                sampled_models.push_back(ExperimentConfig::trim(piece));
        }
        rep.summary.push_back("claim,kind,model,mode,verified");
        bool all_ok = true;
        for (const auto& c : claims) {
            if (c.kind == IdentityClaim::Kind::Unconditional) {
                bool ok = verify_free_identity(c);
                all_ok &= ok;
                rep.records.push_back(Json{{"experiment", "verify"},
                                           {"claim", c.name},
                                           {"kind", "unconditional"},
                                           {"model", "free"},
                                           {"verified", ok}});
                rep.summary.push_back(c.name + ",unconditional,free,reduction," +
                                      (ok ? "yes" : "no"));
                continue;
            }
            FiniteGroupTable ex = enumerate_group(parse_descriptor(exhaustive_model));
            auto cex = conditional_check(c, ex, ExhaustiveMode{}, threads);
            bool ok = !cex.has_value();
            all_ok &= ok;
            Json rec{{"experiment", "verify"},
                     {"claim", c.name},
                     {"kind", "conditional"},
                     {"model", exhaustive_model},
                     {"mode", "exhaustive"},
                     {"verified", ok}};
            if (cex) {
                Json assign = Json::array();
                for (const auto& e : cex->elements) assign.push_back(element_text(e));
                rec["counterexample"] = assign;
            }
            rep.records.push_back(rec);
            rep.summary.push_back(c.name + ",conditional," + exhaustive_model + ",exhaustive," +
                                  (ok ? "yes" : "no"));
            for (const auto& model : sampled_models) {
                FiniteGroupTable t = enumerate_group(parse_descriptor(model));
                auto scex = conditional_check(c, t, SampledMode{trials, seed}, threads);
                bool sok = !scex.has_value();
                all_ok &= sok;
                rep.records.push_back(Json{{"experiment", "verify"},
                                           {"claim", c.name},
                                           {"kind", "conditional"},
                                           {"model", model},
                                           {"mode", "sampled"},
                                           {"trials", trials},
                                           {"verified", sok}});
                rep.summary.push_back(c.name + ",conditional," + model + ",sampled," +
                                      (sok ? "yes" : "no"));
            }
        }
        rep.ok = all_ok;
        rep.messages.push_back(all_ok ? "all claims verified" : "some claims FAILED");
        return rep;
    }

    if (kind == "reproduce") {
        std::string section = cfg.get("reproduce.section");
        if (dry_run) {
            if (section != "5.1" && section != "5.3" && section != "6" && section != "7" &&
                section != "8" && section != "9.1" && section != "10" && section != "11")
                throw ArgumentError("unknown reproduce section '" + section + "'");
            rep.messages.push_back("dry-run ok: reproduce " + section);
            return rep;
        }
        BundleOutput b = run_bundle(section, seed, threads);
        rep.records = std::move(b.records);
        rep.summary = std::move(b.summary);
        for (const auto& c : b.criteria) {
            rep.records.push_back(Json{{"experiment", "criterion"},
                                       {"id", c.id},
                                       {"pass", c.pass},
                                       {"detail", c.detail}});
            rep.messages.push_back(std::string(c.pass ? "PASS " : "FAIL ") + c.id + ": " +
                                   c.detail);
            rep.ok &= c.pass;
        }
        return rep;
    }

    throw ArgumentError("unknown experiment kind '" + kind + "'");
}

}  // namespace grouplaw
