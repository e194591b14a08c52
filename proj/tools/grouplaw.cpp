// Command-line front end: estimates, exact counts, intersections, occupation
// profiles, ball enumeration, identity verification, and bundled experiments.

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "grouplaw/harness.hpp"

using namespace grouplaw;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "results";
    long long seed = -1;
    int threads = -1;
    bool dry_run = false;
    std::string group, law, law2, gens;
    long long n = -1, trials = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value lines)");
    cmd->add_option("--set", args.overrides, "override a config key, key=value")
        ->take_all();
    cmd->add_option("--out", args.out_dir, "output directory for the report files");
    cmd->add_option("--seed", args.seed, "random seed (recorded in every record)");
    cmd->add_option("--threads", args.threads, "worker threads (0 = logical cores)");
    cmd->add_flag("--dry-run", args.dry_run, "validate the configuration and exit");
    cmd->add_option("--group", args.group, "group descriptor text");
    cmd->add_option("--law", args.law, "law in the word grammar");
    cmd->add_option("--law2", args.law2, "second law (intersections)");
    cmd->add_option("--gens", args.gens, "generating set: standard|shifted:K|product-split:P");
    cmd->add_option("--n", args.n, "walk length");
    cmd->add_option("--trials", args.trials, "Monte Carlo trials");
}

ExperimentConfig build_config(const std::string& kind, const CommonArgs& args,
                              const std::string& section) {
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = ExperimentConfig::from_file(args.config_path);
    cfg.set("kind", kind);
    if (!args.group.empty()) cfg.set("group", args.group);
    if (!args.law.empty()) cfg.set("law", args.law);
    if (!args.law2.empty()) cfg.set("law2", args.law2);
    if (!args.gens.empty()) cfg.set("gens", args.gens);
    if (args.n >= 0) cfg.set("walk.n", std::to_string(args.n));
    if (args.trials >= 0) cfg.set("walk.trials", std::to_string(args.trials));
    if (args.seed >= 0) cfg.set("seed", std::to_string(args.seed));
    if (args.threads >= 0) {
        cfg.set("threads", std::to_string(args.threads));
    } else if (!cfg.has("threads")) {
        // flag > environment > logical cores
        if (const char* env = std::getenv("GROUPLAW_THREADS")) cfg.set("threads", env);
    }
    if (!section.empty()) cfg.set("reproduce.section", section);
    for (const auto& kv : args.overrides) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("--set expects key=value, got " + kv);
        cfg.set(ExperimentConfig::trim(kv.substr(0, eq)),
                ExperimentConfig::trim(kv.substr(eq + 1)));
    }
    if (!cfg.has("seed")) cfg.set("seed", "0");  // always explicit in the output
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"group law probabilities: Monte Carlo and exact"};
    app.require_subcommand(1);

    const char* kinds[] = {"estimate", "exact", "intersect", "occupation",
                           "ball",     "verify", "reproduce"};
    const char* descriptions[] = {
        "law probability along random walks",
        "exact probability on a finite group",
        "word-path intersection probabilities on the lattice",
        "occupation of balls by word paths",
        "breadth-first ball enumeration (optionally with uniform-on-ball estimates)",
        "verify the identity manifest",
        "run a bundled experiment by section id"};
    std::map<std::string, CommonArgs> args_by_kind;
    std::string section;
    for (int i = 0; i < 7; ++i) {
        CLI::App* cmd = app.add_subcommand(kinds[i], descriptions[i]);
        add_common(cmd, args_by_kind[kinds[i]]);
        if (std::string(kinds[i]) == "reproduce")
            cmd->add_option("--section", section,
                            "bundle id: 5.1, 5.3, 6, 7, 8, 9.1, 10 or 11");
    }

    CLI11_PARSE(app, argc, argv);

    std::string kind = app.get_subcommands().at(0)->get_name();
    const CommonArgs& args = args_by_kind[kind];
    try {
        ExperimentConfig cfg = build_config(kind, args, section);
        Report rep = run_experiment(cfg, args.dry_run);
        for (const auto& m : rep.messages) std::printf("%s\n", m.c_str());
        if (!args.dry_run) {
            write_report(rep, args.out_dir);
            std::printf("report written to %s\n", args.out_dir.c_str());
        }
        return 0;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
