#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grouplaw/estimate.hpp"
#include "grouplaw/gens.hpp"
#include "grouplaw/law.hpp"
#include "grouplaw/parallel.hpp"
#include "grouplaw/rng.hpp"

namespace grouplaw {

struct WalkConfig {
    int n = 400;
    long long trials = 10000;
    std::uint64_t seed = 0;
    bool lazy = true;
};

inline void check_walk_inputs(const GeneratingSet& s, const WalkConfig& cfg) {
    if (s.atoms.empty()) throw ArgumentError("empty generating set");
    if (cfg.n < 0) throw ArgumentError("walk length must be nonnegative");
    if (cfg.trials < 1) throw ArgumentError("trial count must be positive");
    if (cfg.lazy && !s.contains_identity)
        throw ArgumentError("lazy walk requires the identity in the generating set");
}

namespace detail {

// Endpoint-only wreath walk that merges each atom's few lamps into a mutable
// map instead of rebuilding the whole configuration every step.
class WreathWalker {
public:
    explicit WreathWalker(const GroupHandle& g)
        : g_(g), base_(g.base()), lamp_(g.lamp()), pos_(identity(base_)) {}

    void step(const GroupElement& atom) {
        const auto& w = atom.get<WreathElem>();
        for (std::size_t i = 0; i < w.keys.size(); ++i) {
            GroupElement key = multiply(base_, pos_, w.key_elems[i]);
            std::string kb = element_key(key);
            auto it = lamps_.find(kb);
            if (it == lamps_.end()) {
                lamps_.emplace(std::move(kb), std::make_pair(std::move(key), w.values[i]));
            } else {
                GroupElement merged = multiply(lamp_, it->second.second, w.values[i]);
                if (is_identity_element(merged))
                    lamps_.erase(it);
                else
                    it->second.second = std::move(merged);
            }
        }
        pos_ = multiply(base_, pos_, w.pos[0]);
    }

    GroupElement snapshot() const {
        WreathElem out;
        out.keys.reserve(lamps_.size());
        for (const auto& [kb, kv] : lamps_) {
            out.keys.push_back(kb);
            out.key_elems.push_back(kv.first);
            out.values.push_back(kv.second);
        }
        out.pos.push_back(pos_);
        return out;
    }

private:
    const GroupHandle& g_;
    GroupHandle base_, lamp_;
    std::map<std::string, std::pair<GroupElement, GroupElement>> lamps_;
    GroupElement pos_;
};

}  // namespace detail

// Right random walk R_{t+1} = R_t * x_t with steps uniform on the atoms.
inline GroupElement walk_endpoint(const GroupHandle& g, const GeneratingSet& s, int n,
                                  RngStream& rng) {
    if (g.impl().kind == detail::Kind::Wreath) {
        detail::WreathWalker walker(g);
        for (int t = 0; t < n; ++t) walker.step(s.atoms[rng.below(s.atoms.size())]);
        return walker.snapshot();
    }
    GroupElement r = identity(g);
    for (int t = 0; t < n; ++t) r = multiply(g, r, s.atoms[rng.below(s.atoms.size())]);
    return r;
}

// Full trace R_0 .. R_n of prefix products.
inline std::vector<GroupElement> run_walk(const GroupHandle& g, const GeneratingSet& s, int n,
                                          RngStream& rng) {
    std::vector<GroupElement> trace;
    trace.reserve(n + 1);
    trace.push_back(identity(g));
    for (int t = 0; t < n; ++t)
        trace.push_back(multiply(g, trace.back(), s.atoms[rng.below(s.atoms.size())]));
    return trace;
}

// ---------------------------------------------------------------------------
// Word paths
// ---------------------------------------------------------------------------

// The path traced by a word map along the given walks: forward letters follow
// the walk's prefix products, inverse letters follow the endpoint's inverse
// times the reversed walk. Length is len(word) * n, plus the starting point.
struct PathTrace {
    std::vector<GroupElement> points;          // gamma_0 .. gamma_{ln}
    std::vector<std::size_t> segment_bounds;   // 0, n, 2n, ..., ln
};

inline PathTrace word_path(const FreeWord& word, const GroupHandle& g,
                           const std::vector<std::vector<GroupElement>>& traces) {
    if (word.letters.empty()) throw ArgumentError("word path of the empty word");
    if (traces.empty()) throw ArgumentError("word path needs at least one walk trace");
    const std::size_t n = traces[0].size() - 1;
    for (const auto& t : traces)
        if (t.size() != n + 1) throw ArgumentError("walk traces must have equal length");
    for (auto l : word.letters)
        if (static_cast<std::size_t>(std::abs(l)) > traces.size())
            throw ArgumentError("word uses more variables than traces provided");

    PathTrace out;
    out.points.reserve(word.letters.size() * n + 1);
    out.segment_bounds.reserve(word.letters.size() + 1);
    out.points.push_back(identity(g));
    out.segment_bounds.push_back(0);
    GroupElement prefix = identity(g);
    for (auto l : word.letters) {
        const auto& walk = traces[static_cast<std::size_t>(std::abs(l)) - 1];
        if (l > 0) {
            for (std::size_t k = 1; k <= n; ++k)
                out.points.push_back(multiply(g, prefix, walk[k]));
            prefix = multiply(g, prefix, walk[n]);
        } else {
            GroupElement base = multiply(g, prefix, inverse(g, walk[n]));
            for (std::size_t k = 1; k <= n; ++k)
                out.points.push_back(multiply(g, base, walk[n - k]));
            prefix = std::move(base);
        }
        out.segment_bounds.push_back(out.points.size() - 1);
    }
    return out;
}

inline PathTrace word_path(const LawExpr& expr, const GroupHandle& g,
                           const std::vector<std::vector<GroupElement>>& traces) {
    return word_path(flatten(expr), g, traces);
}

// ---------------------------------------------------------------------------
// Law probability estimation
// ---------------------------------------------------------------------------

inline Estimate estimate_law(const GroupHandle& g, const GeneratingSet& s, const LawExpr& expr,
                             const WalkConfig& cfg, int threads = 0) {
    check_walk_inputs(s, cfg);
    const int d = num_variables(expr);
    if (d < 1) throw ArgumentError("law has no variables");
    long long succ = parallel_count(cfg.trials, threads, [&](long long t) {
        std::vector<GroupElement> endpoints;
        endpoints.reserve(d);
        for (int v = 0; v < d; ++v) {
            RngStream rng = derive_stream(
                cfg.seed, {tag(StreamTag::Estimate), static_cast<std::uint64_t>(t),
                           static_cast<std::uint64_t>(v)});
            endpoints.push_back(walk_endpoint(g, s, cfg.n, rng));
        }
        return is_identity_element(evaluate(expr, g, endpoints));
    });
    return wilson_estimate(succ, cfg.trials, cfg.seed);
}

// One estimate per grid point with disjoint stream derivations, plus running
// max/min proxies for the limsup/liminf over the grid.
struct CurvePoint {
    int n;
    Estimate estimate;
    double running_max;
    double running_min;
};

inline std::vector<CurvePoint> estimate_curve(const GroupHandle& g, const GeneratingSet& s,
                                              const LawExpr& expr, const std::vector<int>& n_grid,
                                              long long trials, std::uint64_t seed,
                                              int threads = 0) {
    if (n_grid.empty()) throw ArgumentError("empty n grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw ArgumentError("n grid must be strictly increasing");
    const int d = num_variables(expr);
    std::vector<CurvePoint> out;
    double runmax = 0.0, runmin = 1.0;
    for (int n : n_grid) {
        long long succ = parallel_count(trials, threads, [&](long long t) {
            std::vector<GroupElement> endpoints;
            endpoints.reserve(d);
            for (int v = 0; v < d; ++v) {
                RngStream rng = derive_stream(
                    seed, {tag(StreamTag::Curve), static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(v)});
                endpoints.push_back(walk_endpoint(g, s, n, rng));
            }
            return is_identity_element(evaluate(expr, g, endpoints));
        });
        Estimate e = wilson_estimate(succ, trials, seed);
        runmax = std::max(runmax, e.p_hat);
        runmin = std::min(runmin, e.p_hat);
        out.push_back(CurvePoint{n, e, runmax, runmin});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Good quadruples
// ---------------------------------------------------------------------------

// A quadruple is good when every simple product of its entries cubes to the
// identity. Shared-prefix search over the 632 simple products.
inline bool quadruple_is_good(const GroupHandle& g, const std::array<GroupElement, 4>& x) {
    std::array<GroupElement, 4> inv;
    for (int i = 0; i < 4; ++i) inv[i] = inverse(g, x[i]);
    bool good = true;
    std::array<bool, 4> used{false, false, false, false};
    auto rec = [&](auto&& self, const GroupElement& cur, int depth) -> void {
        if (!good) return;
        if (depth > 0) {
            GroupElement cube = multiply(g, multiply(g, cur, cur), cur);
            if (!is_identity_element(cube)) {
                good = false;
                return;
            }
        }
        if (depth == 4) return;
        for (int v = 0; v < 4 && good; ++v) {
            if (used[v]) continue;
            used[v] = true;
            self(self, multiply(g, cur, x[v]), depth + 1);
            if (good) self(self, multiply(g, cur, inv[v]), depth + 1);
            used[v] = false;
        }
    };
    rec(rec, identity(g), 0);
    return good;
}

struct GoodnessReport {
    long long trials = 0;
    long long good = 0;
    long long good_with_trivial_commutator = 0;
    double fraction_good = 0.0;
    double fraction_good_and_nilpotent = 0.0;
    std::optional<std::array<GroupElement, 4>> counterexample;  // good but [x,y,z,w] != 1
};

inline GroupElement commutator4(const GroupHandle& g, const std::array<GroupElement, 4>& x) {
    GroupElement c = commutator(g, x[0], x[1]);
    c = commutator(g, c, x[2]);
    return commutator(g, c, x[3]);
}

inline GoodnessReport goodness_probe(const GroupHandle& g, const GeneratingSet& s, int n,
                                     long long trials, std::uint64_t seed, int threads = 0) {
    struct Cell {
        long long good = 0, nil = 0;
        long long bad_trial = -1;
        Cell& operator+=(const Cell& o) {
            good += o.good;
            nil += o.nil;
            if (o.bad_trial >= 0 && (bad_trial < 0 || o.bad_trial < bad_trial))
                bad_trial = o.bad_trial;
            return *this;
        }
    };
    auto sample = [&](long long t) {
        std::array<GroupElement, 4> x;
        for (int v = 0; v < 4; ++v) {
            RngStream rng = derive_stream(seed, {tag(StreamTag::Goodness),
                                                 static_cast<std::uint64_t>(t),
                                                 static_cast<std::uint64_t>(v)});
            x[v] = walk_endpoint(g, s, n, rng);
        }
        return x;
    };
    Cell total = parallel_chunks<Cell>(trials, threads, Cell{}, [&](long long lo, long long hi) {
        Cell c;
        for (long long t = lo; t < hi; ++t) {
            auto x = sample(t);
            if (!quadruple_is_good(g, x)) continue;
            ++c.good;
            if (is_identity_element(commutator4(g, x)))
                ++c.nil;
            else if (c.bad_trial < 0)
                c.bad_trial = t;
        }
        return c;
    });
    GoodnessReport r;
    r.trials = trials;
    r.good = total.good;
    r.good_with_trivial_commutator = total.nil;
    r.fraction_good = static_cast<double>(total.good) / static_cast<double>(trials);
    r.fraction_good_and_nilpotent =
        static_cast<double>(total.nil) / static_cast<double>(trials);
    if (total.bad_trial >= 0) r.counterexample = sample(total.bad_trial);
    return r;
}

}  // namespace grouplaw
