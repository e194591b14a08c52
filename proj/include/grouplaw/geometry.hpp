#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "grouplaw/estimate.hpp"
#include "grouplaw/walk.hpp"

namespace grouplaw {

// ---------------------------------------------------------------------------
// Visit sets and path intersections
// ---------------------------------------------------------------------------

class VisitSet {
public:
    void insert(const GroupElement& e) { pts_.insert(element_key(e)); }
    bool contains(const GroupElement& e) const { return pts_.count(element_key(e)) != 0; }
    bool contains_key(const std::string& k) const { return pts_.count(k) != 0; }
    std::size_t size() const { return pts_.size(); }

private:
    std::unordered_set<std::string> pts_;
};

inline VisitSet visit_set(const std::vector<GroupElement>& points) {
    VisitSet s;
    for (const auto& p : points) s.insert(p);
    return s;
}

// Does a intersect (b * v)? The set is built on the shorter path and probed
// with the longer one: x in (b*v) iff x*v^-1 in b.
inline bool paths_intersect_translated(const GroupHandle& g,
                                       const std::vector<GroupElement>& a,
                                       const std::vector<GroupElement>& b,
                                       const GroupElement& v) {
    const GroupElement vinv = inverse(g, v);
    if (a.size() <= b.size()) {
        VisitSet sa = visit_set(a);
        for (const auto& y : b)
            if (sa.contains(multiply(g, y, v))) return true;
        return false;
    }
    VisitSet sb = visit_set(b);
    for (const auto& x : a)
        if (sb.contains(multiply(g, x, vinv))) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Loop intersection probabilities on the lattice
// ---------------------------------------------------------------------------

// Pr(path(w1) meets path(w2) + offset) over independent walk families on Z^dim.
inline Estimate loop_intersection_prob(const LawExpr& w1, const LawExpr& w2, unsigned dim, int n,
                                       const std::vector<std::int64_t>& offset, long long trials,
                                       std::uint64_t seed, int threads = 0, bool lazy = true) {
    if (offset.size() != dim) throw ArgumentError("offset dimension mismatch");
    GroupHandle g = build_group(lattice(dim));
    GeneratingSet s = standard_generators(g, lazy);
    const int d1 = num_variables(w1);
    const int d2 = num_variables(w2);
    FreeWord f1 = flatten(w1);
    FreeWord f2 = flatten(w2);
    GroupElement v = make_lattice(offset);
    std::uint64_t offset_salt = 0;
    for (auto c : offset) offset_salt = detail::mix64(offset_salt ^ static_cast<std::uint64_t>(c));

    long long succ = parallel_count(trials, threads, [&](long long t) {
        std::vector<std::vector<GroupElement>> tr1, tr2;
        for (int vn = 0; vn < d1 + d2; ++vn) {
            RngStream rng = derive_stream(
                seed, {tag(StreamTag::Intersection), offset_salt, static_cast<std::uint64_t>(t),
                       static_cast<std::uint64_t>(vn)});
            auto trace = run_walk(g, s, n, rng);
            if (vn < d1)
                tr1.push_back(std::move(trace));
            else
                tr2.push_back(std::move(trace));
        }
        PathTrace p1 = word_path(f1, g, tr1);
        PathTrace p2 = word_path(f2, g, tr2);
        return paths_intersect_translated(g, p1.points, p2.points, v);
    });
    return wilson_estimate(succ, trials, seed);
}

// Intersection probability of two plain random-walk paths started `r` apart,
// truncated at a finite horizon (default 50*r^2); the tail beyond that is
// below Monte Carlo resolution on transient lattices.
inline Estimate srw_pair_intersection(unsigned dim, long r, long long trials, std::uint64_t seed,
                                      long horizon = 0, int threads = 0) {
    if (horizon <= 0) horizon = 50 * r * r;
    GroupHandle g = build_group(lattice(dim));
    GeneratingSet s = standard_generators(g, true);
    std::vector<std::int64_t> start(dim, 0);
    start[0] = r;
    GroupElement b0 = make_lattice(start);
    long long succ = parallel_count(trials, threads, [&](long long t) {
        RngStream r1 = derive_stream(seed, {tag(StreamTag::Intersection), 1u,
                                            static_cast<std::uint64_t>(t), 0u});
        RngStream r2 = derive_stream(seed, {tag(StreamTag::Intersection), 1u,
                                            static_cast<std::uint64_t>(t), 1u});
        VisitSet sa;
        GroupElement x = identity(g);
        sa.insert(x);
        for (long i = 0; i < horizon; ++i) {
            x = multiply(g, x, s.atoms[r1.below(s.atoms.size())]);
            sa.insert(x);
        }
        GroupElement y = b0;
        if (sa.contains(y)) return true;
        for (long i = 0; i < horizon; ++i) {
            y = multiply(g, y, s.atoms[r2.below(s.atoms.size())]);
            if (sa.contains(y)) return true;
        }
        return false;
    });
    return wilson_estimate(succ, trials, seed);
}

// ---------------------------------------------------------------------------
// Word metrics and balls
// ---------------------------------------------------------------------------

struct BallMap {
    std::vector<GroupElement> elements;   // breadth-first order
    std::vector<unsigned> distance;       // parallel to elements
    std::vector<std::size_t> count_by_radius;  // cumulative |B(r)|, r = 0..radius
    std::unordered_map<std::string, unsigned> dist_of;

    bool contains(const GroupElement& e) const { return dist_of.count(element_key(e)) != 0; }
};

// Exact ball of the given radius in the word metric of S. Throws BudgetError
// if the closure grows past `budget` elements; never truncates silently.
inline BallMap ball_enumerate(const GroupHandle& g, const GeneratingSet& s, unsigned radius,
                              std::size_t budget = 2000000) {
    BallMap ball;
    GroupElement id = identity(g);
    ball.elements.push_back(id);
    ball.distance.push_back(0);
    ball.dist_of.emplace(element_key(id), 0);
    std::size_t frontier_begin = 0;
    ball.count_by_radius.push_back(1);
    for (unsigned r = 1; r <= radius; ++r) {
        std::size_t frontier_end = ball.elements.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (const auto& a : s.atoms) {
                GroupElement y = multiply(g, ball.elements[i], a);
                std::string k = element_key(y);
                if (ball.dist_of.count(k)) continue;
                if (ball.elements.size() >= budget)
                    throw BudgetError("ball enumeration exceeded the element budget");
                ball.dist_of.emplace(std::move(k), r);
                ball.elements.push_back(std::move(y));
                ball.distance.push_back(r);
            }
        }
        frontier_begin = frontier_end;
        ball.count_by_radius.push_back(ball.elements.size());
    }
    return ball;
}

// Word norm oracle: closed form on the lattice with standard generators,
// breadth-first table otherwise (bounded by max_radius).
class WordMetric {
public:
    WordMetric(const GroupHandle& g, const GeneratingSet& s, unsigned max_radius,
               std::size_t budget = 2000000)
        : lattice_(is_standard_lattice(g, s)) {
        if (!lattice_) ball_ = ball_enumerate(g, s, max_radius, budget);
        max_radius_ = max_radius;
    }

    // distance from the identity, or max_radius+1 when outside the table
    unsigned norm(const GroupElement& e) const {
        if (lattice_) {
            long long n = 0;
            for (auto c : e.get<LatticeVec>().coords) n += std::llabs(c);
            return n > max_radius_ ? static_cast<unsigned>(max_radius_ + 1)
                                   : static_cast<unsigned>(n);
        }
        auto it = ball_.dist_of.find(element_key(e));
        return it == ball_.dist_of.end() ? static_cast<unsigned>(max_radius_ + 1) : it->second;
    }

private:
    static bool is_standard_lattice(const GroupHandle& g, const GeneratingSet& s) {
        if (g.impl().kind != detail::Kind::Lattice || g.impl().quotient_mod != 0) return false;
        // standard atoms: unit vectors (plus the identity when lazy)
        for (const auto& a : s.atoms) {
            long long n = 0;
            for (auto c : a.get<LatticeVec>().coords) n += std::llabs(c);
            if (n > 1) return false;
        }
        return true;
    }

    bool lattice_;
    long long max_radius_ = 0;
    BallMap ball_;
};

// ---------------------------------------------------------------------------
// Occupation profiles
// ---------------------------------------------------------------------------

struct OccupationProfile {
    std::vector<unsigned> radii;
    std::vector<double> mean_counts;   // mean |gamma cap B(1,r)| per radius
    std::vector<double> stderrs;
    long long trials = 0;
    bool distinct_vertices = false;    // false: count path time-points
};

inline OccupationProfile occupation_profile(const GroupHandle& g, const GeneratingSet& s,
                                            const LawExpr& expr, int n,
                                            const std::vector<unsigned>& radii, long long trials,
                                            std::uint64_t seed, bool distinct_vertices = false,
                                            int threads = 0) {
    if (radii.empty()) throw ArgumentError("empty radius list");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw ArgumentError("radii must be strictly increasing");
    const int d = num_variables(expr);
    FreeWord word = flatten(expr);
    WordMetric metric(g, s, radii.back());

    struct Acc {
        std::vector<long long> sum, sumsq;
        Acc() = default;
        explicit Acc(std::size_t k) : sum(k, 0), sumsq(k, 0) {}
        Acc& operator+=(const Acc& o) {
            if (sum.empty()) {
                sum = o.sum;
                sumsq = o.sumsq;
                return *this;
            }
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] += o.sum[i];
                sumsq[i] += o.sumsq[i];
            }
            return *this;
        }
    };
    Acc total = parallel_chunks<Acc>(trials, threads, Acc{}, [&](long long lo, long long hi) {
        Acc acc(radii.size());
        for (long long t = lo; t < hi; ++t) {
            std::vector<std::vector<GroupElement>> traces;
            for (int v = 0; v < d; ++v) {
                RngStream rng = derive_stream(seed, {tag(StreamTag::Occupation),
                                                     static_cast<std::uint64_t>(t),
                                                     static_cast<std::uint64_t>(v)});
                traces.push_back(run_walk(g, s, n, rng));
            }
            PathTrace path = word_path(word, g, traces);
            std::vector<long long> counts(radii.size(), 0);
            if (distinct_vertices) {
                std::unordered_set<std::string> seen;
                for (const auto& p : path.points) {
                    if (!seen.insert(element_key(p)).second) continue;
                    unsigned nr = metric.norm(p);
                    for (std::size_t i = 0; i < radii.size(); ++i)
                        if (nr <= radii[i]) ++counts[i];
                }
            } else {
                for (const auto& p : path.points) {
                    unsigned nr = metric.norm(p);
                    for (std::size_t i = 0; i < radii.size(); ++i)
                        if (nr <= radii[i]) ++counts[i];
                }
            }
            for (std::size_t i = 0; i < radii.size(); ++i) {
                acc.sum[i] += counts[i];
                acc.sumsq[i] += counts[i] * counts[i];
            }
        }
        return acc;
    });

    OccupationProfile out;
    out.radii = radii;
    out.trials = trials;
    out.distinct_vertices = distinct_vertices;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double mean = static_cast<double>(total.sum[i]) / static_cast<double>(trials);
        double meansq = static_cast<double>(total.sumsq[i]) / static_cast<double>(trials);
        out.mean_counts.push_back(mean);
        double var = std::max(0.0, meansq - mean * mean);
        out.stderrs.push_back(std::sqrt(var / static_cast<double>(trials)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Uniform-on-ball estimates
// ---------------------------------------------------------------------------

inline Estimate uniform_ball_estimate(const GroupHandle& g, const GeneratingSet& s,
                                      unsigned radius, const LawExpr& expr, long long trials,
                                      std::uint64_t seed, std::size_t budget = 2000000,
                                      int threads = 0) {
    BallMap ball = ball_enumerate(g, s, radius, budget);
    const int d = num_variables(expr);
    long long succ = parallel_count(trials, threads, [&](long long t) {
        RngStream rng =
            derive_stream(seed, {tag(StreamTag::BallSample), static_cast<std::uint64_t>(t)});
        std::vector<GroupElement> assign;
        assign.reserve(d);
        for (int v = 0; v < d; ++v)
            assign.push_back(ball.elements[rng.below(ball.elements.size())]);
        return is_identity_element(evaluate(expr, g, assign));
    });
    return wilson_estimate(succ, trials, seed);
}

// ---------------------------------------------------------------------------
// Sparse linear systems over Z/l
// ---------------------------------------------------------------------------

struct SparseEntry {
    unsigned row, col;
    unsigned value;  // in 1..l-1
};

// A x = v over Z/l with a sparsity certificate: no zero rows, at most k
// nonzeros per row and per column, and per-variable distributions whose
// largest point mass is at most 1 - epsilon.
struct SparseSystem {
    unsigned modulus = 2;
    unsigned rows = 0, cols = 0;
    unsigned sparsity = 1;  // k
    std::vector<SparseEntry> entries;
    std::vector<unsigned> target;
    std::vector<std::vector<double>> dist;  // per column, size modulus

    double epsilon() const {
        double eps = 1.0;
        for (const auto& d : dist) {
            double mx = 0;
            for (double p : d) mx = std::max(mx, p);
            eps = std::min(eps, 1.0 - mx);
        }
        return eps;
    }

    void validate() const {
        if (modulus < 2) throw ArgumentError("sparse system modulus must be at least 2");
        if (rows == 0 || cols == 0) throw ArgumentError("empty sparse system");
        if (dist.size() != cols) throw ArgumentError("one distribution per variable required");
        if (target.size() != rows) throw ArgumentError("target size mismatch");
        std::vector<unsigned> row_nnz(rows, 0), col_nnz(cols, 0);
        for (const auto& e : entries) {
            if (e.row >= rows || e.col >= cols) throw ArgumentError("entry out of range");
            if (e.value == 0 || e.value >= modulus)
                throw ArgumentError("entries must be nonzero residues");
            ++row_nnz[e.row];
            ++col_nnz[e.col];
        }
        for (unsigned r = 0; r < rows; ++r)
            if (row_nnz[r] == 0) throw ArgumentError("sparse system has an identically zero row");
        for (unsigned r = 0; r < rows; ++r)
            if (row_nnz[r] > sparsity) throw ArgumentError("row nonzero bound violated");
        for (unsigned c = 0; c < cols; ++c)
            if (col_nnz[c] > sparsity) throw ArgumentError("column nonzero bound violated");
        for (const auto& d : dist) {
            double sum = 0;
            for (double p : d) {
                if (p < 0) throw ArgumentError("negative probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("distribution does not sum to 1");
        }
        if (epsilon() <= 0) throw ArgumentError("a variable is deterministic (epsilon = 0)");
    }
};

struct SparseHitResult {
    Estimate estimate;
    double bound = 0;          // (1-eps)^ceil(m/k^2)
    bool bound_satisfied = true;  // estimate's ci_lo does not exceed the bound
};

inline SparseHitResult sparse_system_hit_prob(const SparseSystem& sys, long long trials,
                                              std::uint64_t seed, int threads = 0) {
    sys.validate();
    // per-column cumulative distributions for sampling
    std::vector<std::vector<double>> cdf(sys.cols);
    for (unsigned c = 0; c < sys.cols; ++c) {
        double acc = 0;
        for (double p : sys.dist[c]) {
            acc += p;
            cdf[c].push_back(acc);
        }
        cdf[c].back() = 1.0;
    }
    long long succ = parallel_count(trials, threads, [&](long long t) {
        RngStream rng = derive_stream(seed, {tag(StreamTag::Sparse),
                                             static_cast<std::uint64_t>(t)});
        std::vector<unsigned> x(sys.cols);
        for (unsigned c = 0; c < sys.cols; ++c) {
            double u = rng.uniform01();
            unsigned v = 0;
            while (v + 1 < sys.modulus && u > cdf[c][v]) ++v;
            x[c] = v;
        }
        std::vector<unsigned> ax(sys.rows, 0);
        for (const auto& e : sys.entries)
            ax[e.row] = (ax[e.row] + e.value * x[e.col]) % sys.modulus;
        for (unsigned r = 0; r < sys.rows; ++r)
            if (ax[r] != sys.target[r] % sys.modulus) return false;
        return true;
    });
    SparseHitResult out;
    out.estimate = wilson_estimate(succ, trials, seed);
    unsigned k2 = sys.sparsity * sys.sparsity;
    unsigned expo = (sys.rows + k2 - 1) / k2;
    out.bound = std::pow(1.0 - sys.epsilon(), static_cast<double>(expo));
    out.bound_satisfied = out.estimate.ci_lo <= out.bound;
    return out;
}

// Seeded random instance within the given shape limits.
inline SparseSystem random_sparse_system(RngStream& rng, unsigned max_rows, unsigned modulus,
                                         unsigned max_sparsity) {
    SparseSystem sys;
    sys.modulus = modulus;
    sys.rows = 2 + static_cast<unsigned>(rng.below(max_rows - 1));
    sys.cols = sys.rows + static_cast<unsigned>(rng.below(4));
    sys.sparsity = 1 + static_cast<unsigned>(rng.below(max_sparsity));
    std::vector<unsigned> col_nnz(sys.cols, 0);
    for (unsigned r = 0; r < sys.rows; ++r) {
        unsigned want = 1 + static_cast<unsigned>(rng.below(sys.sparsity));
        unsigned placed = 0;
        for (unsigned attempt = 0; attempt < 50 && placed < want; ++attempt) {
            unsigned c = static_cast<unsigned>(rng.below(sys.cols));
            if (col_nnz[c] >= sys.sparsity) continue;
            bool dup = false;
            for (const auto& e : sys.entries) dup |= (e.row == r && e.col == c);
            if (dup) continue;
            sys.entries.push_back(SparseEntry{
                r, c, 1 + static_cast<unsigned>(rng.below(modulus - 1))});
            ++col_nnz[c];
            ++placed;
        }
        if (placed == 0) {
            // fall back to a fresh column to keep the row nonzero
            for (unsigned c = 0; c < sys.cols && placed == 0; ++c) {
                if (col_nnz[c] >= sys.sparsity) continue;
                sys.entries.push_back(SparseEntry{
                    r, c, 1 + static_cast<unsigned>(rng.below(modulus - 1))});
                ++col_nnz[c];
                ++placed;
            }
        }
    }
    for (unsigned c = 0; c < sys.cols; ++c) {
        std::vector<double> d(modulus);
        double sum = 0;
        for (auto& p : d) {
            p = 0.1 + rng.uniform01();
            sum += p;
        }
        for (auto& p : d) p /= sum;
        sys.dist.push_back(std::move(d));
    }
    sys.target.resize(sys.rows, 0);
    if (rng.coin()) {
        // satisfiable target
        std::vector<unsigned> x(sys.cols);
        for (auto& v : x) v = static_cast<unsigned>(rng.below(modulus));
        for (const auto& e : sys.entries)
            sys.target[e.row] = (sys.target[e.row] + e.value * x[e.col]) % modulus;
    } else {
        for (auto& v : sys.target) v = static_cast<unsigned>(rng.below(modulus));
    }
    sys.validate();
    return sys;
}

// ---------------------------------------------------------------------------
// Fits
// ---------------------------------------------------------------------------

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ArgumentError("need two points for a slope");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

inline double loglog_slope(const std::vector<unsigned>& xs, const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] <= 0) throw ArgumentError("log-log fit needs positive values");
        lx.push_back(std::log(static_cast<double>(xs[i])));
        ly.push_back(std::log(ys[i]));
    }
    return least_squares_slope(lx, ly);
}

}  // namespace grouplaw
