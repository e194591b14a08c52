#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "grouplaw/bigint.hpp"
#include "grouplaw/descriptor_text.hpp"
#include "grouplaw/gens.hpp"
#include "grouplaw/law.hpp"
#include "grouplaw/parallel.hpp"

namespace grouplaw {

// Indexed element table of a finite group. Multiplication goes through a flat
// index table when the order is small enough, and through the kernel above
// that.
class FiniteGroupTable {
public:
    FiniteGroupTable(GroupHandle g, std::vector<GroupElement> elements, std::size_t table_limit)
        : group_(std::move(g)), elements_(std::move(elements)) {
        index_.reserve(elements_.size() * 2);
        for (std::uint32_t i = 0; i < elements_.size(); ++i)
            index_.emplace(element_key(elements_[i]), i);
        if (index_.size() != elements_.size())
            throw ConstructionError("finite table has duplicate elements");
        identity_ = index_of(identity(group_));
        inverse_.resize(elements_.size());
        for (std::uint32_t i = 0; i < elements_.size(); ++i)
            inverse_[i] = index_of(inverse(group_, elements_[i]));
        if (elements_.size() <= table_limit) {
            const std::size_t n = elements_.size();
            mult_.resize(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    mult_[i * n + j] = index_of(multiply(group_, elements_[i], elements_[j]));
        }
    }

    const GroupHandle& group() const { return group_; }
    std::uint32_t order() const { return static_cast<std::uint32_t>(elements_.size()); }
    const GroupElement& element(std::uint32_t i) const { return elements_[i]; }
    const std::vector<GroupElement>& elements() const { return elements_; }
    std::uint32_t identity_index() const { return identity_; }
    bool has_mult_table() const { return !mult_.empty(); }

    std::uint32_t index_of(const GroupElement& e) const {
        auto it = index_.find(element_key(e));
        if (it == index_.end()) throw TypeError("element is not in the finite table");
        return it->second;
    }

    std::uint32_t mul(std::uint32_t i, std::uint32_t j) const {
        if (!mult_.empty()) return mult_[static_cast<std::size_t>(i) * elements_.size() + j];
        return index_of(multiply(group_, elements_[i], elements_[j]));
    }

    std::uint32_t inv(std::uint32_t i) const { return inverse_[i]; }

private:
    GroupHandle group_;
    std::vector<GroupElement> elements_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::uint32_t identity_ = 0;
    std::vector<std::uint32_t> inverse_;
    std::vector<std::uint32_t> mult_;
};

namespace detail {

inline void enumerate_into(const GroupHandle& g, std::vector<GroupElement>& out,
                           std::size_t budget) {
    const auto& impl = g.impl();
    auto guard = [&](std::size_t expected) {
        if (expected > budget) throw BudgetError("finite enumeration exceeds the element budget");
    };
    switch (impl.kind) {
        case Kind::Cyclic: {
            guard(impl.rank);
            for (unsigned v = 0; v < impl.rank; ++v)
                out.push_back(CyclicResidue{v, impl.rank});
            return;
        }
        case Kind::Symmetric: {
            if (impl.rank > 6)
                throw BudgetError("symmetric group enumeration supported up to degree 6");
            std::size_t fact = 1;
            for (unsigned i = 2; i <= impl.rank; ++i) fact *= i;
            guard(fact);
            std::vector<std::uint8_t> im(impl.rank);
            for (unsigned i = 0; i < impl.rank; ++i) im[i] = static_cast<std::uint8_t>(i);
            do {
                out.push_back(PermElem{im});
            } while (std::next_permutation(im.begin(), im.end()));
            return;
        }
        case Kind::Quaternion: {
            auto all = bfs_closure(g, standard_generators(g, false).atoms, 16);
            if (all.size() != 8) throw ConstructionError("quaternion closure has wrong order");
            out = std::move(all);
            return;
        }
        case Kind::Lattice: {
            if (!impl.quotient_mod) break;
            std::size_t n = 1;
            for (unsigned i = 0; i < impl.rank; ++i) {
                n *= impl.quotient_mod;
                guard(n);
            }
            std::vector<std::int64_t> c(impl.rank, 0);
            for (;;) {
                out.push_back(make_lattice(c));
                unsigned i = 0;
                while (i < impl.rank && c[i] + 1 == impl.quotient_mod) c[i++] = 0;
                if (i == impl.rank) break;
                ++c[i];
            }
            return;
        }
        case Kind::Semidirect: {
            if (!impl.quotient_mod) break;
            std::size_t n = impl.rank;
            for (unsigned i = 0; i < impl.dim; ++i) {
                n *= impl.quotient_mod;
                guard(n);
            }
            std::vector<BigInt> v(impl.dim, 0);
            for (;;) {
                for (unsigned k = 0; k < impl.rank; ++k)
                    out.push_back(GroupElement(SemidirectElem{v, CyclicResidue{k, impl.rank}}));
                unsigned i = 0;
                while (i < impl.dim && v[i] + 1 == impl.quotient_mod) v[i++] = 0;
                if (i == impl.dim) break;
                ++v[i];
            }
            return;
        }
        case Kind::Heisenberg:
        case Kind::HeisenbergSemidirect: {
            if (!impl.quotient_mod) break;
            unsigned coords = 2 * impl.dim + 1;
            std::size_t n = impl.kind == Kind::HeisenbergSemidirect ? impl.rank : 1;
            for (unsigned i = 0; i < coords; ++i) {
                n *= impl.quotient_mod;
                guard(n);
            }
            std::vector<BigInt> flat(coords, 0);
            for (;;) {
                HeisenbergElem h;
                h.u.assign(flat.begin(), flat.begin() + impl.dim);
                h.a = flat[impl.dim];
                h.v.assign(flat.begin() + impl.dim + 1, flat.end());
                if (impl.kind == Kind::Heisenberg) {
                    out.push_back(GroupElement(h));
                } else {
                    for (unsigned k = 0; k < impl.rank; ++k) {
                        TupleElem t;
                        t.parts.emplace_back(h);
                        t.parts.emplace_back(CyclicResidue{k, impl.rank});
                        out.push_back(GroupElement(std::move(t)));
                    }
                }
                unsigned i = 0;
                while (i < coords && flat[i] + 1 == impl.quotient_mod) flat[i++] = 0;
                if (i == coords) break;
                ++flat[i];
            }
            return;
        }
        case Kind::Product: {
            std::vector<std::vector<GroupElement>> parts(g.factor_count());
            std::size_t total = 1;
            for (std::size_t i = 0; i < g.factor_count(); ++i) {
                enumerate_into(g.factor(i), parts[i], budget);
                total *= parts[i].size();
                guard(total);
            }
            std::vector<std::size_t> idx(parts.size(), 0);
            for (;;) {
                TupleElem t;
                for (std::size_t i = 0; i < parts.size(); ++i) t.parts.push_back(parts[i][idx[i]]);
                out.push_back(GroupElement(std::move(t)));
                std::size_t i = 0;
                while (i < parts.size() && idx[i] + 1 == parts[i].size()) idx[i++] = 0;
                if (i == parts.size()) break;
                ++idx[i];
            }
            return;
        }
        default:
            break;
    }
    throw ArgumentError("descriptor does not name a finite construction: " +
                        descriptor_text(g.descriptor()));
}

}  // namespace detail

// Complete element list of a finite construction. Orders of the named finite
// families are validated against their known values.
inline FiniteGroupTable enumerate_group(const GroupHandle& g, std::size_t budget = 1u << 20,
                                        std::size_t mult_table_limit = 1024) {
    std::vector<GroupElement> elements;
    detail::enumerate_into(g, elements, budget);
    if (auto* dm = g.descriptor().get_if<FiniteDihedralD>()) {
        if (elements.size() != 2u * dm->m) throw ConstructionError("dihedral order mismatch");
    } else if (g.descriptor().get_if<FiniteExtraspecial3D>()) {
        if (elements.size() != 27) throw ConstructionError("extraspecial order mismatch");
    } else if (g.descriptor().get_if<FiniteQuaternionD>()) {
        if (elements.size() != 8) throw ConstructionError("quaternion order mismatch");
    }
    return FiniteGroupTable(g, std::move(elements), mult_table_limit);
}

inline FiniteGroupTable enumerate_group(const Descriptor& d, std::size_t budget = 1u << 20) {
    return enumerate_group(build_group(d), budget);
}

// Exact probability as a reduced fraction.
struct ExactProbability {
    BigInt num = 0;
    BigInt den = 1;

    ExactProbability() = default;
    ExactProbability(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
        if (den <= 0) throw ArgumentError("probability denominator must be positive");
        BigInt g = big_gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num < 0 || num > den) throw ArgumentError("probability out of [0,1]");
    }

    double value() const { return num.convert_to<double>() / den.convert_to<double>(); }
    bool operator==(const ExactProbability&) const = default;
    bool operator<(const ExactProbability& o) const { return num * o.den < o.num * den; }
    std::string str() const { return num.str() + "/" + den.str(); }
};

namespace detail {

inline std::uint32_t eval_indexed(const LawExpr::NodePtr& n, const FiniteGroupTable& t,
                                  const std::vector<std::uint32_t>& assignment) {
    using T = LawExpr::Type;
    switch (n->type) {
        case T::Var:
            return assignment[n->var - 1];
        case T::Inv:
            return t.inv(eval_indexed(n->a, t, assignment));
        case T::Pow: {
            std::uint32_t b = eval_indexed(n->a, t, assignment);
            long k = n->exp;
            if (k < 0) {
                b = t.inv(b);
                k = -k;
            }
            std::uint32_t r = t.identity_index();
            for (long i = 0; i < k; ++i) r = t.mul(r, b);
            return r;
        }
        case T::Mul:
            return t.mul(eval_indexed(n->a, t, assignment), eval_indexed(n->b, t, assignment));
        case T::Comm: {
            std::uint32_t a = eval_indexed(n->a, t, assignment);
            std::uint32_t b = eval_indexed(n->b, t, assignment);
            return t.mul(t.mul(a, b), t.mul(t.inv(a), t.inv(b)));
        }
        case T::Conj: {
            std::uint32_t a = eval_indexed(n->a, t, assignment);
            std::uint32_t b = eval_indexed(n->b, t, assignment);
            return t.mul(t.mul(b, a), t.inv(b));
        }
    }
    throw ArgumentError("unreachable");
}

inline bool is_plain_commutator(const LawExpr& e) {
    const auto& n = e.node();
    return n->type == LawExpr::Type::Comm && n->a->type == LawExpr::Type::Var &&
           n->b->type == LawExpr::Type::Var && n->a->var == 1 && n->b->var == 2;
}

}  // namespace detail

inline std::uint32_t evaluate_indexed(const LawExpr& e, const FiniteGroupTable& t,
                                      const std::vector<std::uint32_t>& assignment) {
    if (static_cast<int>(assignment.size()) < num_variables(e))
        throw ArgumentError("not enough assigned indices");
    return detail::eval_indexed(e.node(), t, assignment);
}

// Exact satisfaction probability over uniform tuples. [x1,x2] uses the
// centralizer sum; everything else enumerates |G|^d tuples under a hard
// budget.
inline ExactProbability exact_law_probability(const FiniteGroupTable& t, const LawExpr& expr,
                                              long long budget = 100000000, int threads = 0) {
    const int d = num_variables(expr);
    if (d < 1) throw ArgumentError("law has no variables");
    const std::uint32_t n = t.order();

    if (d == 2 && detail::is_plain_commutator(expr)) {
        long long count = parallel_chunks<long long>(
            n, threads, 0, [&](long long lo, long long hi) {
                long long c = 0;
                for (long long g = lo; g < hi; ++g)
                    for (std::uint32_t h = 0; h < n; ++h)
                        if (t.mul(static_cast<std::uint32_t>(g), h) ==
                            t.mul(h, static_cast<std::uint32_t>(g)))
                            ++c;
                return c;
            });
        return ExactProbability(count, BigInt(n) * n);
    }

    double size = 1;
    for (int i = 0; i < d; ++i) size *= static_cast<double>(n);
    if (size > static_cast<double>(budget))
        throw BudgetError("exact enumeration exceeds the tuple budget");

    long long tuples = 1;
    for (int i = 0; i < d; ++i) tuples *= n;
    long long count = parallel_chunks<long long>(
        tuples, threads, 0, [&](long long lo, long long hi) {
            long long c = 0;
            std::vector<std::uint32_t> assign(d);
            for (long long t0 = lo; t0 < hi; ++t0) {
                long long rem = t0;
                for (int v = 0; v < d; ++v) {
                    assign[v] = static_cast<std::uint32_t>(rem % n);
                    rem /= n;
                }
                if (evaluate_indexed(expr, t, assign) == t.identity_index()) ++c;
            }
            return c;
        });
    BigInt den = 1;
    for (int i = 0; i < d; ++i) den *= n;
    return ExactProbability(count, den);
}

// Element order within a finite table.
inline unsigned element_order(const FiniteGroupTable& t, std::uint32_t i) {
    std::uint32_t cur = i;
    unsigned ord = 1;
    while (cur != t.identity_index()) {
        cur = t.mul(cur, i);
        ++ord;
        if (ord > t.order()) throw ConstructionError("order computation runaway");
    }
    return ord;
}

// Running infimum of exact probabilities over a family of finite quotients.
struct QuotientStep {
    std::string descriptor;
    std::uint32_t order;
    ExactProbability probability;
    ExactProbability running_inf;
};

inline std::vector<QuotientStep> quotient_family_infimum(const std::vector<Descriptor>& family,
                                                         const LawExpr& expr,
                                                         std::size_t count_limit = 0,
                                                         long long budget = 100000000,
                                                         int threads = 0) {
    std::vector<QuotientStep> out;
    std::optional<ExactProbability> inf;
    for (const auto& d : family) {
        if (count_limit && out.size() >= count_limit) break;
        FiniteGroupTable t = enumerate_group(build_group(d));
        ExactProbability p = exact_law_probability(t, expr, budget, threads);
        if (!inf || p < *inf) inf = p;
        out.push_back(QuotientStep{descriptor_text(d), t.order(), p, *inf});
    }
    return out;
}

}  // namespace grouplaw
