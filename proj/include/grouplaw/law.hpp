#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "grouplaw/element.hpp"
#include "grouplaw/errors.hpp"
#include "grouplaw/group.hpp"

namespace grouplaw {

// Abstract syntax of a word in the free group: variables x1..xd, products,
// inverses, integer powers, commutators and conjugations.
//
// Conventions fixed project-wide (and enforced in flatten/evaluate):
//   [a,b] = a b a^-1 b^-1        conj(a,b) = a^b = b a b^-1
class LawExpr {
public:
    enum class Type { Var, Inv, Pow, Mul, Comm, Conj };

    struct Node {
        Type type;
        int var = 0;    // Var
        long exp = 0;   // Pow
        std::shared_ptr<const Node> a, b;
    };
    using NodePtr = std::shared_ptr<const Node>;

    LawExpr() = default;
    explicit LawExpr(NodePtr n) : node_(std::move(n)) {}

    static LawExpr var(int i) {
        if (i < 1) throw ArgumentError("variable index must be positive");
        auto n = std::make_shared<Node>();
        n->type = Type::Var;
        n->var = i;
        return LawExpr(std::move(n));
    }
    static LawExpr inv(LawExpr e) { return unary(Type::Inv, std::move(e)); }
    static LawExpr pow(LawExpr e, long k) {
        auto n = std::make_shared<Node>();
        n->type = Type::Pow;
        n->exp = k;
        n->a = e.node();
        return LawExpr(std::move(n));
    }
    static LawExpr mul(LawExpr a, LawExpr b) { return binary(Type::Mul, std::move(a), std::move(b)); }
    static LawExpr comm(LawExpr a, LawExpr b) { return binary(Type::Comm, std::move(a), std::move(b)); }
    static LawExpr conj(LawExpr a, LawExpr b) { return binary(Type::Conj, std::move(a), std::move(b)); }

    const NodePtr& node() const {
        if (!node_) throw ArgumentError("empty law expression");
        return node_;
    }
    bool valid() const { return node_ != nullptr; }

    bool operator==(const LawExpr& o) const { return equal(node(), o.node()); }
    bool operator!=(const LawExpr& o) const { return !(*this == o); }

private:
    static LawExpr unary(Type t, LawExpr e) {
        auto n = std::make_shared<Node>();
        n->type = t;
        n->a = e.node();
        return LawExpr(std::move(n));
    }
    static LawExpr binary(Type t, LawExpr a, LawExpr b) {
        auto n = std::make_shared<Node>();
        n->type = t;
        n->a = a.node();
        n->b = b.node();
        return LawExpr(std::move(n));
    }
    static bool equal(const NodePtr& x, const NodePtr& y) {
        if (x->type != y->type || x->var != y->var || x->exp != y->exp) return false;
        if (!!x->a != !!y->a || !!x->b != !!y->b) return false;
        if (x->a && !equal(x->a, y->a)) return false;
        if (x->b && !equal(x->b, y->b)) return false;
        return true;
    }

    NodePtr node_;
};

// --- structure queries ------------------------------------------------------

namespace detail {
inline void collect_vars(const LawExpr::NodePtr& n, std::vector<bool>& used) {
    if (n->type == LawExpr::Type::Var) {
        if (static_cast<std::size_t>(n->var) >= used.size()) used.resize(n->var + 1, false);
        used[n->var] = true;
        return;
    }
    if (n->a) collect_vars(n->a, used);
    if (n->b) collect_vars(n->b, used);
}
}  // namespace detail

inline int num_variables(const LawExpr& e) {
    std::vector<bool> used;
    detail::collect_vars(e.node(), used);
    return used.empty() ? 0 : static_cast<int>(used.size() - 1);
}

inline bool variables_contiguous(const LawExpr& e) {
    std::vector<bool> used;
    detail::collect_vars(e.node(), used);
    for (std::size_t i = 1; i < used.size(); ++i)
        if (!used[i]) return false;
    return used.size() > 1;
}

// Shift every variable index by `offset` (used to put laws on disjoint letters).
inline LawExpr rename(const LawExpr& e, int offset) {
    const auto& n = e.node();
    switch (n->type) {
        case LawExpr::Type::Var:
            return LawExpr::var(n->var + offset);
        case LawExpr::Type::Inv:
            return LawExpr::inv(rename(LawExpr(n->a), offset));
        case LawExpr::Type::Pow:
            return LawExpr::pow(rename(LawExpr(n->a), offset), n->exp);
        case LawExpr::Type::Mul:
            return LawExpr::mul(rename(LawExpr(n->a), offset), rename(LawExpr(n->b), offset));
        case LawExpr::Type::Comm:
            return LawExpr::comm(rename(LawExpr(n->a), offset), rename(LawExpr(n->b), offset));
        case LawExpr::Type::Conj:
            return LawExpr::conj(rename(LawExpr(n->a), offset), rename(LawExpr(n->b), offset));
    }
    throw ArgumentError("unreachable");
}

// Derived word: commutator of the law with one fresh variable.
inline LawExpr derive(const LawExpr& e) {
    return LawExpr::comm(e, LawExpr::var(num_variables(e) + 1));
}

// --- flatten ----------------------------------------------------------------

namespace detail {
inline void emit(const LawExpr::NodePtr& n, bool inverted, std::vector<std::int32_t>& out) {
    switch (n->type) {
        case LawExpr::Type::Var:
            freeword_push(out, inverted ? -n->var : n->var);
            return;
        case LawExpr::Type::Inv:
            emit(n->a, !inverted, out);
            return;
        case LawExpr::Type::Pow: {
            long k = n->exp;
            bool inv = inverted != (k < 0);
            unsigned long reps = k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1
                                       : static_cast<unsigned long>(k);
            for (unsigned long i = 0; i < reps; ++i) emit(n->a, inv, out);
            return;
        }
        case LawExpr::Type::Mul:
            if (!inverted) {
                emit(n->a, false, out);
                emit(n->b, false, out);
            } else {
                emit(n->b, true, out);
                emit(n->a, true, out);
            }
            return;
        case LawExpr::Type::Comm:
            if (!inverted) {
                emit(n->a, false, out);
                emit(n->b, false, out);
                emit(n->a, true, out);
                emit(n->b, true, out);
            } else {
                emit(n->b, false, out);
                emit(n->a, false, out);
                emit(n->b, true, out);
                emit(n->a, true, out);
            }
            return;
        case LawExpr::Type::Conj:
            emit(n->b, false, out);
            emit(n->a, inverted, out);
            emit(n->b, true, out);
            return;
    }
}
}  // namespace detail

// Freely reduced letter sequence of the word; errors on a trivial word, since
// a law must be a nontrivial element of the free group.
inline FreeWord flatten(const LawExpr& e) {
    std::vector<std::int32_t> out;
    detail::emit(e.node(), false, out);
    if (out.empty()) throw ArgumentError("law flattens to the empty word");
    return FreeWord{std::move(out)};
}

// Flatten without the nontriviality requirement (for subexpressions/tests).
inline FreeWord flatten_allow_trivial(const LawExpr& e) {
    std::vector<std::int32_t> out;
    detail::emit(e.node(), false, out);
    return FreeWord{std::move(out)};
}

// --- degrees ----------------------------------------------------------------

using DegreeVector = std::vector<long>;

namespace detail {
inline void add_degrees(const LawExpr::NodePtr& n, long mult, DegreeVector& deg) {
    switch (n->type) {
        case LawExpr::Type::Var:
            if (static_cast<std::size_t>(n->var) > deg.size()) deg.resize(n->var, 0);
            deg[n->var - 1] += mult;
            return;
        case LawExpr::Type::Inv:
            add_degrees(n->a, -mult, deg);
            return;
        case LawExpr::Type::Pow:
            add_degrees(n->a, mult * n->exp, deg);
            return;
        case LawExpr::Type::Mul:
            add_degrees(n->a, mult, deg);
            add_degrees(n->b, mult, deg);
            return;
        case LawExpr::Type::Comm:
            return;  // exponent sums cancel
        case LawExpr::Type::Conj:
            add_degrees(n->a, mult, deg);
            return;  // conjugator cancels
    }
}
}  // namespace detail

inline DegreeVector degrees(const LawExpr& e) {
    DegreeVector d(num_variables(e), 0);
    detail::add_degrees(e.node(), 1, d);
    return d;
}

inline bool is_balanced(const LawExpr& e) {
    for (long v : degrees(e))
        if (v != 0) return false;
    return true;
}

// --- evaluation ---------------------------------------------------------------

inline GroupElement evaluate(const LawExpr& e, const GroupHandle& g,
                             const std::vector<GroupElement>& assignment) {
    const auto& n = e.node();
    switch (n->type) {
        case LawExpr::Type::Var:
            if (static_cast<std::size_t>(n->var) > assignment.size())
                throw ArgumentError("law evaluation: not enough assigned elements");
            return assignment[n->var - 1];
        case LawExpr::Type::Inv:
            return inverse(g, evaluate(LawExpr(n->a), g, assignment));
        case LawExpr::Type::Pow:
            return power(g, evaluate(LawExpr(n->a), g, assignment), n->exp);
        case LawExpr::Type::Mul:
            return multiply(g, evaluate(LawExpr(n->a), g, assignment),
                            evaluate(LawExpr(n->b), g, assignment));
        case LawExpr::Type::Comm:
            return commutator(g, evaluate(LawExpr(n->a), g, assignment),
                              evaluate(LawExpr(n->b), g, assignment));
        case LawExpr::Type::Conj:
            return conjugate(g, evaluate(LawExpr(n->a), g, assignment),
                             evaluate(LawExpr(n->b), g, assignment));
    }
    throw ArgumentError("unreachable");
}

// Substitute through the flattened word instead of the AST; used as the
// second algebraic route in property tests.
inline GroupElement evaluate_flat(const LawExpr& e, const GroupHandle& g,
                                  const std::vector<GroupElement>& assignment) {
    FreeWord w = flatten_allow_trivial(e);
    GroupElement r = identity(g);
    for (std::int32_t l : w.letters) {
        std::size_t i = static_cast<std::size_t>(std::abs(l));
        if (i > assignment.size())
            throw ArgumentError("law evaluation: not enough assigned elements");
        const GroupElement& x = assignment[i - 1];
        r = multiply(g, r, l > 0 ? x : inverse(g, x));
    }
    return r;
}

// --- printing -----------------------------------------------------------------

namespace detail {
inline void print_expr(const LawExpr::NodePtr& n, std::string& out) {
    switch (n->type) {
        case LawExpr::Type::Var:
            out += "x" + std::to_string(n->var);
            return;
        case LawExpr::Type::Inv:
        case LawExpr::Type::Pow: {
            long e = n->type == LawExpr::Type::Inv ? -1 : n->exp;
            bool atomic = n->a->type == LawExpr::Type::Var || n->a->type == LawExpr::Type::Comm;
            if (!atomic) out += "(";
            print_expr(n->a, out);
            if (!atomic) out += ")";
            out += "^" + std::to_string(e);
            return;
        }
        case LawExpr::Type::Mul: {
            print_expr(n->a, out);
            out += "*";
            bool paren = n->b->type == LawExpr::Type::Mul;
            if (paren) out += "(";
            print_expr(n->b, out);
            if (paren) out += ")";
            return;
        }
        case LawExpr::Type::Comm:
            out += "[";
            print_expr(n->a, out);
            out += ",";
            print_expr(n->b, out);
            out += "]";
            return;
        case LawExpr::Type::Conj:
            out += "conj(";
            print_expr(n->a, out);
            out += ",";
            print_expr(n->b, out);
            out += ")";
            return;
    }
}
}  // namespace detail

inline std::string law_text(const LawExpr& e) {
    std::string out;
    detail::print_expr(e.node(), out);
    return out;
}

// --- parsing ------------------------------------------------------------------

namespace detail {

// law     := product
// product := factor (('*')? factor)*
// factor  := atom ('^' integer)?          -- '^-1' yields Inv
// atom    := var | '(' product ')' | '[' product ',' product ']'
//          | 'conj' '(' product ',' product ')'
// var     := 'x' digits
class LawParser {
public:
    explicit LawParser(const std::string& s) : s_(s) {}

    LawExpr parse() {
        LawExpr e = product();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected character in law", pos_);
        return e;
    }

private:
    LawExpr product() {
        LawExpr e = factor();
        for (;;) {
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '*') {
                ++pos_;
                e = LawExpr::mul(e, factor());
                continue;
            }
            if (pos_ < s_.size() &&
                (s_[pos_] == 'x' || s_[pos_] == '(' || s_[pos_] == '[' || s_[pos_] == 'c')) {
                e = LawExpr::mul(e, factor());
                continue;
            }
            return e;
        }
    }

    LawExpr factor() {
        LawExpr e = atom();
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            long k = integer();
            e = (k == -1) ? LawExpr::inv(e) : LawExpr::pow(e, k);
        }
        return e;
    }

    LawExpr atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of law", pos_);
        char c = s_[pos_];
        if (c == 'x') {
            ++pos_;
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == start) throw ParseError("expected a variable index after 'x'", pos_);
            return LawExpr::var(std::stoi(s_.substr(start, pos_ - start)));
        }
        if (c == '(') {
            ++pos_;
            LawExpr e = product();
            expect(')');
            return e;
        }
        if (c == '[') {
            ++pos_;
            LawExpr a = product();
            expect(',');
            LawExpr b = product();
            expect(']');
            return LawExpr::comm(a, b);
        }
        if (s_.compare(pos_, 4, "conj") == 0) {
            pos_ += 4;
            expect('(');
            LawExpr a = product();
            expect(',');
            LawExpr b = product();
            expect(')');
            return LawExpr::conj(a, b);
        }
        if (c == '1') throw ParseError("the trivial word is not a law", pos_);
        throw ParseError(std::string("unexpected character '") + c + "' in law", pos_);
    }

    long integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
        std::size_t dstart = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == dstart) throw ParseError("expected an integer exponent", pos_);
        return std::stol(s_.substr(start, pos_ - start));
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw ParseError(std::string("expected '") + c + "' in law", pos_);
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Parse a law from text. Variable indices must form a contiguous range 1..d.
inline LawExpr parse_law(const std::string& text) {
    LawExpr e = detail::LawParser(text).parse();
    if (!variables_contiguous(e))
        throw ParseError("law variables must form a contiguous range x1..xd");
    return e;
}

// --- simple products ----------------------------------------------------------

// All nonempty products of x1^±1..x4^±1 in which every letter appears at most
// once: ordered selections of distinct letters with signs, deduplicated by
// flattened form. There are 632 of them.
inline std::vector<LawExpr> simple_products() {
    std::vector<LawExpr> out;
    std::vector<std::string> seen;
    std::vector<int> letters;
    std::vector<int> signs;
    auto emit_current = [&]() {
        LawExpr e;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            LawExpr f = LawExpr::var(letters[i]);
            if (signs[i] < 0) f = LawExpr::inv(f);
            e = e.valid() ? LawExpr::mul(e, f) : f;
        }
        ByteWriter w;
        for (auto l : flatten(e).letters) w.svarint(l);
        std::string key = w.take();
        for (const auto& s : seen)
            if (s == key) return;
        seen.push_back(std::move(key));
        out.push_back(std::move(e));
    };
    auto rec = [&](auto&& self) -> void {
        if (!letters.empty()) emit_current();
        if (letters.size() == 4) return;
        for (int v = 1; v <= 4; ++v) {
            bool used = false;
            for (int l : letters) used |= (l == v);
            if (used) continue;
            for (int s : {1, -1}) {
                letters.push_back(v);
                signs.push_back(s);
                self(self);
                letters.pop_back();
                signs.pop_back();
            }
        }
    };
    rec(rec);
    return out;
}

}  // namespace grouplaw
