#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grouplaw/finite.hpp"
#include "grouplaw/law.hpp"
#include "grouplaw/rng.hpp"

namespace grouplaw {

// A claim that lhs = rhs, either in every group (unconditional: decided by
// free reduction) or under hypotheses that must evaluate to the identity
// (conditional: checked on finite models). Letters a,b,c,d map to x1..x4.
struct IdentityClaim {
    std::string name;
    enum class Kind { Unconditional, Conditional } kind = Kind::Unconditional;
    LawExpr lhs;
    std::optional<LawExpr> rhs;           // absent: rhs is the identity
    std::vector<LawExpr> hypotheses;      // each must equal the identity
    bool goodness_hypotheses = false;     // hypotheses = "x1..x4 are good"

    int letters() const {
        int n = num_variables(lhs);
        if (rhs) n = std::max(n, num_variables(*rhs));
        for (const auto& h : hypotheses) n = std::max(n, num_variables(h));
        if (goodness_hypotheses) n = std::max(n, 4);
        return n;
    }

    // lhs * rhs^-1, the word that must die for the claim to hold
    LawExpr difference() const { return rhs ? LawExpr::mul(lhs, LawExpr::inv(*rhs)) : lhs; }
};

// True iff the claim holds in every group, i.e. lhs * rhs^-1 freely reduces
// to the empty word. Sound and complete for unconditional claims: the free
// group is the universal model.
inline bool verify_free_identity(const IdentityClaim& claim) {
    if (claim.kind != IdentityClaim::Kind::Unconditional)
        throw ArgumentError("free verification applies to unconditional claims only");
    return flatten_allow_trivial(claim.difference()).letters.empty();
}

struct Counterexample {
    std::string claim;
    std::vector<std::uint32_t> assignment;   // element indices into the table
    std::vector<GroupElement> elements;
};

struct ExhaustiveMode {
    long long budget = 100000000;
};
struct SampledMode {
    long long trials = 100000;
    std::uint64_t seed = 0;
};
using CheckMode = std::variant<ExhaustiveMode, SampledMode>;

namespace detail {

inline bool quadruple_is_good_indexed(const FiniteGroupTable& t,
                                      const std::vector<bool>& cube_trivial,
                                      const std::uint32_t x[4], const std::uint32_t xi[4]) {
    // shared-prefix walk over all simple products of x1..x4
    std::uint32_t stack[5];
    int choice_letter[5];
    stack[0] = t.identity_index();
    bool used[4] = {false, false, false, false};
    struct Frame {
        int letter;
        int sign;
    };
    // iterative DFS over (letter, sign) choices at each depth
    Frame frames[5];
    int depth = 0;
    frames[0] = {0, 0};
    (void)choice_letter;
    for (;;) {
        Frame& f = frames[depth];
        // advance to the next (letter, sign) pair
        bool advanced = false;
        while (!advanced) {
            if (f.sign == 0) {
                f.sign = 1;
            } else if (f.sign == 1) {
                f.sign = -1;
            } else {
                ++f.letter;
                f.sign = 1;
            }
            if (f.letter >= 4) break;
            if (!used[f.letter]) advanced = true;
        }
        if (!advanced) {
            if (depth == 0) return true;
            --depth;
            used[frames[depth].letter] = false;
            continue;
        }
        std::uint32_t next =
            t.mul(stack[depth], f.sign > 0 ? x[f.letter] : xi[f.letter]);
        if (!cube_trivial[next]) return false;
        if (depth + 1 < 4) {
            used[f.letter] = true;
            stack[depth + 1] = next;
            ++depth;
            frames[depth] = {0, 0};
        }
    }
}

inline bool claim_holds_at(const IdentityClaim& claim, const FiniteGroupTable& t,
                           const std::vector<std::uint32_t>& assign,
                           const std::vector<bool>* cube_trivial) {
    if (claim.goodness_hypotheses) {
        std::uint32_t x[4], xi[4];
        for (int i = 0; i < 4; ++i) {
            x[i] = assign[i];
            xi[i] = t.inv(assign[i]);
        }
        if (!quadruple_is_good_indexed(t, *cube_trivial, x, xi)) return true;  // vacuous
    }
    for (const auto& h : claim.hypotheses)
        if (evaluate_indexed(h, t, assign) != t.identity_index()) return true;  // vacuous
    return evaluate_indexed(claim.difference(), t, assign) == t.identity_index();
}

}  // namespace detail

// Search for an assignment satisfying the hypotheses but violating the
// conclusion. Returns the first one in enumeration order (exhaustive) or in
// trial order (sampled); nullopt means verified on this model.
inline std::optional<Counterexample> conditional_check(const IdentityClaim& claim,
                                                       const FiniteGroupTable& t,
                                                       const CheckMode& mode, int threads = 0) {
    if (claim.kind != IdentityClaim::Kind::Conditional)
        throw ArgumentError("conditional check applies to conditional claims only");
    const int L = claim.letters();
    const std::uint32_t n = t.order();
    std::vector<bool> cube_trivial;
    if (claim.goodness_hypotheses) {
        cube_trivial.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint32_t c = t.mul(t.mul(i, i), i);
            cube_trivial[i] = c == t.identity_index();
        }
    }
    const std::vector<bool>* cubes = claim.goodness_hypotheses ? &cube_trivial : nullptr;

    auto assignment_of = [&](long long idx) {
        std::vector<std::uint32_t> assign(L);
        for (int v = 0; v < L; ++v) {
            assign[v] = static_cast<std::uint32_t>(idx % n);
            idx /= n;
        }
        return assign;
    };

    long long first_bad = -1;
    if (const auto* ex = std::get_if<ExhaustiveMode>(&mode)) {
        double total = 1;
        for (int i = 0; i < L; ++i) total *= static_cast<double>(n);
        if (total > static_cast<double>(ex->budget))
            throw BudgetError("exhaustive identity search exceeds the tuple budget");
        long long tuples = 1;
        for (int i = 0; i < L; ++i) tuples *= n;
        struct Min {
            long long v = -1;
            Min& operator+=(const Min& o) {
                if (o.v >= 0 && (v < 0 || o.v < v)) v = o.v;
                return *this;
            }
        };
        first_bad = parallel_chunks<Min>(tuples, threads, Min{},
                                         [&](long long lo, long long hi) {
                                             Min m;
                                             for (long long i = lo; i < hi; ++i) {
                                                 if (!detail::claim_holds_at(
                                                         claim, t, assignment_of(i), cubes)) {
                                                     m.v = i;
                                                     break;
                                                 }
                                             }
                                             return m;
                                         })
                        .v;
        if (first_bad < 0) return std::nullopt;
        Counterexample c;
        c.claim = claim.name;
        c.assignment = assignment_of(first_bad);
        for (auto i : c.assignment) c.elements.push_back(t.element(i));
        return c;
    }

    const auto& sm = std::get<SampledMode>(mode);
    struct Min {
        long long v = -1;
        Min& operator+=(const Min& o) {
            if (o.v >= 0 && (v < 0 || o.v < v)) v = o.v;
            return *this;
        }
    };
    auto sample_assign = [&](long long trial) {
        RngStream rng = derive_stream(sm.seed, {tag(StreamTag::Fuzz),
                                                static_cast<std::uint64_t>(trial)});
        std::vector<std::uint32_t> assign(L);
        for (int v = 0; v < L; ++v) assign[v] = static_cast<std::uint32_t>(rng.below(n));
        return assign;
    };
    first_bad = parallel_chunks<Min>(sm.trials, threads, Min{},
                                     [&](long long lo, long long hi) {
                                         Min m;
                                         for (long long i = lo; i < hi; ++i) {
                                             if (!detail::claim_holds_at(claim, t,
                                                                         sample_assign(i), cubes)) {
                                                 m.v = i;
                                                 break;
                                             }
                                         }
                                         return m;
                                     })
                    .v;
    if (first_bad < 0) return std::nullopt;
    Counterexample c;
    c.claim = claim.name;
    c.assignment = sample_assign(first_bad);
    for (auto i : c.assignment) c.elements.push_back(t.element(i));
    return c;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------
//
// One claim per line:
//   unconditional NAME : LHS = RHS
//   conditional NAME : HYP1 ; HYP2 ; ... => LHS = RHS
//   conditional-goodness NAME : => LHS = RHS
// RHS may be the literal 1. Blank lines and '#' comments are skipped.

inline IdentityClaim parse_claim_line(const std::string& line) {
    auto fail = [&](const std::string& what) { throw ParseError(what + ": " + line); };
    std::istringstream in(line);
    std::string kindword, name, colon;
    in >> kindword >> name >> colon;
    if (colon != ":") fail("expected ':' after the claim name");
    std::string rest;
    std::getline(in, rest);

    IdentityClaim c;
    c.name = name;
    std::string eq_part = rest;
    if (kindword == "unconditional") {
        c.kind = IdentityClaim::Kind::Unconditional;
    } else if (kindword == "conditional" || kindword == "conditional-goodness") {
        c.kind = IdentityClaim::Kind::Conditional;
        c.goodness_hypotheses = kindword == "conditional-goodness";
        std::size_t arrow = rest.find("=>");
        if (arrow == std::string::npos) fail("conditional claim needs '=>'");
        std::string hyps = rest.substr(0, arrow);
        eq_part = rest.substr(arrow + 2);
        std::size_t start = 0;
        while (start < hyps.size()) {
            std::size_t sep = hyps.find(';', start);
            std::string h = hyps.substr(start, sep == std::string::npos ? sep : sep - start);
            std::size_t a = h.find_first_not_of(" \t");
            if (a != std::string::npos) {
                c.hypotheses.push_back(detail::LawParser(h).parse());
            } else if (!c.goodness_hypotheses) {
                fail("empty hypothesis");
            }
            if (sep == std::string::npos) break;
            start = sep + 1;
        }
    } else {
        fail("unknown claim kind '" + kindword + "'");
    }

    std::size_t eq = std::string::npos;
    int depth = 0;  // '=' inside conj(...) arguments cannot occur, but guard brackets anyway
    for (std::size_t i = 0; i < eq_part.size(); ++i) {
        char ch = eq_part[i];
        if (ch == '(' || ch == '[') ++depth;
        if (ch == ')' || ch == ']') --depth;
        if (ch == '=' && depth == 0) {
            eq = i;
            break;
        }
    }
    if (eq == std::string::npos) fail("claim needs 'LHS = RHS'");
    std::string lhs = eq_part.substr(0, eq);
    std::string rhs = eq_part.substr(eq + 1);
    c.lhs = detail::LawParser(lhs).parse();
    std::size_t a = rhs.find_first_not_of(" \t");
    std::size_t b = rhs.find_last_not_of(" \t");
    if (a == std::string::npos) fail("empty right-hand side");
    std::string rtrim = rhs.substr(a, b - a + 1);
    if (rtrim != "1") c.rhs = detail::LawParser(rtrim).parse();
    return c;
}

inline std::vector<IdentityClaim> parse_manifest(const std::string& text) {
    std::vector<IdentityClaim> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        out.push_back(parse_claim_line(line));
    }
    return out;
}

inline std::string claim_text(const IdentityClaim& c) {
    std::string out;
    if (c.kind == IdentityClaim::Kind::Unconditional) {
        out = "unconditional " + c.name + " : ";
    } else {
        out = (c.goodness_hypotheses ? "conditional-goodness " : "conditional ") + c.name + " : ";
        for (std::size_t i = 0; i < c.hypotheses.size(); ++i) {
            if (i) out += " ; ";
            out += law_text(c.hypotheses[i]);
        }
        out += " => ";
    }
    out += law_text(c.lhs) + " = " + (c.rhs ? law_text(*c.rhs) : std::string("1"));
    return out;
}

// The registered identity chain: the unconditional identities verified by
// free reduction, the cube-law consequences checked on finite models, and the
// goodness conclusion. Letters a,b,c,d are written x1..x4.
inline const std::string& builtin_manifest_text() {
    static const std::string text = R"(# unconditional identities (hold in every group)
unconditional conj-product-cubes : [conj(x1,x2),x1] = conj(x1*x2^-1,x2)^3*(x2^2*x1^-1)^3*conj(x2^-1,x1)^3
unconditional comm-of-product-right : [x1,x2*x3] = [x1,x2]*conj([x1,x3],x2)
unconditional comm-of-product-left : [x1*x2,x3] = conj([x2,x3],x1)*[x1,x3]

# conditional form of the identity above
conditional cubes-give-conj-comm : x2^3 ; (x1*x2)^3 ; (x1*x2^-1)^3 => [conj(x1,x2),x1] = 1

# consequences of [a^b,a]=1 and a^3=1
conditional comm-cube : [conj(x1,x2),x1] ; x1^3 => [x1,x2]^3 = 1
conditional two-engel : [conj(x1,x2),x1] ; x1^3 => [[x2,x1],x1] = 1
conditional comm-inverse-slide : [conj(x1,x2),x1] ; x1^3 => [x1,x2]^-1 = [x1^-1,x2]

# commutator transposition and cyclic rotation
conditional comm-transpose : [conj(x1,x2),x1] ; [conj(x1,x3),x1] ; [conj(x1,x2),conj(x1,x3)] ; [conj(x2,x1),x2] ; [conj(x2*x3,x1),x2*x3] ; [conj(x3,x2),x3] ; [conj(x3,x2*x1),x3] => [[x1,x2],x3]^-1 = [[x1,x3],x2]
conditional comm-cycle : [[x1,x2],x3]*[[x1,x3],x2] ; [conj([x1,x3],x2),[x1,x3]] => [[x1,x2],x3] = [[x3,x1],x2]

# cube of an element times a commutator
conditional cube-with-comm : x1^3 ; (x1*x2*x3)^3 ; (x1*x3)^3 ; (x1*x3*x2^-1)^3 ; (x1*x3^-1)^3 ; [conj(x2,x1),x2] ; [conj(x2,x3),x2] ; [conj(x3,x2),x3] ; [conj(x3,x1),conj(x3,x2)] => (x1*[x2,x3])^3 = 1

# expansion steps used inside the cube-with-comm derivation
conditional expand-abc : (x1*x2*x3)^3 => x2*x3*x1*x2*x3 = x1^-1*x3^-1*x2^-1*x1^-1
conditional expand-ac : (x1*x3)^3 => x3^-1*x1^-1*x3^-1 = x1*x3*x1
conditional expand-acb : (x1*x3*x2^-1)^3 => x2^-1*x1*x3*x2^-1*x1 = x3^-1*x1^-1*x2*x3^-1
conditional expand-acinv : (x1*x3^-1)^3 => x1*x3^-1*x1*x3^-1 = x3*x1^-1

# good quadruples have a trivial fourfold commutator
conditional-goodness good-quadruple-nilpotent : => [[[x1,x2],x3],x4] = 1
)";
    return text;
}

inline std::vector<IdentityClaim> builtin_manifest() {
    return parse_manifest(builtin_manifest_text());
}

}  // namespace grouplaw
