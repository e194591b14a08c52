#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "grouplaw/bigint.hpp"
#include "grouplaw/errors.hpp"
#include "grouplaw/serialize.hpp"

namespace grouplaw {

class GroupElement;

// A freely reduced word: letters are nonzero signed generator indices,
// +i for generator i, -i for its inverse (1-based). The empty word is the
// identity; no adjacent pair cancels.
struct FreeWord {
    std::vector<std::int32_t> letters;
    bool operator==(const FreeWord&) const = default;
};

struct LatticeVec {
    std::vector<std::int64_t> coords;
    bool operator==(const LatticeVec&) const = default;
};

struct CyclicResidue {
    std::uint32_t value = 0;    // always in [0, modulus)
    std::uint32_t modulus = 1;
    bool operator==(const CyclicResidue&) const = default;
};

struct SemidirectElem {
    std::vector<BigInt> vec;
    CyclicResidue rot;
    bool operator==(const SemidirectElem&) const = default;
};

struct HeisenbergElem {
    std::vector<BigInt> u;
    BigInt a;
    std::vector<BigInt> v;
    bool operator==(const HeisenbergElem&) const = default;
};

struct PermElem {
    std::vector<std::uint8_t> images;  // images[i] = where point i goes
    bool operator==(const PermElem&) const = default;
};

// Sparse lamp configuration plus lamplighter position. Lamps are kept in
// strictly increasing order of the serialized base key; no value is the lamp
// identity. `pos` boxes exactly one base element (vector sidesteps the
// recursive-type restriction).
struct WreathElem {
    std::vector<std::string> keys;          // serialized base elements
    std::vector<GroupElement> key_elems;    // parallel to keys
    std::vector<GroupElement> values;       // parallel to keys
    std::vector<GroupElement> pos;          // size 1

    bool operator==(const WreathElem&) const;
};

struct TupleElem {
    std::vector<GroupElement> parts;
    bool operator==(const TupleElem&) const;
};

class GroupElement {
public:
    using Variant = std::variant<FreeWord, LatticeVec, CyclicResidue, SemidirectElem,
                                 HeisenbergElem, PermElem, WreathElem, TupleElem>;

    GroupElement() : v_(FreeWord{}) {}
    GroupElement(FreeWord w) : v_(std::move(w)) {}
    GroupElement(LatticeVec w) : v_(std::move(w)) {}
    GroupElement(CyclicResidue w) : v_(std::move(w)) {}
    GroupElement(SemidirectElem w) : v_(std::move(w)) {}
    GroupElement(HeisenbergElem w) : v_(std::move(w)) {}
    GroupElement(PermElem w) : v_(std::move(w)) {}
    GroupElement(WreathElem w) : v_(std::move(w)) {}
    GroupElement(TupleElem w) : v_(std::move(w)) {}

    const Variant& v() const { return v_; }
    Variant& v() { return v_; }

    template <class T>
    const T* get_if() const {
        return std::get_if<T>(&v_);
    }
    template <class T>
    const T& get() const {
        const T* p = std::get_if<T>(&v_);
        if (!p) throw TypeError("group element has unexpected representation");
        return *p;
    }

    bool operator==(const GroupElement& o) const { return v_ == o.v_; }
    bool operator!=(const GroupElement& o) const { return !(v_ == o.v_); }

private:
    Variant v_;
};

inline bool WreathElem::operator==(const WreathElem& o) const {
    return keys == o.keys && values == o.values && pos == o.pos;
}

inline bool TupleElem::operator==(const TupleElem& o) const { return parts == o.parts; }

// --- free word reduction -------------------------------------------------

inline void freeword_push(std::vector<std::int32_t>& out, std::int32_t letter) {
    if (letter == 0) throw ArgumentError("free word letter must be nonzero");
    if (!out.empty() && out.back() == -letter)
        out.pop_back();
    else
        out.push_back(letter);
}

inline FreeWord freeword_reduce(const std::vector<std::int32_t>& letters) {
    FreeWord w;
    w.letters.reserve(letters.size());
    for (std::int32_t l : letters) freeword_push(w.letters, l);
    return w;
}

inline FreeWord freeword_mul(const FreeWord& a, const FreeWord& b) {
    FreeWord w = a;
    for (std::int32_t l : b.letters) freeword_push(w.letters, l);
    return w;
}

inline FreeWord freeword_inverse(const FreeWord& a) {
    FreeWord w;
    w.letters.reserve(a.letters.size());
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) w.letters.push_back(-*it);
    return w;
}

// --- serialization --------------------------------------------------------

namespace detail {

enum class ElemTag : unsigned char {
    Free = 1,
    Lattice = 2,
    Cyclic = 3,
    Semidirect = 4,
    Heisenberg = 5,
    Perm = 6,
    Wreath = 7,
    Tuple = 8,
};

inline void serialize_body(const GroupElement& e, ByteWriter& w);

struct SerializeVisitor {
    ByteWriter& w;
    void operator()(const FreeWord& x) const {
        w.u8(static_cast<unsigned char>(ElemTag::Free));
        w.uvarint(x.letters.size());
        for (auto l : x.letters) w.svarint(l);
    }
    void operator()(const LatticeVec& x) const {
        w.u8(static_cast<unsigned char>(ElemTag::Lattice));
        w.uvarint(x.coords.size());
        for (auto c : x.coords) w.svarint(c);
    }
    void operator()(const CyclicResidue& x) const {
        w.u8(static_cast<unsigned char>(ElemTag::Cyclic));
        w.uvarint(x.modulus);
        w.uvarint(x.value);
    }
    void operator()(const SemidirectElem& x) const {
        w.u8(static_cast<unsigned char>(ElemTag::Semidirect));
        w.uvarint(x.vec.size());
        for (const auto& c : x.vec) w.bigint(c);
        w.uvarint(x.rot.modulus);
        w.uvarint(x.rot.value);
    }
    void operator()(const HeisenbergElem& x) const {
        w.u8(static_cast<unsigned char>(ElemTag::Heisenberg));
        w.uvarint(x.u.size());
        for (const auto& c : x.u) w.bigint(c);
        w.bigint(x.a);
        for (const auto& c : x.v) w.bigint(c);
    }
    void operator()(const PermElem& x) const {
        w.u8(static_cast<unsigned char>(ElemTag::Perm));
        w.uvarint(x.images.size());
        for (auto i : x.images) w.u8(i);
    }
    void operator()(const WreathElem& x) const {
        w.u8(static_cast<unsigned char>(ElemTag::Wreath));
        w.uvarint(x.keys.size());
        for (std::size_t i = 0; i < x.keys.size(); ++i) {
            w.bytes(x.keys[i]);
            serialize_body(x.values[i], w);
        }
        serialize_body(x.pos.at(0), w);
    }
    void operator()(const TupleElem& x) const {
        w.u8(static_cast<unsigned char>(ElemTag::Tuple));
        w.uvarint(x.parts.size());
        for (const auto& p : x.parts) serialize_body(p, w);
    }
};

inline void serialize_body(const GroupElement& e, ByteWriter& w) {
    std::visit(SerializeVisitor{w}, e.v());
}

}  // namespace detail

// Canonical, versioned, byte-stable serialization. Two canonical elements are
// equal iff their serializations are equal.
inline std::string serialize_element(const GroupElement& e) {
    ByteWriter w;
    w.u8(kSerializationVersion);
    detail::serialize_body(e, w);
    return w.take();
}

// Unversioned body, used for lamp keys and internal hashing.
inline std::string element_key(const GroupElement& e) {
    ByteWriter w;
    detail::serialize_body(e, w);
    return w.take();
}

// Structural identity test. Valid on canonical elements: every variant has a
// unique canonical identity form, independent of the owning group.
inline bool is_identity_element(const GroupElement& e) {
    struct V {
        bool operator()(const FreeWord& x) const { return x.letters.empty(); }
        bool operator()(const LatticeVec& x) const {
            return std::all_of(x.coords.begin(), x.coords.end(),
                               [](std::int64_t c) { return c == 0; });
        }
        bool operator()(const CyclicResidue& x) const { return x.value == 0; }
        bool operator()(const SemidirectElem& x) const {
            return x.rot.value == 0 &&
                   std::all_of(x.vec.begin(), x.vec.end(), [](const BigInt& c) { return c == 0; });
        }
        bool operator()(const HeisenbergElem& x) const {
            auto zero = [](const BigInt& c) { return c == 0; };
            return x.a == 0 && std::all_of(x.u.begin(), x.u.end(), zero) &&
                   std::all_of(x.v.begin(), x.v.end(), zero);
        }
        bool operator()(const PermElem& x) const {
            for (std::size_t i = 0; i < x.images.size(); ++i)
                if (x.images[i] != i) return false;
            return true;
        }
        bool operator()(const WreathElem& x) const {
            return x.keys.empty() && is_identity_element(x.pos.at(0));
        }
        bool operator()(const TupleElem& x) const {
            return std::all_of(x.parts.begin(), x.parts.end(),
                               [](const GroupElement& p) { return is_identity_element(p); });
        }
    };
    return std::visit(V{}, e.v());
}

// --- human-readable form --------------------------------------------------

inline std::string element_text(const GroupElement& e);

namespace detail {

struct TextVisitor {
    std::string operator()(const FreeWord& x) const {
        if (x.letters.empty()) return "1";
        std::string out;
        std::size_t i = 0;
        while (i < x.letters.size()) {
            std::size_t j = i;
            while (j < x.letters.size() && x.letters[j] == x.letters[i]) ++j;
            if (!out.empty()) out += "*";
            long run = static_cast<long>(j - i);
            long e = x.letters[i] > 0 ? run : -run;
            out += "g" + std::to_string(std::abs(x.letters[i]));
            if (e != 1) out += "^" + std::to_string(e);
            i = j;
        }
        return out;
    }
    std::string operator()(const LatticeVec& x) const {
        std::string out = "(";
        for (std::size_t i = 0; i < x.coords.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(x.coords[i]);
        }
        return out + ")";
    }
    std::string operator()(const CyclicResidue& x) const {
        return std::to_string(x.value) + "%" + std::to_string(x.modulus);
    }
    std::string operator()(const SemidirectElem& x) const {
        std::string out = "(";
        for (std::size_t i = 0; i < x.vec.size(); ++i) {
            if (i) out += ",";
            out += x.vec[i].str();
        }
        return out + "|" + std::to_string(x.rot.value) + "%" + std::to_string(x.rot.modulus) + ")";
    }
    std::string operator()(const HeisenbergElem& x) const {
        auto vec = [](const std::vector<BigInt>& v) {
            std::string s = "(";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ",";
                s += v[i].str();
            }
            return s + ")";
        };
        return "(u=" + vec(x.u) + ";a=" + x.a.str() + ";v=" + vec(x.v) + ")";
    }
    std::string operator()(const PermElem& x) const {
        std::string out = "perm(";
        for (std::size_t i = 0; i < x.images.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(static_cast<int>(x.images[i]));
        }
        return out + ")";
    }
    std::string operator()(const WreathElem& x) const {
        std::string out = "{";
        for (std::size_t i = 0; i < x.keys.size(); ++i) {
            if (i) out += ",";
            out += element_text(x.key_elems[i]) + ":" + element_text(x.values[i]);
        }
        return out + "|" + element_text(x.pos.at(0)) + "}";
    }
    std::string operator()(const TupleElem& x) const {
        std::string out = "<";
        for (std::size_t i = 0; i < x.parts.size(); ++i) {
            if (i) out += ";";
            out += element_text(x.parts[i]);
        }
        return out + ">";
    }
};

}  // namespace detail

inline std::string element_text(const GroupElement& e) {
    return std::visit(detail::TextVisitor{}, e.v());
}

}  // namespace grouplaw
