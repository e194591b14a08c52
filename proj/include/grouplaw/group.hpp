#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "grouplaw/element.hpp"
#include "grouplaw/errors.hpp"
#include "grouplaw/matrix.hpp"

namespace grouplaw {

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

class Descriptor;

enum class MatrixFamily { Companion, Cyclotomic, Custom };

struct FreeGroupD {
    unsigned d;
};
struct LatticeD {
    unsigned d;
};
struct CyclicD {
    unsigned m;
};
struct SemidirectD {
    IntMat matrix;
    unsigned m;
    MatrixFamily family = MatrixFamily::Custom;
};
struct HeisenbergD {
    unsigned m;  // H_{2m-1}: u,v of dimension m-1
};
struct HeisenbergSemidirectD {
    unsigned m;
};
struct WreathD {
    std::shared_ptr<const Descriptor> lamp;
    std::shared_ptr<const Descriptor> base;
};
struct ProductD {
    std::vector<Descriptor> factors;
};
struct FiniteDihedralD {
    unsigned m;  // order 2m
};
struct FiniteSymmetricD {
    unsigned n;
};
struct FiniteExtraspecial3D {};
struct FiniteQuaternionD {};
struct FiniteQuotientD {
    std::shared_ptr<const Descriptor> base;
    unsigned modulus;
};

class Descriptor {
public:
    using Variant =
        std::variant<FreeGroupD, LatticeD, CyclicD, SemidirectD, HeisenbergD,
                     HeisenbergSemidirectD, WreathD, ProductD, FiniteDihedralD, FiniteSymmetricD,
                     FiniteExtraspecial3D, FiniteQuaternionD, FiniteQuotientD>;

    Descriptor() : v_(std::make_shared<Variant>(LatticeD{1})) {}
    explicit Descriptor(Variant v) : v_(std::make_shared<Variant>(std::move(v))) {}

    const Variant& v() const { return *v_; }
    template <class T>
    const T* get_if() const {
        return std::get_if<T>(v_.get());
    }

private:
    std::shared_ptr<const Variant> v_;
};

inline Descriptor free_group(unsigned d) {
    if (d < 1) throw ArgumentError("free group rank must be positive");
    return Descriptor(FreeGroupD{d});
}
inline Descriptor lattice(unsigned d) {
    if (d < 1) throw ArgumentError("lattice dimension must be positive");
    return Descriptor(LatticeD{d});
}
inline Descriptor cyclic(unsigned m) {
    if (m < 1) throw ArgumentError("cyclic modulus must be positive");
    return Descriptor(CyclicD{m});
}
inline Descriptor semidirect(IntMat a, unsigned m, MatrixFamily fam = MatrixFamily::Custom) {
    return Descriptor(SemidirectD{std::move(a), m, fam});
}
inline Descriptor semidirect_companion(unsigned m) {
    return semidirect(companion_matrix(m), m, MatrixFamily::Companion);
}
inline Descriptor semidirect_cyclotomic(unsigned m) {
    return semidirect(cyclotomic_action_matrix(m), m, MatrixFamily::Cyclotomic);
}
inline Descriptor dihedral_infinite() { return semidirect_companion(2); }
inline Descriptor heisenberg(unsigned m) {
    if (m < 2) throw ArgumentError("heisenberg parameter must be at least 2");
    return Descriptor(HeisenbergD{m});
}
inline Descriptor heisenberg_semidirect(unsigned m) {
    if (m < 2) throw ArgumentError("heisenberg-semidirect parameter must be at least 2");
    return Descriptor(HeisenbergSemidirectD{m});
}
inline Descriptor wreath(Descriptor lamp, Descriptor base) {
    return Descriptor(WreathD{std::make_shared<Descriptor>(std::move(lamp)),
                              std::make_shared<Descriptor>(std::move(base))});
}
inline Descriptor product(std::vector<Descriptor> factors) {
    if (factors.size() < 2) throw ArgumentError("product needs at least two factors");
    return Descriptor(ProductD{std::move(factors)});
}
inline Descriptor finite_dihedral(unsigned m) {
    if (m < 2) throw ArgumentError("finite dihedral parameter must be at least 2");
    return Descriptor(FiniteDihedralD{m});
}
inline Descriptor finite_symmetric(unsigned n) {
    if (n < 1 || n > 12) throw ArgumentError("symmetric group degree out of supported range");
    return Descriptor(FiniteSymmetricD{n});
}
inline Descriptor finite_extraspecial3() { return Descriptor(FiniteExtraspecial3D{}); }
inline Descriptor finite_quaternion8() { return Descriptor(FiniteQuaternionD{}); }
inline Descriptor finite_quotient(Descriptor base, unsigned modulus) {
    if (modulus < 1) throw ArgumentError("quotient modulus must be positive");
    return Descriptor(FiniteQuotientD{std::make_shared<Descriptor>(std::move(base)), modulus});
}

// ---------------------------------------------------------------------------
// Handle
// ---------------------------------------------------------------------------

class GroupHandle;

namespace detail {

enum class Kind {
    Free,
    Lattice,
    Cyclic,
    Semidirect,
    Heisenberg,
    HeisenbergSemidirect,
    Wreath,
    Product,
    Symmetric,
    Quaternion,
};

struct HandleImpl {
    Descriptor desc;            // descriptor as given (sugar preserved for printing)
    Kind kind;
    unsigned quotient_mod = 0;  // 0 = no coordinate reduction

    unsigned rank = 0;          // free rank / lattice dim / cyclic-or-rotation modulus / perm degree
    unsigned dim = 0;           // semidirect vector dim or heisenberg m-1

    std::vector<IntMat> pow;       // semidirect A^k, k = 0..m-1
    std::vector<IntMat> pow_ut;    // heis-semi (A^T)^k
    std::vector<IntMat> pow_vinv;  // heis-semi A^{-k}

    std::shared_ptr<const HandleImpl> lamp, base;
    std::vector<std::shared_ptr<const HandleImpl>> factors;
};

}  // namespace detail

class GroupHandle {
public:
    GroupHandle() = default;
    explicit GroupHandle(std::shared_ptr<const detail::HandleImpl> impl) : impl_(std::move(impl)) {}

    const detail::HandleImpl& impl() const {
        if (!impl_) throw ArgumentError("empty group handle");
        return *impl_;
    }
    const Descriptor& descriptor() const { return impl().desc; }
    bool valid() const { return impl_ != nullptr; }

    GroupHandle lamp() const { return GroupHandle(impl().lamp); }
    GroupHandle base() const { return GroupHandle(impl().base); }
    GroupHandle factor(std::size_t i) const { return GroupHandle(impl().factors.at(i)); }
    std::size_t factor_count() const { return impl().factors.size(); }

private:
    std::shared_ptr<const detail::HandleImpl> impl_;
};

GroupHandle build_group(const Descriptor& d);
inline GroupElement identity(const GroupHandle& g);
inline GroupElement multiply(const GroupHandle& g, const GroupElement& a, const GroupElement& b);
inline GroupElement inverse(const GroupHandle& g, const GroupElement& a);

namespace detail {

inline std::shared_ptr<const HandleImpl> build_impl(const Descriptor& d);

inline void reduce_mod(BigInt& x, unsigned n) {
    x %= n;
    if (x < 0) x += n;
}

inline std::shared_ptr<const HandleImpl> build_quotient_impl(const Descriptor& printed,
                                                             const Descriptor& inner, unsigned n) {
    auto base = build_impl(inner);
    switch (base->kind) {
        case Kind::Lattice:
        case Kind::Semidirect:
        case Kind::Heisenberg:
        case Kind::HeisenbergSemidirect:
            break;
        default:
            throw ConstructionError(
                "finite quotient requires a lattice-type base reducible coordinatewise");
    }
    if (base->quotient_mod != 0) throw ConstructionError("nested finite quotients not supported");
    auto impl = std::make_shared<HandleImpl>(*base);
    impl->desc = printed;
    impl->quotient_mod = n;
    return impl;
}

inline std::shared_ptr<const HandleImpl> build_impl(const Descriptor& d) {
    auto impl = std::make_shared<HandleImpl>();
    impl->desc = d;
    if (auto* f = d.get_if<FreeGroupD>()) {
        impl->kind = Kind::Free;
        impl->rank = f->d;
    } else if (auto* l = d.get_if<LatticeD>()) {
        impl->kind = Kind::Lattice;
        impl->rank = l->d;
    } else if (auto* c = d.get_if<CyclicD>()) {
        impl->kind = Kind::Cyclic;
        impl->rank = c->m;
    } else if (auto* s = d.get_if<SemidirectD>()) {
        if (s->m < 2) throw ConstructionError("semidirect rotation order must be at least 2");
        if (s->matrix.rows() != s->matrix.cols())
            throw ConstructionError("semidirect action matrix must be square");
        if (!s->matrix.pow(s->m).is_identity())
            throw ConstructionError("semidirect action matrix fails A^m = I");
        impl->kind = Kind::Semidirect;
        impl->rank = s->m;
        impl->dim = static_cast<unsigned>(s->matrix.rows());
        impl->pow.reserve(s->m);
        IntMat p = IntMat::identity(impl->dim);
        for (unsigned k = 0; k < s->m; ++k) {
            impl->pow.push_back(p);
            p = p * s->matrix;
        }
    } else if (auto* h = d.get_if<HeisenbergD>()) {
        impl->kind = Kind::Heisenberg;
        impl->dim = h->m - 1;
    } else if (auto* hs = d.get_if<HeisenbergSemidirectD>()) {
        impl->kind = Kind::HeisenbergSemidirect;
        impl->rank = hs->m;
        impl->dim = hs->m - 1;
        IntMat a = companion_matrix(hs->m);
        IntMat at = a.transposed();
        IntMat ainv = a.pow(hs->m - 1);  // A^{m-1} = A^{-1}
        IntMat pu = IntMat::identity(impl->dim), pv = IntMat::identity(impl->dim);
        for (unsigned k = 0; k < hs->m; ++k) {
            impl->pow_ut.push_back(pu);
            impl->pow_vinv.push_back(pv);
            pu = pu * at;
            pv = pv * ainv;
        }
    } else if (auto* w = d.get_if<WreathD>()) {
        impl->kind = Kind::Wreath;
        impl->lamp = build_impl(*w->lamp);
        impl->base = build_impl(*w->base);
    } else if (auto* p = d.get_if<ProductD>()) {
        impl->kind = Kind::Product;
        for (const auto& f : p->factors) impl->factors.push_back(build_impl(f));
    } else if (auto* dm = d.get_if<FiniteDihedralD>()) {
        return build_quotient_impl(d, semidirect_companion(2), dm->m);
    } else if (auto* sn = d.get_if<FiniteSymmetricD>()) {
        impl->kind = Kind::Symmetric;
        impl->rank = sn->n;
    } else if (d.get_if<FiniteExtraspecial3D>()) {
        return build_quotient_impl(d, semidirect_companion(3), 3);
    } else if (d.get_if<FiniteQuaternionD>()) {
        impl->kind = Kind::Quaternion;
        impl->rank = 8;
    } else if (auto* q = d.get_if<FiniteQuotientD>()) {
        return build_quotient_impl(d, *q->base, q->modulus);
    } else {
        throw ConstructionError("unsupported descriptor");
    }
    return impl;
}

inline GroupElement identity_of(const HandleImpl& g) {
    switch (g.kind) {
        case Kind::Free:
            return FreeWord{};
        case Kind::Lattice:
            return LatticeVec{std::vector<std::int64_t>(g.rank, 0)};
        case Kind::Cyclic:
            return CyclicResidue{0, g.rank};
        case Kind::Semidirect:
            return SemidirectElem{std::vector<BigInt>(g.dim, 0), CyclicResidue{0, g.rank}};
        case Kind::Heisenberg:
            return HeisenbergElem{std::vector<BigInt>(g.dim, 0), 0,
                                  std::vector<BigInt>(g.dim, 0)};
        case Kind::HeisenbergSemidirect: {
            TupleElem t;
            t.parts.emplace_back(HeisenbergElem{std::vector<BigInt>(g.dim, 0), 0,
                                                std::vector<BigInt>(g.dim, 0)});
            t.parts.emplace_back(CyclicResidue{0, g.rank});
            return t;
        }
        case Kind::Wreath: {
            WreathElem w;
            w.pos.push_back(identity_of(*g.base));
            return w;
        }
        case Kind::Product: {
            TupleElem t;
            for (const auto& f : g.factors) t.parts.push_back(identity_of(*f));
            return t;
        }
        case Kind::Symmetric:
        case Kind::Quaternion: {
            PermElem p;
            p.images.resize(g.rank);
            for (unsigned i = 0; i < g.rank; ++i) p.images[i] = static_cast<std::uint8_t>(i);
            return p;
        }
    }
    throw ConstructionError("unreachable");
}

// Structural membership check: representation variant and dimensions match
// the handle. Canonicality of the input is the caller's contract.
inline void check_member(const HandleImpl& g, const GroupElement& e) {
    switch (g.kind) {
        case Kind::Free: {
            const auto* w = e.get_if<FreeWord>();
            if (!w) throw TypeError("expected a free word");
            for (auto l : w->letters)
                if (l == 0 || static_cast<unsigned>(std::abs(l)) > g.rank)
                    throw TypeError("free word letter outside generator range");
            return;
        }
        case Kind::Lattice: {
            const auto* v = e.get_if<LatticeVec>();
            if (!v || v->coords.size() != g.rank) throw TypeError("expected a lattice vector");
            return;
        }
        case Kind::Cyclic: {
            const auto* c = e.get_if<CyclicResidue>();
            if (!c || c->modulus != g.rank) throw TypeError("expected a cyclic residue");
            return;
        }
        case Kind::Semidirect: {
            const auto* s = e.get_if<SemidirectElem>();
            if (!s || s->vec.size() != g.dim || s->rot.modulus != g.rank)
                throw TypeError("expected a semidirect pair");
            return;
        }
        case Kind::Heisenberg: {
            const auto* h = e.get_if<HeisenbergElem>();
            if (!h || h->u.size() != g.dim || h->v.size() != g.dim)
                throw TypeError("expected a heisenberg triple");
            return;
        }
        case Kind::HeisenbergSemidirect: {
            const auto* t = e.get_if<TupleElem>();
            if (!t || t->parts.size() != 2) throw TypeError("expected a (heisenberg, rotation) pair");
            const auto* h = t->parts[0].get_if<HeisenbergElem>();
            const auto* c = t->parts[1].get_if<CyclicResidue>();
            if (!h || h->u.size() != g.dim || !c || c->modulus != g.rank)
                throw TypeError("expected a (heisenberg, rotation) pair");
            return;
        }
        case Kind::Wreath: {
            const auto* w = e.get_if<WreathElem>();
            if (!w || w->pos.size() != 1) throw TypeError("expected a wreath pair");
            return;
        }
        case Kind::Product: {
            const auto* t = e.get_if<TupleElem>();
            if (!t || t->parts.size() != g.factors.size())
                throw TypeError("expected a tuple matching the product arity");
            return;
        }
        case Kind::Symmetric:
        case Kind::Quaternion: {
            const auto* p = e.get_if<PermElem>();
            if (!p || p->images.size() != g.rank) throw TypeError("expected a permutation");
            return;
        }
    }
}

inline GroupElement mul_impl(const HandleImpl& g, const GroupElement& a, const GroupElement& b);
inline GroupElement inv_impl(const HandleImpl& g, const GroupElement& a);

inline std::vector<BigInt> vec_add_mod(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                                       unsigned mod) {
    std::vector<BigInt> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] + b[i];
        if (mod) reduce_mod(r[i], mod);
    }
    return r;
}

inline GroupElement mul_wreath(const HandleImpl& g, const WreathElem& a, const WreathElem& b) {
    const HandleImpl& base = *g.base;
    const HandleImpl& lamp = *g.lamp;
    WreathElem r;
    r.pos.push_back(mul_impl(base, a.pos[0], b.pos[0]));

    // Translate b's lamps by a's position, then merge the two sorted lists.
    struct Entry {
        std::string key;
        GroupElement key_elem;
        GroupElement value;
    };
    std::vector<Entry> moved;
    moved.reserve(b.keys.size());
    for (std::size_t i = 0; i < b.keys.size(); ++i) {
        GroupElement k = mul_impl(base, a.pos[0], b.key_elems[i]);
        std::string kb = element_key(k);
        moved.push_back(Entry{std::move(kb), std::move(k), b.values[i]});
    }
    std::sort(moved.begin(), moved.end(),
              [](const Entry& x, const Entry& y) { return x.key < y.key; });

    std::size_t i = 0, j = 0;
    while (i < a.keys.size() || j < moved.size()) {
        if (j == moved.size() || (i < a.keys.size() && a.keys[i] < moved[j].key)) {
            r.keys.push_back(a.keys[i]);
            r.key_elems.push_back(a.key_elems[i]);
            r.values.push_back(a.values[i]);
            ++i;
        } else if (i == a.keys.size() || moved[j].key < a.keys[i]) {
            r.keys.push_back(std::move(moved[j].key));
            r.key_elems.push_back(std::move(moved[j].key_elem));
            r.values.push_back(std::move(moved[j].value));
            ++j;
        } else {
            GroupElement v = mul_impl(lamp, a.values[i], moved[j].value);
            if (!is_identity_element(v)) {
                r.keys.push_back(a.keys[i]);
                r.key_elems.push_back(a.key_elems[i]);
                r.values.push_back(std::move(v));
            }
            ++i;
            ++j;
        }
    }
    return r;
}

inline GroupElement mul_impl(const HandleImpl& g, const GroupElement& a, const GroupElement& b) {
    switch (g.kind) {
        case Kind::Free:
            return freeword_mul(a.get<FreeWord>(), b.get<FreeWord>());
        case Kind::Lattice: {
            const auto& x = a.get<LatticeVec>().coords;
            const auto& y = b.get<LatticeVec>().coords;
            LatticeVec r;
            r.coords.resize(x.size());
            if (g.quotient_mod) {
                const auto n = static_cast<std::int64_t>(g.quotient_mod);
                for (std::size_t i = 0; i < x.size(); ++i)
                    r.coords[i] = ((x[i] + y[i]) % n + n) % n;
            } else {
                for (std::size_t i = 0; i < x.size(); ++i) r.coords[i] = x[i] + y[i];
            }
            return r;
        }
        case Kind::Cyclic: {
            const auto& x = a.get<CyclicResidue>();
            const auto& y = b.get<CyclicResidue>();
            return CyclicResidue{(x.value + y.value) % x.modulus, x.modulus};
        }
        case Kind::Semidirect: {
            const auto& x = a.get<SemidirectElem>();
            const auto& y = b.get<SemidirectElem>();
            SemidirectElem r;
            std::vector<BigInt> twisted = g.pow[x.rot.value].apply(y.vec);
            r.vec = vec_add_mod(x.vec, twisted, g.quotient_mod);
            r.rot = CyclicResidue{(x.rot.value + y.rot.value) % g.rank, g.rank};
            return r;
        }
        case Kind::Heisenberg: {
            const auto& x = a.get<HeisenbergElem>();
            const auto& y = b.get<HeisenbergElem>();
            HeisenbergElem r;
            r.u = vec_add_mod(x.u, y.u, g.quotient_mod);
            r.v = vec_add_mod(x.v, y.v, g.quotient_mod);
            BigInt dot = 0;
            for (std::size_t i = 0; i < x.u.size(); ++i) dot += x.u[i] * y.v[i];
            r.a = x.a + y.a + dot;
            if (g.quotient_mod) reduce_mod(r.a, g.quotient_mod);
            return r;
        }
        case Kind::HeisenbergSemidirect: {
            const auto& xt = a.get<TupleElem>();
            const auto& yt = b.get<TupleElem>();
            const auto& xh = xt.parts[0].get<HeisenbergElem>();
            const auto& yh = yt.parts[0].get<HeisenbergElem>();
            unsigned k1 = xt.parts[1].get<CyclicResidue>().value;
            unsigned k2 = yt.parts[1].get<CyclicResidue>().value;
            // act(k1, yh): u -> (A^T)^{k1} u, a -> a, v -> A^{-k1} v
            HeisenbergElem ty;
            ty.u = g.pow_ut[k1].apply(yh.u);
            ty.a = yh.a;
            ty.v = g.pow_vinv[k1].apply(yh.v);
            HeisenbergElem rh;
            rh.u = vec_add_mod(xh.u, ty.u, g.quotient_mod);
            rh.v = vec_add_mod(xh.v, ty.v, g.quotient_mod);
            BigInt dot = 0;
            for (std::size_t i = 0; i < xh.u.size(); ++i) dot += xh.u[i] * ty.v[i];
            rh.a = xh.a + ty.a + dot;
            if (g.quotient_mod) reduce_mod(rh.a, g.quotient_mod);
            TupleElem r;
            r.parts.emplace_back(std::move(rh));
            r.parts.emplace_back(CyclicResidue{(k1 + k2) % g.rank, g.rank});
            return r;
        }
        case Kind::Wreath:
            return mul_wreath(g, a.get<WreathElem>(), b.get<WreathElem>());
        case Kind::Product: {
            const auto& x = a.get<TupleElem>();
            const auto& y = b.get<TupleElem>();
            TupleElem r;
            r.parts.reserve(x.parts.size());
            for (std::size_t i = 0; i < x.parts.size(); ++i)
                r.parts.push_back(mul_impl(*g.factors[i], x.parts[i], y.parts[i]));
            return r;
        }
        case Kind::Symmetric:
        case Kind::Quaternion: {
            const auto& x = a.get<PermElem>().images;
            const auto& y = b.get<PermElem>().images;
            PermElem r;
            r.images.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) r.images[i] = x[y[i]];
            return r;
        }
    }
    throw ConstructionError("unreachable");
}

inline GroupElement inv_impl(const HandleImpl& g, const GroupElement& a) {
    switch (g.kind) {
        case Kind::Free:
            return freeword_inverse(a.get<FreeWord>());
        case Kind::Lattice: {
            LatticeVec r = a.get<LatticeVec>();
            if (g.quotient_mod) {
                const auto n = static_cast<std::int64_t>(g.quotient_mod);
                for (auto& c : r.coords) c = ((-c) % n + n) % n;
            } else {
                for (auto& c : r.coords) c = -c;
            }
            return r;
        }
        case Kind::Cyclic: {
            const auto& x = a.get<CyclicResidue>();
            return CyclicResidue{x.value == 0 ? 0u : x.modulus - x.value, x.modulus};
        }
        case Kind::Semidirect: {
            const auto& x = a.get<SemidirectElem>();
            unsigned kinv = x.rot.value == 0 ? 0u : g.rank - x.rot.value;
            SemidirectElem r;
            std::vector<BigInt> t = g.pow[kinv].apply(x.vec);
            r.vec.resize(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                r.vec[i] = -t[i];
                if (g.quotient_mod) reduce_mod(r.vec[i], g.quotient_mod);
            }
            r.rot = CyclicResidue{kinv, g.rank};
            return r;
        }
        case Kind::Heisenberg: {
            const auto& x = a.get<HeisenbergElem>();
            HeisenbergElem r;
            BigInt dot = 0;
            for (std::size_t i = 0; i < x.u.size(); ++i) dot += x.u[i] * x.v[i];
            r.u.resize(x.u.size());
            r.v.resize(x.v.size());
            for (std::size_t i = 0; i < x.u.size(); ++i) r.u[i] = -x.u[i];
            for (std::size_t i = 0; i < x.v.size(); ++i) r.v[i] = -x.v[i];
            r.a = -x.a + dot;
            if (g.quotient_mod) {
                for (auto& c : r.u) reduce_mod(c, g.quotient_mod);
                for (auto& c : r.v) reduce_mod(c, g.quotient_mod);
                reduce_mod(r.a, g.quotient_mod);
            }
            return r;
        }
        case Kind::HeisenbergSemidirect: {
            const auto& xt = a.get<TupleElem>();
            const auto& xh = xt.parts[0].get<HeisenbergElem>();
            unsigned k = xt.parts[1].get<CyclicResidue>().value;
            unsigned kinv = k == 0 ? 0u : g.rank - k;
            // h^{-1} in the heisenberg layer, then act by -k.
            HeisenbergElem hi;
            BigInt dot = 0;
            for (std::size_t i = 0; i < xh.u.size(); ++i) dot += xh.u[i] * xh.v[i];
            hi.u.resize(xh.u.size());
            hi.v.resize(xh.v.size());
            for (std::size_t i = 0; i < xh.u.size(); ++i) hi.u[i] = -xh.u[i];
            for (std::size_t i = 0; i < xh.v.size(); ++i) hi.v[i] = -xh.v[i];
            hi.a = -xh.a + dot;
            HeisenbergElem rh;
            rh.u = g.pow_ut[kinv].apply(hi.u);
            rh.a = hi.a;
            rh.v = g.pow_vinv[kinv].apply(hi.v);
            if (g.quotient_mod) {
                for (auto& c : rh.u) reduce_mod(c, g.quotient_mod);
                for (auto& c : rh.v) reduce_mod(c, g.quotient_mod);
                reduce_mod(rh.a, g.quotient_mod);
            }
            TupleElem r;
            r.parts.emplace_back(std::move(rh));
            r.parts.emplace_back(CyclicResidue{kinv, g.rank});
            return r;
        }
        case Kind::Wreath: {
            const auto& x = a.get<WreathElem>();
            const HandleImpl& base = *g.base;
            const HandleImpl& lamp = *g.lamp;
            WreathElem r;
            GroupElement pinv = inv_impl(base, x.pos[0]);
            struct Entry {
                std::string key;
                GroupElement key_elem;
                GroupElement value;
            };
            std::vector<Entry> entries;
            entries.reserve(x.keys.size());
            for (std::size_t i = 0; i < x.keys.size(); ++i) {
                GroupElement k = mul_impl(base, pinv, x.key_elems[i]);
                entries.push_back(Entry{element_key(k), std::move(k), inv_impl(lamp, x.values[i])});
            }
            std::sort(entries.begin(), entries.end(),
                      [](const Entry& u, const Entry& v) { return u.key < v.key; });
            for (auto& e : entries) {
                r.keys.push_back(std::move(e.key));
                r.key_elems.push_back(std::move(e.key_elem));
                r.values.push_back(std::move(e.value));
            }
            r.pos.push_back(std::move(pinv));
            return r;
        }
        case Kind::Product: {
            const auto& x = a.get<TupleElem>();
            TupleElem r;
            r.parts.reserve(x.parts.size());
            for (std::size_t i = 0; i < x.parts.size(); ++i)
                r.parts.push_back(inv_impl(*g.factors[i], x.parts[i]));
            return r;
        }
        case Kind::Symmetric:
        case Kind::Quaternion: {
            const auto& x = a.get<PermElem>().images;
            PermElem r;
            r.images.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) r.images[x[i]] = static_cast<std::uint8_t>(i);
            return r;
        }
    }
    throw ConstructionError("unreachable");
}

inline GroupElement canon_impl(const HandleImpl& g, const GroupElement& a);

}  // namespace detail

inline GroupHandle build_group(const Descriptor& d) {
    return GroupHandle(detail::build_impl(d));
}

inline GroupElement identity(const GroupHandle& g) { return detail::identity_of(g.impl()); }

inline GroupElement multiply(const GroupHandle& g, const GroupElement& a, const GroupElement& b) {
    detail::check_member(g.impl(), a);
    detail::check_member(g.impl(), b);
    return detail::mul_impl(g.impl(), a, b);
}

inline GroupElement inverse(const GroupHandle& g, const GroupElement& a) {
    detail::check_member(g.impl(), a);
    return detail::inv_impl(g.impl(), a);
}

inline GroupElement conjugate(const GroupHandle& g, const GroupElement& a, const GroupElement& b) {
    // a^b = b a b^{-1}
    return multiply(g, multiply(g, b, a), inverse(g, b));
}

inline GroupElement commutator(const GroupHandle& g, const GroupElement& a, const GroupElement& b) {
    // [a,b] = a b a^{-1} b^{-1}
    return multiply(g, multiply(g, a, b), multiply(g, inverse(g, a), inverse(g, b)));
}

inline GroupElement power(const GroupHandle& g, const GroupElement& a, long e) {
    GroupElement base = e < 0 ? inverse(g, a) : a;
    unsigned long n = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
    GroupElement r = identity(g);
    GroupElement b = base;
    while (n > 0) {
        if (n & 1) r = multiply(g, r, b);
        n >>= 1;
        if (n) b = multiply(g, b, b);
    }
    return r;
}

namespace detail {

inline GroupElement canon_impl(const HandleImpl& g, const GroupElement& a) {
    switch (g.kind) {
        case Kind::Free: {
            return freeword_reduce(a.get<FreeWord>().letters);
        }
        case Kind::Lattice: {
            LatticeVec r = a.get<LatticeVec>();
            if (g.quotient_mod) {
                const auto n = static_cast<std::int64_t>(g.quotient_mod);
                for (auto& c : r.coords) c = (c % n + n) % n;
            }
            return r;
        }
        case Kind::Cyclic: {
            auto c = a.get<CyclicResidue>();
            c.value %= c.modulus;
            return c;
        }
        case Kind::Semidirect: {
            SemidirectElem r = a.get<SemidirectElem>();
            r.rot.value %= r.rot.modulus;
            if (g.quotient_mod)
                for (auto& c : r.vec) reduce_mod(c, g.quotient_mod);
            return r;
        }
        case Kind::Heisenberg: {
            HeisenbergElem r = a.get<HeisenbergElem>();
            if (g.quotient_mod) {
                for (auto& c : r.u) reduce_mod(c, g.quotient_mod);
                for (auto& c : r.v) reduce_mod(c, g.quotient_mod);
                reduce_mod(r.a, g.quotient_mod);
            }
            return r;
        }
        case Kind::HeisenbergSemidirect: {
            TupleElem r = a.get<TupleElem>();
            HeisenbergElem h = r.parts[0].get<HeisenbergElem>();
            CyclicResidue k = r.parts[1].get<CyclicResidue>();
            k.value %= k.modulus;
            if (g.quotient_mod) {
                for (auto& c : h.u) reduce_mod(c, g.quotient_mod);
                for (auto& c : h.v) reduce_mod(c, g.quotient_mod);
                reduce_mod(h.a, g.quotient_mod);
            }
            TupleElem t;
            t.parts.emplace_back(std::move(h));
            t.parts.emplace_back(k);
            return t;
        }
        case Kind::Wreath: {
            const auto& x = a.get<WreathElem>();
            WreathElem r;
            struct Entry {
                std::string key;
                GroupElement key_elem;
                GroupElement value;
            };
            std::vector<Entry> entries;
            for (std::size_t i = 0; i < x.keys.size(); ++i) {
                GroupElement k = canon_impl(*g.base, x.key_elems[i]);
                GroupElement v = canon_impl(*g.lamp, x.values[i]);
                if (is_identity_element(v)) continue;
                entries.push_back(Entry{element_key(k), std::move(k), std::move(v)});
            }
            std::sort(entries.begin(), entries.end(),
                      [](const Entry& u, const Entry& v) { return u.key < v.key; });
            for (std::size_t i = 0; i + 1 < entries.size(); ++i)
                if (entries[i].key == entries[i + 1].key)
                    throw TypeError("wreath lamp map has duplicate keys");
            for (auto& e : entries) {
                r.keys.push_back(std::move(e.key));
                r.key_elems.push_back(std::move(e.key_elem));
                r.values.push_back(std::move(e.value));
            }
            r.pos.push_back(canon_impl(*g.base, x.pos.at(0)));
            return r;
        }
        case Kind::Product: {
            const auto& x = a.get<TupleElem>();
            TupleElem r;
            for (std::size_t i = 0; i < x.parts.size(); ++i)
                r.parts.push_back(canon_impl(*g.factors[i], x.parts[i]));
            return r;
        }
        case Kind::Symmetric:
        case Kind::Quaternion: {
            const auto& x = a.get<PermElem>().images;
            std::vector<bool> seen(x.size(), false);
            for (auto i : x) {
                if (i >= x.size() || seen[i]) throw TypeError("not a permutation");
                seen[i] = true;
            }
            return a;
        }
    }
    throw ConstructionError("unreachable");
}

}  // namespace detail

// Recanonicalize a structurally well-formed element. Kernel operations keep
// elements canonical, so this is mainly for ingested data and tests.
inline GroupElement canonicalize(const GroupHandle& g, const GroupElement& a) {
    detail::check_member(g.impl(), a);
    return detail::canon_impl(g.impl(), a);
}

// --- element builders -------------------------------------------------------

inline GroupElement make_lattice(std::vector<std::int64_t> coords) {
    return LatticeVec{std::move(coords)};
}

inline GroupElement make_cyclic(long value, unsigned m) {
    long v = value % static_cast<long>(m);
    if (v < 0) v += m;
    return CyclicResidue{static_cast<std::uint32_t>(v), m};
}

inline GroupElement make_semidirect(const GroupHandle& g, std::vector<BigInt> vec, long rot) {
    const auto& impl = g.impl();
    if (impl.kind != detail::Kind::Semidirect) throw TypeError("handle is not a semidirect group");
    SemidirectElem e{std::move(vec), CyclicResidue{0, impl.rank}};
    long r = rot % static_cast<long>(impl.rank);
    if (r < 0) r += impl.rank;
    e.rot.value = static_cast<std::uint32_t>(r);
    return canonicalize(g, GroupElement(std::move(e)));
}

inline GroupElement make_freeword(std::vector<std::int32_t> letters) {
    return freeword_reduce(letters);
}

// Lamp entry list -> canonical wreath element; duplicate keys are merged with
// the lamp group's multiplication (in list order), identity values pruned.
inline GroupElement make_wreath_element(const GroupHandle& g,
                                        std::vector<std::pair<GroupElement, GroupElement>> lamps,
                                        GroupElement pos) {
    const auto& impl = g.impl();
    if (impl.kind != detail::Kind::Wreath) throw TypeError("handle is not a wreath product");
    GroupHandle base = g.base();
    GroupHandle lampg = g.lamp();
    struct Entry {
        std::string key;
        GroupElement key_elem;
        GroupElement value;
    };
    std::vector<Entry> entries;
    for (auto& [k, v] : lamps) {
        GroupElement ck = canonicalize(base, k);
        std::string kb = element_key(ck);
        auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const Entry& e) { return e.key == kb; });
        if (it == entries.end())
            entries.push_back(Entry{std::move(kb), std::move(ck), canonicalize(lampg, v)});
        else
            it->value = multiply(lampg, it->value, v);
    }
    WreathElem w;
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.key < b.key; });
    for (auto& e : entries) {
        if (is_identity_element(e.value)) continue;
        w.keys.push_back(std::move(e.key));
        w.key_elems.push_back(std::move(e.key_elem));
        w.values.push_back(std::move(e.value));
    }
    w.pos.push_back(canonicalize(base, pos));
    return w;
}

inline GroupElement make_tuple(std::vector<GroupElement> parts) {
    return TupleElem{std::move(parts)};
}

}  // namespace grouplaw
