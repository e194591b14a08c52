#pragma once

#include <cstddef>
#include <vector>

#include "grouplaw/bigint.hpp"
#include "grouplaw/errors.hpp"

namespace grouplaw {

// Small dense integer matrix, row-major. Heavy machinery is not needed: the
// kernel only multiplies, powers, and takes exact determinants of matrices
// whose size is at most a dozen.
class IntMat {
public:
    IntMat() = default;
    IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static IntMat identity(std::size_t n) {
        IntMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMat&) const = default;

    IntMat operator*(const IntMat& o) const {
        if (cols_ != o.rows_) throw ArgumentError("IntMat: dimension mismatch in product");
        IntMat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const BigInt& aik = (*this)(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    IntMat operator+(const IntMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw ArgumentError("IntMat: dimension mismatch in sum");
        IntMat r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }

    IntMat scaled(const BigInt& c) const {
        IntMat r = *this;
        for (auto& x : r.a_) x *= c;
        return r;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }

    IntMat pow(unsigned long e) const {
        if (rows_ != cols_) throw ArgumentError("IntMat: pow of non-square matrix");
        IntMat r = identity(rows_);
        IntMat b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // Exact determinant via fraction-free (Bareiss) elimination.
    BigInt det() const {
        if (rows_ != cols_) throw ArgumentError("IntMat: det of non-square matrix");
        const std::size_t n = rows_;
        if (n == 0) return 1;
        std::vector<BigInt> m = a_;
        auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return m[i * n + j]; };
        BigInt prev = 1;
        int sign = 1;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (at(k, k) == 0) {
                std::size_t piv = k + 1;
                while (piv < n && at(piv, k) == 0) ++piv;
                if (piv == n) return 0;
                for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
                sign = -sign;
            }
            for (std::size_t i = k + 1; i < n; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
            prev = at(k, k);
        }
        return sign > 0 ? at(n - 1, n - 1) : -at(n - 1, n - 1);
    }

    // Apply to an integer vector.
    std::vector<BigInt> apply(const std::vector<BigInt>& v) const {
        if (v.size() != cols_) throw ArgumentError("IntMat: vector dimension mismatch");
        std::vector<BigInt> r(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    IntMat transposed() const {
        IntMat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BigInt> a_;
};

// Companion matrix of a monic polynomial x^k + c[k-1] x^{k-1} + ... + c[0].
inline IntMat companion_of_monic(const std::vector<BigInt>& c) {
    const std::size_t k = c.size();
    if (k == 0) throw ArgumentError("companion_of_monic: degree must be positive");
    IntMat a(k, k);
    for (std::size_t i = 1; i < k; ++i) a(i, i - 1) = 1;
    for (std::size_t i = 0; i < k; ++i) a(i, k - 1) = -c[i];
    return a;
}

// Companion matrix of 1 + x + ... + x^{m-1}: subdiagonal ones, last column -1.
// Satisfies A^m = I, det(A - I) != 0, and I + A + ... + A^{m-1} = 0; all three
// are validated here so downstream code can rely on them.
inline IntMat companion_matrix(unsigned m) {
    if (m < 2) throw ArgumentError("companion_matrix: m must be at least 2");
    std::vector<BigInt> c(m - 1, 1);
    IntMat a = companion_of_monic(c);
    if (!a.pow(m).is_identity()) throw ConstructionError("companion_matrix: A^m != I");
    IntMat diff = a + IntMat::identity(m - 1).scaled(-1);
    if (diff.det() == 0) throw ConstructionError("companion_matrix: det(A - I) == 0");
    IntMat sum(m - 1, m - 1);
    IntMat p = IntMat::identity(m - 1);
    for (unsigned i = 0; i < m; ++i) {
        sum = sum + p;
        p = p * a;
    }
    if (!sum.is_zero()) throw ConstructionError("companion_matrix: power sum is not zero");
    return a;
}

// Integer polynomial utilities used to build cyclotomic matrices.
namespace poly {

// Coefficient vectors are little-endian: p[i] is the coefficient of x^i.
using Poly = std::vector<BigInt>;

inline Poly x_pow_minus_one(unsigned n) {
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    return p;
}

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of polynomials with integer coefficients; requires the
// division to be exact and the divisor monic-led (true for cyclotomics).
inline Poly divide_exact(Poly num, const Poly& den) {
    Poly n = std::move(num), d = den;
    trim(n);
    Poly q;
    if (d.empty()) throw ArgumentError("poly division by zero");
    q.assign(n.size() >= d.size() ? n.size() - d.size() + 1 : 0, 0);
    while (n.size() >= d.size() && !n.empty()) {
        std::size_t shift = n.size() - d.size();
        if (n.back() % d.back() != 0) throw ArgumentError("poly division not exact");
        BigInt c = n.back() / d.back();
        q[shift] = c;
        for (std::size_t i = 0; i < d.size(); ++i) n[shift + i] -= c * d[i];
        trim(n);
    }
    if (!n.empty()) throw ArgumentError("poly division left a remainder");
    return q;
}

}  // namespace poly

inline unsigned euler_phi(unsigned m) {
    unsigned result = m, n = m;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

// Coefficients of the m-th cyclotomic polynomial, computed by dividing x^m - 1
// by all lower cyclotomic factors.
inline poly::Poly cyclotomic_polynomial(unsigned m) {
    if (m == 0) throw ArgumentError("cyclotomic_polynomial: m must be positive");
    poly::Poly p = poly::x_pow_minus_one(m);
    for (unsigned d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        poly::Poly q = cyclotomic_polynomial(d);
        p = poly::divide_exact(std::move(p), q);
    }
    return p;
}

// Integer matrix of order exactly m with minimal polynomial Phi_m, realized as
// the companion matrix of Phi_m. Its size is phi(m) x phi(m), and for any
// integer polynomial f either f(A) = 0 or det f(A) != 0.
inline IntMat cyclotomic_action_matrix(unsigned m) {
    if (m < 2) throw ArgumentError("cyclotomic_action_matrix: m must be at least 2");
    poly::Poly phi = cyclotomic_polynomial(m);
    // Monic of degree phi(m); strip the leading 1 for the companion builder.
    std::vector<BigInt> c(phi.begin(), phi.end() - 1);
    IntMat a = companion_of_monic(c);
    if (a.rows() != euler_phi(m)) throw ConstructionError("cyclotomic matrix has wrong size");
    if (!a.pow(m).is_identity()) throw ConstructionError("cyclotomic matrix: A^m != I");
    for (unsigned d = 1; d < m; ++d)
        if (m % d == 0 && a.pow(d).is_identity())
            throw ConstructionError("cyclotomic matrix: order divides a proper divisor of m");
    return a;
}

// Evaluate an integer polynomial at a square matrix.
inline IntMat eval_poly_at(const poly::Poly& f, const IntMat& a) {
    IntMat r(a.rows(), a.cols());
    IntMat p = IntMat::identity(a.rows());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != 0) r = r + p.scaled(f[i]);
        if (i + 1 < f.size()) p = p * a;
    }
    return r;
}

}  // namespace grouplaw
