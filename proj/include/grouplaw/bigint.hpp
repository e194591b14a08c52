#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace grouplaw {

// Arbitrary-precision integer used for semidirect/Heisenberg coordinates and
// exact rational probabilities. Lattice coordinates and lamp keys stay int64.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_gcd(BigInt a, BigInt b) { return boost::multiprecision::gcd(a, b); }
inline BigInt big_abs(const BigInt& a) { return boost::multiprecision::abs(a); }

}  // namespace grouplaw
