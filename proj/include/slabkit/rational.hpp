#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace slabkit {

/// Exact rational number. Always canonical (reduced, positive denominator).
using Rat = mpq_class;
using Int = mpz_class;
using RatVec = std::vector<Rat>;

/// Parses "p/q", "p", or a decimal literal such as "-0.25".
Rat parse_rat(std::string_view text);

/// "p/q" or "p" when the denominator is 1.
std::string to_string(const Rat& r);

Rat rat_pow(const Rat& base, unsigned exp);

inline int sign(const Rat& r) { return sgn(r); }

Rat dot(std::span<const Rat> a, std::span<const Rat> b);

/// Factorial as an exact integer.
Int factorial(unsigned n);

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray whose first nonzero entry is positive.
std::vector<Int> primitive_direction(std::span<const Rat> v);

/// Exact determinant by fraction-free Gaussian elimination (row-major n x n).
Rat determinant(std::vector<Rat> m, std::size_t n);

/// Rank of a row-major rows x cols matrix.
std::size_t rank(std::vector<Rat> m, std::size_t rows, std::size_t cols);

/// Solves the square system A x = b; returns false when A is singular.
bool solve(std::vector<Rat> a, std::vector<Rat> b, std::size_t n, std::vector<Rat>& x);

}  // namespace slabkit
