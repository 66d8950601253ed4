#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slabkit/rational.hpp"

namespace slabkit {

/// Packed exponent vector. Layout (most significant first): 8 bits total
/// degree, then one 7-bit field per variable with variable 0 highest, so
/// that integer comparison of keys is graded lexicographic order with
/// x_0 > x_1 > ... > x_{n-1}.
class Monomial {
 public:
  static constexpr std::size_t kMaxVars = 8;
  static constexpr unsigned kMaxExponent = 63;
  static constexpr unsigned kMaxDegree = 255;

  constexpr Monomial() = default;
  explicit Monomial(std::span<const unsigned> exps);

  static constexpr Monomial from_key(std::uint64_t key) { return Monomial(key, 0); }

  std::uint64_t key() const { return key_; }
  unsigned degree() const { return static_cast<unsigned>(key_ >> 56); }
  unsigned exponent(std::size_t var) const {
    return static_cast<unsigned>((key_ >> shift(var)) & 0x7f);
  }
  std::vector<unsigned> exponents(std::size_t nvars) const;

  /// Product of monomials; throws when an exponent or the degree overflows.
  Monomial operator*(Monomial other) const;
  bool divides(Monomial other) const;
  /// other / *this, assuming divides(other).
  Monomial quotient_of(Monomial other) const { return Monomial(other.key_ - key_, 0); }
  Monomial gcd(Monomial other, std::size_t nvars) const;

  friend bool operator==(Monomial a, Monomial b) { return a.key_ == b.key_; }
  friend auto operator<=>(Monomial a, Monomial b) { return a.key_ <=> b.key_; }

  static constexpr unsigned shift(std::size_t var) { return static_cast<unsigned>(7 * (7 - var)); }

 private:
  constexpr Monomial(std::uint64_t key, int) : key_(key) {}
  std::uint64_t key_ = 0;
};

struct Term {
  Monomial mono;
  Rat coeff;
};

/// Sparse multivariate polynomial over Q. Terms are kept sorted in
/// descending graded lexicographic order with no zero coefficients.
class MPoly {
 public:
  MPoly() = default;
  explicit MPoly(std::size_t nvars) : nvars_(nvars) {}

  static MPoly constant(std::size_t nvars, const Rat& c);
  static MPoly variable(std::size_t nvars, std::size_t var);
  /// Builds from arbitrary (exponents, coefficient) pairs; duplicates are summed.
  static MPoly from_terms(std::size_t nvars,
                          const std::vector<std::pair<std::vector<unsigned>, Rat>>& terms);
  static MPoly from_sorted_terms(std::size_t nvars, std::vector<Term> terms);
  /// Linear form sum_i coeffs[i] * x_i (+ constant).
  static MPoly linear(std::size_t nvars, std::span<const Rat> coeffs, const Rat& constant = 0);

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }
  bool is_monomial() const { return terms_.size() == 1; }
  Rat constant_value() const;

  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }
  unsigned degree_in(std::size_t var) const;
  bool involves(std::size_t var) const { return degree_in(var) > 0; }

  const Term& leading_term() const { return terms_.front(); }
  const Rat& leading_coeff() const { return terms_.front().coeff; }

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  MPoly& operator*=(const Rat& c);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(MPoly a, const Rat& c) { return a *= c; }
  friend MPoly operator*(const Rat& c, MPoly a) { return a *= c; }
  friend bool operator==(const MPoly& a, const MPoly& b);

  MPoly mul_term(Monomial m, const Rat& c) const;
  MPoly pow(unsigned e) const;

  Rat eval(std::span<const Rat> point) const;
  /// Substitutes values for some variables; entries that are nullopt stay symbolic.
  MPoly partial_eval(std::span<const std::optional<Rat>> values) const;
  MPoly derivative(std::size_t var) const;

  /// Variable i is replaced by sign[i] * x_{perm[i]}.
  MPoly signed_permute(std::span<const std::size_t> perm, std::span<const int> sign) const;
  /// Embeds into a ring with more variables (new variables appended).
  MPoly extend(std::size_t nvars) const;

  /// Exact quotient when `divisor` divides *this, nullopt otherwise.
  std::optional<MPoly> divide_exact(const MPoly& divisor) const;
  /// Remainder of division by a polynomial monic-able in `var` of degree k
  /// in that variable: repeatedly eliminates var^k.
  MPoly reduce_by(const MPoly& divisor, std::size_t var) const;

  /// Coefficients as a polynomial in `var` over the remaining variables.
  std::map<unsigned, MPoly> coefficients_in(std::size_t var) const;

  /// Positive rational c with *this / c having coprime integer coefficients
  /// and the sign of the leading coefficient.
  Rat content() const;
  /// *this scaled to coprime integer coefficients with positive leading coefficient.
  MPoly primitive() const;

  std::string to_string(std::span<const std::string> names) const;

 private:
  void add_scaled(const MPoly& o, const Rat& scale);

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Greatest common divisor over Q, normalized to a primitive integer
/// polynomial with positive leading coefficient (1 when coprime).
MPoly gcd(const MPoly& a, const MPoly& b);

/// Variable names a1..ad, t for a ring with d+1 variables.
std::vector<std::string> default_var_names(std::size_t nvars);

}  // namespace slabkit
