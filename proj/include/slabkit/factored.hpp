#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "slabkit/ratfunc.hpp"

namespace slabkit {

/// Denominator kept as a product of primitive factors (positive leading
/// coefficient) with multiplicities, sorted canonically.
struct Factor {
  MPoly poly;
  unsigned mult = 1;
};
using FactorList = std::vector<Factor>;

/// Canonical total order on polynomials (terms compared in storage order).
bool poly_less(const MPoly& a, const MPoly& b);

FactorList factor_product(const FactorList& x, const FactorList& y);
FactorList factor_lcm(const FactorList& x, const FactorList& y);
/// Product of the factors of `big` left over after removing `small`
/// (which must divide it factorwise).
MPoly factor_cofactor(const FactorList& big, const FactorList& small, std::size_t nvars);
MPoly factor_expand(const FactorList& f, std::size_t nvars);
Rat factor_eval(const FactorList& f, std::span<const Rat> point);
std::string factor_key(const FactorList& f);

/// num / prod(den). Sums use the lcm of the factor lists, so no polynomial
/// gcd is needed until the final reduction, which only trial-divides by the
/// known factors.
class FactoredFraction {
 public:
  FactoredFraction() = default;
  explicit FactoredFraction(MPoly num) : num_(std::move(num)) {}
  FactoredFraction(MPoly num, FactorList den) : num_(std::move(num)), den_(std::move(den)) {}
  /// num / divisor with the divisor's constant content moved into num.
  static FactoredFraction quotient(MPoly num, const MPoly& divisor);

  const MPoly& num() const { return num_; }
  const FactorList& den() const { return den_; }
  std::size_t nvars() const { return num_.nvars(); }

  friend FactoredFraction operator+(const FactoredFraction& x, const FactoredFraction& y);
  friend FactoredFraction operator-(const FactoredFraction& x, const FactoredFraction& y);
  friend FactoredFraction operator*(const FactoredFraction& x, const FactoredFraction& y);
  friend FactoredFraction operator*(FactoredFraction x, const Rat& c);

  Rat eval(std::span<const Rat> point) const;
  /// Reduced RatFunc; assumes every denominator factor is irreducible.
  RatFunc to_ratfunc() const;

 private:
  MPoly num_;
  FactorList den_;
};

/// Sum of many fractions: terms with the same denominator are merged first
/// and the distinct denominators combined once at the end.
class FractionAccumulator {
 public:
  void add(const FactoredFraction& f);
  void merge(const FractionAccumulator& other);
  FactoredFraction total(std::size_t nvars) const;

 private:
  std::map<std::string, FactoredFraction> groups_;
};

}  // namespace slabkit
