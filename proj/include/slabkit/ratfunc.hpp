#pragma once

#include <climits>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "slabkit/mpoly.hpp"

namespace slabkit {

/// Reduced quotient num/den over Q. The denominator is a primitive integer
/// polynomial whose leading coefficient (grlex) is positive; zero is 0/1.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(std::size_t nvars) : num_(nvars), den_(MPoly::constant(nvars, 1)) {}
  /// Polynomial embedded as a rational function (no reduction needed).
  explicit RatFunc(MPoly p);

  static RatFunc constant(std::size_t nvars, const Rat& c);
  static RatFunc variable(std::size_t nvars, std::size_t var);

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  std::size_t nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const Rat& c);
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  friend RatFunc rf_normalize(MPoly num, MPoly den);
  friend RatFunc rf_from_coprime(MPoly num, MPoly den);
  RatFunc(MPoly num, MPoly den, int) : num_(std::move(num)), den_(std::move(den)) {}

  MPoly num_;
  MPoly den_;
};

RatFunc rf_normalize(MPoly num, MPoly den);
/// Like rf_normalize for a pair already known to be coprime (no gcd taken).
RatFunc rf_from_coprime(MPoly num, MPoly den);

/// Exact value; PoleAtPoint when the denominator vanishes.
Rat rf_eval(const RatFunc& f, std::span<const Rat> point);

RatFunc rf_derivative(const RatFunc& f, std::size_t var);

inline constexpr int kNegInfinity = INT_MIN;
/// deg(num) - deg(den); kNegInfinity for the zero function.
int rf_degree(const RatFunc& f);

/// Byte string that identifies f uniquely (f is always stored reduced).
std::string rf_canonical_key(const RatFunc& f);

RatFunc rf_signed_permute(const RatFunc& f, std::span<const std::size_t> perm, std::span<const int> sign);

/// Sphere polynomial a_1^2 + ... + a_d^2 - 1 in a ring with d+1 variables.
MPoly sphere_polynomial(std::size_t d);
/// Normal form of p modulo a_1^2 + ... + a_d^2 - 1 (a_1-degree below two).
MPoly reduce_mod_sphere(const MPoly& p, std::size_t d);
/// Certified test: f - g lies in the ideal of the sphere, i.e. f and g agree
/// for every a on S^{d-1} and every t where both are defined.
bool equal_mod_sphere(const RatFunc& f, const RatFunc& g, std::size_t d);

std::string to_string(const RatFunc& f);
std::string to_latex(const RatFunc& f);

nlohmann::json to_json(const MPoly& p);
nlohmann::json to_json(const RatFunc& f);
MPoly mpoly_from_json(const nlohmann::json& j, std::size_t nvars);
RatFunc ratfunc_from_json(const nlohmann::json& j);

}  // namespace slabkit
