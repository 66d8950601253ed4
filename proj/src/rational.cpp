#include "slabkit/rational.hpp"

#include <utility>

#include "slabkit/error.hpp"

namespace slabkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::PoleAtPoint: return "PoleAtPoint";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NotFullDimensional: return "NotFullDimensional";
    case ErrorKind::NotVertexSet: return "NotVertexSet";
    case ErrorKind::NotCentrallySymmetric: return "NotCentrallySymmetric";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::RepresentativeSearchExhausted: return "RepresentativeSearchExhausted";
    case ErrorKind::BoundaryPoint: return "BoundaryPoint";
    case ErrorKind::EmptySlice: return "EmptySlice";
    case ErrorKind::DegenerateAcceptance: return "DegenerateAcceptance";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

Rat parse_rat(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw Error(ErrorKind::Parse, "empty rational literal");
  try {
    if (auto dot_pos = s.find('.'); dot_pos != std::string::npos) {
      if (s.find('/') != std::string::npos) throw Error(ErrorKind::Parse, "mixed decimal/fraction: " + s);
      std::string digits = s.substr(0, dot_pos) + s.substr(dot_pos + 1);
      std::size_t frac_len = s.size() - dot_pos - 1;
      if (digits == "-" || digits == "+" || digits.empty()) throw Error(ErrorKind::Parse, s);
      if (digits.front() == '+') digits.erase(digits.begin());
      Int num(digits, 10);
      Int den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
      Rat r(num, den);
      r.canonicalize();
      return r;
    }
    if (s.front() == '+') s.erase(s.begin());
    Rat r(s, 10);
    if (r.get_den() == 0) throw Error(ErrorKind::ZeroDenominator, s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Parse, "bad rational literal: " + s);
  }
}

std::string to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat rat_pow(const Rat& base, unsigned exp) {
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  return out;
}

Rat dot(std::span<const Rat> a, std::span<const Rat> b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Int factorial(unsigned n) {
  Int out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

std::vector<Int> primitive_direction(std::span<const Rat> v) {
  Int lcm_den = 1;
  for (const auto& x : v) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Int> out;
  out.reserve(v.size());
  Int g = 0;
  for (const auto& x : v) {
    Int n = x.get_num() * (lcm_den / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    out.push_back(std::move(n));
  }
  if (g == 0) throw Error(ErrorKind::InvalidArgument, "zero vector has no direction");
  int lead = 0;
  for (const auto& n : out) {
    if (n != 0) {
      lead = sgn(n);
      break;
    }
  }
  for (auto& n : out) {
    n /= g;
    if (lead < 0) n = -n;
  }
  return out;
}

Rat determinant(std::vector<Rat> m, std::size_t n) {
  Rat det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot * n + col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[pivot * n + k], m[col * n + k]);
      det = -det;
    }
    const Rat p = m[col * n + col];
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r * n + col] == 0) continue;
      Rat f = m[r * n + col] / p;
      for (std::size_t k = col; k < n; ++k) m[r * n + k] -= f * m[col * n + k];
    }
  }
  return det;
}

std::size_t rank(std::vector<Rat> m, std::size_t rows, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot * cols + col] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r)
      for (std::size_t k = 0; k < cols; ++k) std::swap(m[pivot * cols + k], m[r * cols + k]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i * cols + col] == 0) continue;
      Rat f = m[i * cols + col] / m[r * cols + col];
      for (std::size_t k = col; k < cols; ++k) m[i * cols + k] -= f * m[r * cols + k];
    }
    ++r;
  }
  return r;
}

bool solve(std::vector<Rat> a, std::vector<Rat> b, std::size_t n, std::vector<Rat>& x) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot * n + col] == 0) ++pivot;
    if (pivot == n) return false;
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[pivot * n + k], a[col * n + k]);
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r * n + col] == 0) continue;
      Rat f = a[r * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i * n + i];
  return true;
}

}  // namespace slabkit
