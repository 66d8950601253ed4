#include "slabkit/factored.hpp"

#include <algorithm>

#include "slabkit/error.hpp"

namespace slabkit {

bool poly_less(const MPoly& a, const MPoly& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i].mono != y[i].mono) return x[i].mono > y[i].mono;
    if (x[i].coeff != y[i].coeff) return x[i].coeff < y[i].coeff;
  }
  return x.size() < y.size();
}

namespace {

template <typename Combine>
FactorList merge_lists(const FactorList& x, const FactorList& y, Combine combine) {
  FactorList out;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && poly_less(x[i].poly, y[j].poly))) {
      out.push_back(x[i++]);
    } else if (i == x.size() || poly_less(y[j].poly, x[i].poly)) {
      out.push_back(y[j++]);
    } else {
      out.push_back({x[i].poly, combine(x[i].mult, y[j].mult)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

FactorList factor_product(const FactorList& x, const FactorList& y) {
  return merge_lists(x, y, [](unsigned p, unsigned q) { return p + q; });
}

FactorList factor_lcm(const FactorList& x, const FactorList& y) {
  return merge_lists(x, y, [](unsigned p, unsigned q) { return std::max(p, q); });
}

MPoly factor_cofactor(const FactorList& big, const FactorList& small, std::size_t nvars) {
  MPoly out = MPoly::constant(nvars, 1);
  std::size_t j = 0;
  for (const auto& f : big) {
    unsigned have = 0;
    while (j < small.size() && poly_less(small[j].poly, f.poly)) ++j;
    if (j < small.size() && small[j].poly == f.poly) have = small[j].mult;
    if (have > f.mult) throw Error(ErrorKind::InvalidArgument, "factor list does not divide");
    if (f.mult > have) out = out * f.poly.pow(f.mult - have);
  }
  return out;
}

MPoly factor_expand(const FactorList& f, std::size_t nvars) { return factor_cofactor(f, {}, nvars); }

Rat factor_eval(const FactorList& f, std::span<const Rat> point) {
  Rat v = 1;
  for (const auto& x : f) {
    Rat b = x.poly.eval(point);
    for (unsigned k = 0; k < x.mult; ++k) v *= b;
  }
  return v;
}

std::string factor_key(const FactorList& f) {
  std::string k;
  for (const auto& x : f) {
    for (const auto& t : x.poly.terms()) {
      k += std::to_string(t.mono.key());
      k += ':';
      k += to_string(t.coeff);
      k += ',';
    }
    k += '^';
    k += std::to_string(x.mult);
    k += ';';
  }
  return k;
}

FactoredFraction FactoredFraction::quotient(MPoly num, const MPoly& divisor) {
  if (divisor.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by the zero polynomial");
  if (divisor.is_constant()) return FactoredFraction(num * (1 / divisor.constant_value()));
  Rat c = divisor.content();
  return FactoredFraction(num * (1 / c), FactorList{{divisor * (1 / c), 1}});
}

FactoredFraction operator+(const FactoredFraction& x, const FactoredFraction& y) {
  if (x.num_.is_zero()) return y;
  if (y.num_.is_zero()) return x;
  const std::size_t nv = x.nvars();
  FactorList den = factor_lcm(x.den_, y.den_);
  MPoly n = x.num_ * factor_cofactor(den, x.den_, nv) + y.num_ * factor_cofactor(den, y.den_, nv);
  return FactoredFraction(std::move(n), std::move(den));
}

FactoredFraction operator-(const FactoredFraction& x, const FactoredFraction& y) {
  return x + FactoredFraction(-y.num_, y.den_);
}

FactoredFraction operator*(const FactoredFraction& x, const FactoredFraction& y) {
  return FactoredFraction(x.num_ * y.num_, factor_product(x.den_, y.den_));
}

FactoredFraction operator*(FactoredFraction x, const Rat& c) {
  x.num_ *= c;
  return x;
}

Rat FactoredFraction::eval(std::span<const Rat> point) const {
  Rat d = factor_eval(den_, point);
  if (d == 0) throw Error(ErrorKind::PoleAtPoint, "denominator vanishes at evaluation point");
  return num_.eval(point) / d;
}

RatFunc FactoredFraction::to_ratfunc() const {
  const std::size_t nv = nvars();
  if (num_.is_zero()) return RatFunc(nv);
  MPoly n = num_;
  FactorList left;
  for (const auto& f : den_) {
    unsigned m = f.mult;
    while (m > 0) {
      auto q = n.divide_exact(f.poly);
      if (!q) break;
      n = std::move(*q);
      --m;
    }
    if (m > 0) left.push_back({f.poly, m});
  }
  return rf_from_coprime(std::move(n), factor_expand(left, nv));
}

void FractionAccumulator::add(const FactoredFraction& f) {
  if (f.num().is_zero()) return;
  std::string k = factor_key(f.den());
  auto it = groups_.find(k);
  if (it == groups_.end())
    groups_.emplace(std::move(k), f);
  else
    it->second = FactoredFraction(it->second.num() + f.num(), f.den());
}

void FractionAccumulator::merge(const FractionAccumulator& other) {
  for (const auto& [k, f] : other.groups_) add(f);
}

FactoredFraction FractionAccumulator::total(std::size_t nvars) const {
  FactoredFraction sum{MPoly(nvars)};
  for (const auto& [k, f] : groups_) sum = sum + f;
  return sum;
}

}  // namespace slabkit
