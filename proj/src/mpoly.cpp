#include "slabkit/mpoly.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "slabkit/error.hpp"

namespace slabkit {

namespace {

constexpr std::uint64_t kGuardMask = [] {
  std::uint64_t m = 0;
  for (std::size_t v = 0; v < Monomial::kMaxVars; ++v) m |= std::uint64_t{0x40} << Monomial::shift(v);
  return m;
}();

bool desc(const Term& a, const Term& b) { return a.mono.key() > b.mono.key(); }

}  // namespace

Monomial::Monomial(std::span<const unsigned> exps) {
  if (exps.size() > kMaxVars) throw Error(ErrorKind::DimensionTooLarge, "too many polynomial variables");
  unsigned deg = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] > kMaxExponent) throw Error(ErrorKind::InvalidArgument, "exponent overflow");
    deg += exps[i];
    key_ |= std::uint64_t{exps[i]} << shift(i);
  }
  if (deg > kMaxDegree) throw Error(ErrorKind::InvalidArgument, "degree overflow");
  key_ |= std::uint64_t{deg} << 56;
}

std::vector<unsigned> Monomial::exponents(std::size_t nvars) const {
  std::vector<unsigned> out(nvars);
  for (std::size_t i = 0; i < nvars; ++i) out[i] = exponent(i);
  return out;
}

Monomial Monomial::operator*(Monomial other) const {
  if (degree() + other.degree() > kMaxDegree) throw Error(ErrorKind::InvalidArgument, "degree overflow");
  std::uint64_t k = key_ + other.key_;
  if (k & kGuardMask) throw Error(ErrorKind::InvalidArgument, "exponent overflow");
  return Monomial(k, 0);
}

bool Monomial::divides(Monomial other) const {
  for (std::size_t v = 0; v < kMaxVars; ++v)
    if (exponent(v) > other.exponent(v)) return false;
  return true;
}

Monomial Monomial::gcd(Monomial other, std::size_t nvars) const {
  std::vector<unsigned> e(nvars);
  for (std::size_t v = 0; v < nvars; ++v) e[v] = std::min(exponent(v), other.exponent(v));
  return Monomial(e);
}

MPoly MPoly::constant(std::size_t nvars, const Rat& c) {
  MPoly p(nvars);
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

MPoly MPoly::variable(std::size_t nvars, std::size_t var) {
  std::vector<unsigned> e(nvars, 0);
  e.at(var) = 1;
  MPoly p(nvars);
  p.terms_.push_back({Monomial(e), Rat(1)});
  return p;
}

MPoly MPoly::from_terms(std::size_t nvars,
                        const std::vector<std::pair<std::vector<unsigned>, Rat>>& terms) {
  std::map<std::uint64_t, Rat, std::greater<>> acc;
  for (const auto& [exps, c] : terms) {
    if (exps.size() != nvars) throw Error(ErrorKind::InvalidArgument, "exponent vector length != nvars");
    Rat& slot = acc[Monomial(exps).key()];
    slot += c;
    slot.canonicalize();
  }
  MPoly p(nvars);
  for (auto& [k, c] : acc)
    if (c != 0) p.terms_.push_back({Monomial::from_key(k), c});
  return p;
}

MPoly MPoly::from_sorted_terms(std::size_t nvars, std::vector<Term> terms) {
  MPoly p(nvars);
  p.terms_ = std::move(terms);
  return p;
}

MPoly MPoly::linear(std::size_t nvars, std::span<const Rat> coeffs, const Rat& constant) {
  MPoly p(nvars);
  std::vector<unsigned> e(nvars, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    e[i] = 1;
    p.terms_.push_back({Monomial(e), coeffs[i]});
    e[i] = 0;
  }
  if (constant != 0) p.terms_.push_back({Monomial{}, constant});
  std::sort(p.terms_.begin(), p.terms_.end(), desc);
  return p;
}

Rat MPoly::constant_value() const {
  if (terms_.empty()) return 0;
  const Term& last = terms_.back();
  return last.mono.degree() == 0 ? last.coeff : Rat(0);
}

unsigned MPoly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
  return d;
}

MPoly MPoly::operator-() const {
  MPoly p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

void MPoly::add_scaled(const MPoly& o, const Rat& scale) {
  if (o.terms_.empty()) return;
  if (nvars_ == 0 && terms_.empty()) nvars_ = o.nvars_;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() || j != o.terms_.end()) {
    if (j == o.terms_.end() || (i != terms_.end() && i->mono.key() > j->mono.key())) {
      out.push_back(std::move(*i++));
    } else if (i == terms_.end() || j->mono.key() > i->mono.key()) {
      out.push_back({j->mono, j->coeff * scale});
      ++j;
    } else {
      Rat c = i->coeff + j->coeff * scale;
      if (c != 0) out.push_back({i->mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
}

MPoly& MPoly::operator+=(const MPoly& o) {
  add_scaled(o, Rat(1));
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  add_scaled(o, Rat(-1));
  return *this;
}

MPoly& MPoly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

MPoly MPoly::mul_term(Monomial m, const Rat& c) const {
  MPoly p(nvars_);
  if (c == 0) return p;
  p.terms_.reserve(terms_.size());
  for (const auto& t : terms_) p.terms_.push_back({t.mono * m, t.coeff * c});
  return p;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  std::size_t nv = std::max(a.nvars_, b.nvars_);
  if (a.terms_.empty() || b.terms_.empty()) return MPoly(nv);
  if (a.terms_.size() == 1) {
    MPoly p = b.mul_term(a.terms_[0].mono, a.terms_[0].coeff);
    p.nvars_ = nv;
    return p;
  }
  if (b.terms_.size() == 1) {
    MPoly p = a.mul_term(b.terms_[0].mono, b.terms_[0].coeff);
    p.nvars_ = nv;
    return p;
  }
  std::unordered_map<std::uint64_t, Rat> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  Rat prod;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      mpq_mul(prod.get_mpq_t(), ta.coeff.get_mpq_t(), tb.coeff.get_mpq_t());
      auto [it, inserted] = acc.try_emplace((ta.mono * tb.mono).key());
      if (inserted)
        it->second = prod;
      else
        mpq_add(it->second.get_mpq_t(), it->second.get_mpq_t(), prod.get_mpq_t());
    }
  }
  MPoly p(nv);
  p.terms_.reserve(acc.size());
  for (auto& [k, c] : acc)
    if (c != 0) p.terms_.push_back({Monomial::from_key(k), std::move(c)});
  std::sort(p.terms_.begin(), p.terms_.end(), desc);
  return p;
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly result = constant(nvars_, 1);
  MPoly base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Rat MPoly::eval(std::span<const Rat> point) const {
  if (point.size() != nvars_) throw Error(ErrorKind::InvalidArgument, "evaluation point has wrong arity");
  // Power tables avoid recomputing x^k per term.
  std::vector<std::vector<Rat>> powers(nvars_);
  for (std::size_t v = 0; v < nvars_; ++v) {
    unsigned dmax = degree_in(v);
    powers[v].resize(dmax + 1);
    powers[v][0] = 1;
    for (unsigned k = 1; k <= dmax; ++k) powers[v][k] = powers[v][k - 1] * point[v];
  }
  Rat sum = 0;
  Rat term;
  for (const auto& t : terms_) {
    term = t.coeff;
    for (std::size_t v = 0; v < nvars_; ++v) {
      unsigned e = t.mono.exponent(v);
      if (e) term *= powers[v][e];
    }
    sum += term;
  }
  return sum;
}

MPoly MPoly::partial_eval(std::span<const std::optional<Rat>> values) const {
  std::map<std::uint64_t, Rat, std::greater<>> acc;
  for (const auto& t : terms_) {
    Rat c = t.coeff;
    std::vector<unsigned> e = t.mono.exponents(nvars_);
    for (std::size_t v = 0; v < nvars_ && v < values.size(); ++v) {
      if (values[v] && e[v]) {
        c *= rat_pow(*values[v], e[v]);
        e[v] = 0;
      }
    }
    acc[Monomial(e).key()] += c;
  }
  MPoly p(nvars_);
  for (auto& [k, c] : acc)
    if (c != 0) p.terms_.push_back({Monomial::from_key(k), c});
  return p;
}

MPoly MPoly::derivative(std::size_t var) const {
  std::vector<std::pair<std::vector<unsigned>, Rat>> out;
  for (const auto& t : terms_) {
    std::vector<unsigned> e = t.mono.exponents(nvars_);
    if (e[var] == 0) continue;
    Rat c = t.coeff * e[var];
    --e[var];
    out.emplace_back(std::move(e), std::move(c));
  }
  return from_terms(nvars_, out);
}

MPoly MPoly::signed_permute(std::span<const std::size_t> perm, std::span<const int> sign) const {
  std::vector<std::pair<std::vector<unsigned>, Rat>> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    std::vector<unsigned> src = t.mono.exponents(nvars_);
    std::vector<unsigned> dst(nvars_, 0);
    Rat c = t.coeff;
    for (std::size_t i = 0; i < nvars_; ++i) {
      dst[perm[i]] += src[i];
      if (sign[i] < 0 && (src[i] & 1u)) c = -c;
    }
    out.emplace_back(std::move(dst), std::move(c));
  }
  return from_terms(nvars_, out);
}

MPoly MPoly::extend(std::size_t nvars) const {
  if (nvars < nvars_) throw Error(ErrorKind::InvalidArgument, "cannot shrink polynomial ring");
  std::vector<std::pair<std::vector<unsigned>, Rat>> out;
  for (const auto& t : terms_) {
    auto e = t.mono.exponents(nvars_);
    e.resize(nvars, 0);
    out.emplace_back(std::move(e), t.coeff);
  }
  return from_terms(nvars, out);
}

std::optional<MPoly> MPoly::divide_exact(const MPoly& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by zero polynomial");
  if (is_zero()) return MPoly(nvars_);
  const Term& lead = divisor.terms_.front();
  if (divisor.terms_.size() == 1) {
    MPoly q(nvars_);
    q.terms_.reserve(terms_.size());
    Rat inv = 1 / lead.coeff;
    for (const auto& t : terms_) {
      if (!lead.mono.divides(t.mono)) return std::nullopt;
      q.terms_.push_back({lead.mono.quotient_of(t.mono), t.coeff * inv});
    }
    return q;
  }
  MPoly rem = *this;
  std::vector<Term> quot;
  Rat inv = 1 / lead.coeff;
  while (!rem.is_zero()) {
    const Term& r = rem.terms_.front();
    if (!lead.mono.divides(r.mono)) return std::nullopt;
    Monomial qm = lead.mono.quotient_of(r.mono);
    Rat qc = r.coeff * inv;
    rem.add_scaled(divisor.mul_term(qm, Rat(1)), -qc);
    quot.push_back({qm, std::move(qc)});
  }
  return from_sorted_terms(nvars_, std::move(quot));
}

MPoly MPoly::reduce_by(const MPoly& divisor, std::size_t var) const {
  unsigned k = divisor.degree_in(var);
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "reduction divisor does not involve variable");
  auto dcoeffs = divisor.coefficients_in(var);
  const MPoly& lc = dcoeffs.at(k);
  if (!lc.is_constant()) throw Error(ErrorKind::InvalidArgument, "reduction divisor must have constant leading coefficient");
  // var^k == tail, where tail = -(divisor - lc var^k) / lc.
  MPoly tail = divisor;
  std::vector<unsigned> ek(nvars_, 0);
  ek[var] = k;
  tail -= MPoly::from_terms(nvars_, {{ek, lc.constant_value()}});
  tail *= Rat(-1) / lc.constant_value();

  MPoly result(nvars_);
  MPoly work = *this;
  while (!work.is_zero()) {
    MPoly keep(nvars_);
    MPoly next(nvars_);
    for (const auto& t : work.terms_) {
      unsigned e = t.mono.exponent(var);
      if (e < k) {
        keep.terms_.push_back(t);
      } else {
        std::vector<unsigned> ex = t.mono.exponents(nvars_);
        ex[var] -= k;
        next += tail.mul_term(Monomial(ex), t.coeff);
      }
    }
    result += keep;
    work = std::move(next);
  }
  return result;
}

std::map<unsigned, MPoly> MPoly::coefficients_in(std::size_t var) const {
  std::map<unsigned, std::vector<std::pair<std::vector<unsigned>, Rat>>> parts;
  for (const auto& t : terms_) {
    auto e = t.mono.exponents(nvars_);
    unsigned d = e[var];
    e[var] = 0;
    parts[d].emplace_back(std::move(e), t.coeff);
  }
  std::map<unsigned, MPoly> out;
  for (auto& [d, ts] : parts) out.emplace(d, from_terms(nvars_, ts));
  return out;
}

Rat MPoly::content() const {
  if (terms_.empty()) return 1;
  Int g = 0;
  Int l = 1;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rat c(g, l);
  c.canonicalize();
  if (terms_.front().coeff < 0) c = -c;
  return c;
}

MPoly MPoly::primitive() const {
  if (terms_.empty()) return *this;
  MPoly p = *this;
  p *= 1 / content();
  return p;
}

std::string MPoly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rat c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool is_one = (c == 1);
    bool has_vars = t.mono.degree() > 0;
    if (!is_one || !has_vars) {
      os << slabkit::to_string(c);
      if (has_vars) os << "*";
    }
    bool first_var = true;
    for (std::size_t v = 0; v < nvars_; ++v) {
      unsigned e = t.mono.exponent(v);
      if (!e) continue;
      if (!first_var) os << "*";
      first_var = false;
      os << (v < names.size() ? names[v] : "x" + std::to_string(v));
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

std::vector<std::string> default_var_names(std::size_t nvars) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i + 1 < nvars; ++i) names.push_back("a" + std::to_string(i + 1));
  if (nvars > 0) names.push_back("t");
  return names;
}

// ---------------------------------------------------------------------------
// GCD: recursive content/primitive-part decomposition with a primitive
// pseudo-remainder sequence in one main variable.

namespace {

MPoly normalized(const MPoly& p) { return p.primitive(); }

MPoly monomial_content(const MPoly& p) {
  Monomial m = p.terms().front().mono;
  for (const auto& t : p.terms()) m = m.gcd(t.mono, p.nvars());
  return MPoly::from_sorted_terms(p.nvars(), {{m, Rat(1)}});
}

MPoly content_in(const MPoly& p, std::size_t var) {
  auto coeffs = p.coefficients_in(var);
  MPoly g(p.nvars());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    g = gcd(g, it->second);
    if (g.is_constant()) break;
  }
  return g;
}

MPoly primitive_in(const MPoly& p, const MPoly& cont) {
  if (cont.is_constant()) return p.primitive();
  auto q = p.divide_exact(cont);
  return q->primitive();
}

MPoly lc_in(const MPoly& p, std::size_t var) { return p.coefficients_in(var).rbegin()->second; }

MPoly pseudo_remainder(MPoly f, const MPoly& g, std::size_t var) {
  unsigned dg = g.degree_in(var);
  MPoly lcg = lc_in(g, var);
  while (!f.is_zero()) {
    unsigned df = f.degree_in(var);
    if (df < dg) break;
    MPoly lcf = lc_in(f, var);
    std::vector<unsigned> e(f.nvars(), 0);
    e[var] = df - dg;
    MPoly shift = lcf * MPoly::from_terms(f.nvars(), {{e, Rat(1)}});
    f = lcg * f - shift * g;
  }
  return f;
}

}  // namespace

namespace {

MPoly prs_gcd(const MPoly& a, const MPoly& b) {
  const std::size_t nv = std::max(a.nvars(), b.nvars());
  if (a.is_zero()) return b.is_zero() ? MPoly(nv) : normalized(b);
  if (b.is_zero()) return normalized(a);
  if (a.is_constant() || b.is_constant()) return MPoly::constant(nv, 1);
  if (a.is_monomial()) {
    Monomial m = a.terms()[0].mono.gcd(monomial_content(b).terms()[0].mono, nv);
    return MPoly::from_sorted_terms(nv, {{m, Rat(1)}});
  }
  if (b.is_monomial()) return gcd(b, a);
  if (a == b) return normalized(a);

  // Variable present in both with the smallest degree drives the PRS.
  std::size_t var = nv;
  unsigned best = ~0u;
  for (std::size_t v = 0; v < nv; ++v) {
    unsigned da = a.degree_in(v), db = b.degree_in(v);
    if (da == 0 && db == 0) continue;
    if (da == 0 || db == 0) {
      // gcd(a, b) with b free of v equals gcd of b with every v-coefficient of a.
      const MPoly& with = da ? a : b;
      const MPoly& without = da ? b : a;
      MPoly g = without;
      for (const auto& [d, c] : with.coefficients_in(v)) {
        g = gcd(g, c);
        if (g.is_constant()) return MPoly::constant(nv, 1);
      }
      return normalized(g);
    }
    if (std::max(da, db) < best) {
      best = std::max(da, db);
      var = v;
    }
  }

  MPoly ca = content_in(a, var);
  MPoly cb = content_in(b, var);
  MPoly c = gcd(ca, cb);
  MPoly f = primitive_in(a, ca);
  MPoly g = primitive_in(b, cb);
  if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);
  while (true) {
    MPoly r = pseudo_remainder(f, g, var);
    if (r.is_zero()) break;
    if (r.degree_in(var) == 0) {
      g = MPoly::constant(nv, 1);
      break;
    }
    f = std::move(g);
    g = primitive_in(r, content_in(r, var));
  }
  if (!g.is_constant()) g = primitive_in(g, content_in(g, var));
  return normalized(c * g);
}


}  // namespace

namespace {

// Heuristic GCD (Char, Geddes, Gonnet): evaluate one variable at a large
// integer, recurse, and recover the answer from the xi-adic expansion of the
// image. Any candidate is confirmed by trial division, so a wrong guess only
// costs time. Inputs carry integer coefficients; the result includes the
// integer content.

Int int_content(const MPoly& p) {
  Int g = 0;
  for (const auto& t : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
  return g;
}

Int max_norm(const MPoly& p) {
  Int m = 0;
  for (const auto& t : p.terms()) {
    Int a = abs(t.coeff.get_num());
    if (a > m) m = a;
  }
  return m;
}

std::optional<MPoly> xi_lift(const MPoly& h, const Int& xi, std::size_t var, unsigned max_deg) {
  const std::size_t nv = h.nvars();
  std::vector<std::pair<std::vector<unsigned>, Rat>> out;
  Int half = xi / 2;
  for (const auto& t : h.terms()) {
    Int c = t.coeff.get_num();
    std::vector<unsigned> e = t.mono.exponents(nv);
    unsigned k = 0;
    while (c != 0) {
      if (k > max_deg) return std::nullopt;
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
      if (r > half) r -= xi;
      if (r != 0) {
        e[var] = k;
        out.emplace_back(e, Rat(r));
      }
      c = (c - r) / xi;
      ++k;
    }
  }
  return MPoly::from_terms(nv, out);
}

MPoly scaled_int(const MPoly& p, const Int& c) { return p * Rat(c); }

std::optional<MPoly> heu_gcd(const MPoly& f, const MPoly& g, int depth);

std::optional<MPoly> heu_gcd_impl(const MPoly& f0, const MPoly& g0, int depth) {
  const std::size_t nv = std::max(f0.nvars(), g0.nvars());
  if (f0.is_zero()) return g0.leading_coeff() < 0 ? -g0 : g0;
  if (g0.is_zero()) return f0.leading_coeff() < 0 ? -f0 : f0;
  if (f0.is_constant() || g0.is_constant()) {
    Int c;
    Int cf = int_content(f0), cg = int_content(g0);
    mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
    return MPoly::constant(nv, Rat(c));
  }
  std::size_t var = nv;
  for (std::size_t v = 0; v < nv && var == nv; ++v)
    if (f0.involves(v) || g0.involves(v)) var = v;
  if (!f0.involves(var) || !g0.involves(var)) {
    const MPoly& with = f0.involves(var) ? f0 : g0;
    MPoly h = f0.involves(var) ? g0 : f0;
    for (const auto& [d, c] : with.coefficients_in(var)) {
      auto next = heu_gcd(h, c, depth);
      if (!next) return std::nullopt;
      h = std::move(*next);
    }
    return h;
  }

  Int cf = int_content(f0), cg = int_content(g0), c;
  mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  MPoly f = f0 * Rat(Int(1), cf);
  MPoly g = g0 * Rat(Int(1), cg);
  const unsigned max_deg = std::min(f.degree_in(var), g.degree_in(var));

  Int xi = 2 * std::min(max_norm(f), max_norm(g)) + 29;
  std::vector<std::optional<Rat>> at(nv);
  for (int attempt = 0; attempt < 6; ++attempt) {
    at[var] = Rat(xi);
    MPoly ff = f.partial_eval(at);
    MPoly gg = g.partial_eval(at);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto h = heu_gcd(ff, gg, depth + 1);
      if (!h) return std::nullopt;
      auto lifted = xi_lift(*h, xi, var, max_deg);
      if (lifted && !lifted->is_zero()) {
        MPoly cand = lifted->primitive();
        if (f.divide_exact(cand) && g.divide_exact(cand)) return scaled_int(cand, c);
      }
    }
    // Deterministic growth of the evaluation point.
    Int root;
    mpz_sqrt(root.get_mpz_t(), xi.get_mpz_t());
    mpz_sqrt(root.get_mpz_t(), root.get_mpz_t());
    xi = xi * 73794 * (root + 1) / 27011;
  }
  return std::nullopt;
}

std::optional<MPoly> heu_gcd(const MPoly& f, const MPoly& g, int depth) {
  if (depth > 16) return std::nullopt;
  return heu_gcd_impl(f, g, depth);
}

}  // namespace

MPoly gcd(const MPoly& a, const MPoly& b) {
  const std::size_t nv = std::max(a.nvars(), b.nvars());
  if (a.is_zero()) return b.is_zero() ? MPoly(nv) : normalized(b);
  if (b.is_zero()) return normalized(a);
  if (a.is_constant() || b.is_constant()) return MPoly::constant(nv, 1);
  if (a.is_monomial()) {
    Monomial m = a.terms()[0].mono.gcd(monomial_content(b).terms()[0].mono, nv);
    return MPoly::from_sorted_terms(nv, {{m, Rat(1)}});
  }
  if (b.is_monomial()) return gcd(b, a);
  if (a == b) return normalized(a);

  MPoly ma = monomial_content(a), mb = monomial_content(b);
  Monomial m = ma.terms()[0].mono.gcd(mb.terms()[0].mono, nv);
  MPoly mono = MPoly::from_sorted_terms(nv, {{m, Rat(1)}});
  MPoly pa = a.primitive(), pb = b.primitive();
  if (!ma.is_constant()) pa = *pa.divide_exact(ma);
  if (!mb.is_constant()) pb = *pb.divide_exact(mb);
  if (auto h = heu_gcd(pa, pb, 0)) return normalized(mono * *h);
  return normalized(mono * prs_gcd(pa, pb));
}

}  // namespace slabkit
