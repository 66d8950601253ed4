#include "slabkit/ratfunc.hpp"

#include <sstream>

#include "slabkit/error.hpp"

namespace slabkit {

namespace {

std::size_t ring_size(const RatFunc& a, const RatFunc& b) { return std::max(a.nvars(), b.nvars()); }

}  // namespace

RatFunc::RatFunc(MPoly p) : num_(std::move(p)), den_(MPoly::constant(num_.nvars(), 1)) {}

RatFunc RatFunc::constant(std::size_t nvars, const Rat& c) { return RatFunc(MPoly::constant(nvars, c)); }

RatFunc RatFunc::variable(std::size_t nvars, std::size_t var) { return RatFunc(MPoly::variable(nvars, var)); }

RatFunc rf_normalize(MPoly num, MPoly den) {
  if (den.is_zero()) throw Error(ErrorKind::ZeroDenominator, "rational function with zero denominator");
  const std::size_t nv = std::max(num.nvars(), den.nvars());
  if (num.is_zero()) return RatFunc(nv);
  if (den.is_constant()) {
    num *= 1 / den.constant_value();
    return RatFunc(MPoly(num).extend(nv), MPoly::constant(nv, 1), 0);
  }
  MPoly g = gcd(num, den);
  if (!g.is_constant()) {
    num = *num.divide_exact(g);
    den = *den.divide_exact(g);
  }
  return rf_from_coprime(std::move(num), std::move(den));
}

RatFunc rf_from_coprime(MPoly num, MPoly den) {
  if (den.is_zero()) throw Error(ErrorKind::ZeroDenominator, "rational function with zero denominator");
  const std::size_t nv = std::max(num.nvars(), den.nvars());
  if (num.is_zero()) return RatFunc(nv);
  Rat c = den.content();
  if (c != 1) {
    Rat inv = 1 / c;
    num *= inv;
    den *= inv;
  }
  if (num.nvars() < nv) num = num.extend(nv);
  if (den.nvars() < nv) den = den.extend(nv);
  return RatFunc(std::move(num), std::move(den), 0);
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, 0); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.is_polynomial()) return RatFunc(a.num_ + b.num_);
    return rf_normalize(a.num_ + b.num_, a.den_);
  }
  if (a.is_polynomial()) return RatFunc(a.num_ * b.den_ + b.num_, b.den_, 0);
  if (b.is_polynomial()) return RatFunc(a.num_ + b.num_ * a.den_, a.den_, 0);
  // Only the cofactors of the common part of the denominators are needed.
  MPoly g = gcd(a.den_, b.den_);
  MPoly ca = *a.den_.divide_exact(g);
  MPoly cb = *b.den_.divide_exact(g);
  return rf_normalize(a.num_ * cb + b.num_ * ca, a.den_ * cb);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc(ring_size(a, b));
  if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_);
  // Cross-cancel first so the products stay small.
  MPoly g1 = gcd(a.num_, b.den_);
  MPoly g2 = gcd(b.num_, a.den_);
  MPoly an = g1.is_constant() ? a.num_ : *a.num_.divide_exact(g1);
  MPoly bd = g1.is_constant() ? b.den_ : *b.den_.divide_exact(g1);
  MPoly bn = g2.is_constant() ? b.num_ : *b.num_.divide_exact(g2);
  MPoly ad = g2.is_constant() ? a.den_ : *a.den_.divide_exact(g2);
  MPoly den = ad * bd;
  Rat c = den.content();
  MPoly num = an * bn;
  num *= 1 / c;
  den *= 1 / c;
  return RatFunc(std::move(num), std::move(den), 0);
}

RatFunc operator*(const RatFunc& a, const Rat& c) {
  if (c == 0) return RatFunc(a.nvars());
  return RatFunc(a.num_ * c, a.den_, 0);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by the zero rational function");
  return a * rf_normalize(b.den_, b.num_);
}

Rat rf_eval(const RatFunc& f, std::span<const Rat> point) {
  Rat d = f.den().eval(point);
  if (d == 0) throw Error(ErrorKind::PoleAtPoint, "denominator vanishes at evaluation point");
  return f.num().eval(point) / d;
}

RatFunc rf_derivative(const RatFunc& f, std::size_t var) {
  if (var >= f.nvars()) throw Error(ErrorKind::InvalidArgument, "derivative variable out of range");
  if (f.is_polynomial()) return RatFunc(f.num().derivative(var) * (1 / f.den().constant_value()));
  MPoly dn = f.num().derivative(var);
  MPoly dd = f.den().derivative(var);
  if (dd.is_zero()) return rf_normalize(dn, f.den());
  return rf_normalize(dn * f.den() - f.num() * dd, f.den() * f.den());
}

int rf_degree(const RatFunc& f) {
  if (f.is_zero()) return kNegInfinity;
  return static_cast<int>(f.num().total_degree()) - static_cast<int>(f.den().total_degree());
}

namespace {

void append_poly_key(std::string& out, const MPoly& p) {
  for (const auto& t : p.terms()) {
    out += std::to_string(t.mono.key());
    out += ':';
    out += to_string(t.coeff);
    out += ';';
  }
}

}  // namespace

std::string rf_canonical_key(const RatFunc& f) {
  std::string key = std::to_string(f.nvars());
  key += '|';
  append_poly_key(key, f.num());
  key += '|';
  append_poly_key(key, f.den());
  return key;
}

RatFunc rf_signed_permute(const RatFunc& f, std::span<const std::size_t> perm, std::span<const int> sign) {
  return rf_from_coprime(f.num().signed_permute(perm, sign), f.den().signed_permute(perm, sign));
}

MPoly sphere_polynomial(std::size_t d) {
  std::vector<std::pair<std::vector<unsigned>, Rat>> terms;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<unsigned> e(d + 1, 0);
    e[i] = 2;
    terms.emplace_back(std::move(e), Rat(1));
  }
  terms.emplace_back(std::vector<unsigned>(d + 1, 0), Rat(-1));
  return MPoly::from_terms(d + 1, terms);
}

MPoly reduce_mod_sphere(const MPoly& p, std::size_t d) { return p.reduce_by(sphere_polynomial(d), 0); }

bool equal_mod_sphere(const RatFunc& f, const RatFunc& g, std::size_t d) {
  MPoly diff = f.num() * g.den() - g.num() * f.den();
  return reduce_mod_sphere(diff, d).is_zero();
}

std::string to_string(const RatFunc& f) {
  auto names = default_var_names(f.nvars());
  if (f.is_polynomial()) return f.num().to_string(names);
  return "(" + f.num().to_string(names) + ")/(" + f.den().to_string(names) + ")";
}

namespace {

std::string latex_poly(const MPoly& p) {
  if (p.is_zero()) return "0";
  auto names = default_var_names(p.nvars());
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rat c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool has_vars = t.mono.degree() > 0;
    if (c.get_den() != 1)
      os << "\\frac{" << c.get_num().get_str() << "}{" << c.get_den().get_str() << "}";
    else if (c != 1 || !has_vars)
      os << c.get_num().get_str();
    for (std::size_t v = 0; v < p.nvars(); ++v) {
      unsigned e = t.mono.exponent(v);
      if (!e) continue;
      const std::string& n = names[v];
      os << (n.size() > 1 ? n.substr(0, 1) + "_{" + n.substr(1) + "}" : n);
      if (e > 1) os << "^{" << e << "}";
    }
  }
  return os.str();
}

}  // namespace

std::string to_latex(const RatFunc& f) {
  if (f.is_polynomial()) return latex_poly(f.num() * (1 / f.den().constant_value()));
  return "\\frac{" + latex_poly(f.num()) + "}{" + latex_poly(f.den()) + "}";
}

nlohmann::json to_json(const MPoly& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : p.terms()) arr.push_back({t.mono.exponents(p.nvars()), to_string(t.coeff)});
  return arr;
}

nlohmann::json to_json(const RatFunc& f) {
  return {{"vars", default_var_names(f.nvars())}, {"num", to_json(f.num())}, {"den", to_json(f.den())}};
}

MPoly mpoly_from_json(const nlohmann::json& j, std::size_t nvars) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, "polynomial must be a JSON array of terms");
  std::vector<std::pair<std::vector<unsigned>, Rat>> terms;
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2) throw Error(ErrorKind::Parse, "term must be [exponents, coefficient]");
    auto exps = term[0].get<std::vector<unsigned>>();
    if (exps.size() != nvars) throw Error(ErrorKind::Parse, "exponent vector has wrong length");
    Rat c = term[1].is_string() ? parse_rat(term[1].get<std::string>()) : Rat(term[1].get<long>());
    terms.emplace_back(std::move(exps), std::move(c));
  }
  return MPoly::from_terms(nvars, terms);
}

RatFunc ratfunc_from_json(const nlohmann::json& j) {
  try {
    std::size_t nv = j.at("vars").size();
    MPoly num = mpoly_from_json(j.at("num"), nv);
    MPoly den = j.contains("den") ? mpoly_from_json(j.at("den"), nv) : MPoly::constant(nv, 1);
    return rf_normalize(std::move(num), std::move(den));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

}  // namespace slabkit
