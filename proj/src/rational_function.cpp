#include "superwarp/rational_function.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace superwarp {

// ---------------------------------------------------------------------------
// Atom table
//
// Atoms are stored in fixed-size chunks so that references handed out by
// atom_info() stay valid and can be read without locking while other
// threads intern new atoms.

namespace {

constexpr std::size_t kChunkBits = 10;
constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
constexpr std::size_t kMaxChunks = 4096;

struct AtomTable {
  std::mutex mu;
  std::unordered_map<std::string, AtomId> index;
  std::array<std::atomic<AtomInfo*>, kMaxChunks> chunks{};
  std::size_t count = 0;

  ~AtomTable() {
    for (auto& c : chunks) delete[] c.load();
  }

  AtomId intern(const std::string& key, AtomInfo info) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    std::size_t slot = count++;
    std::size_t chunk = slot >> kChunkBits;
    if (chunk >= kMaxChunks) throw std::length_error("atom table exhausted");
    if (chunks[chunk].load() == nullptr)
      chunks[chunk].store(new AtomInfo[kChunkSize]);
    AtomId id = static_cast<AtomId>(slot << 3) |
                static_cast<AtomId>(info.kind);
    chunks[chunk].load()[slot & (kChunkSize - 1)] = std::move(info);
    index.emplace(key, id);
    return id;
  }
};

AtomTable& table() {
  static AtomTable t;
  return t;
}

AtomId elementary_atom(AtomKind kind, const RationalFunction& inner) {
  std::string key = std::to_string(static_cast<int>(kind)) + "|" +
                    inner.to_string();
  AtomInfo info;
  info.kind = kind;
  info.inner = std::make_shared<const RationalFunction>(inner);
  return table().intern(key, std::move(info));
}

}  // namespace

AtomId symbol_atom(std::string_view name) {
  std::string key = "0|" + std::string(name);
  AtomInfo info;
  info.kind = AtomKind::symbol;
  info.name = std::string(name);
  return table().intern(key, std::move(info));
}

AtomId function_atom(std::string_view name, std::string_view argument,
                     int order) {
  std::string key = "1|" + std::string(name) + "|" + std::string(argument) +
                    "|" + std::to_string(order);
  AtomInfo info;
  info.kind = AtomKind::function;
  info.name = std::string(name);
  info.argument = std::string(argument);
  info.order = order;
  return table().intern(key, std::move(info));
}

const AtomInfo& atom_info(AtomId id) {
  std::size_t slot = id >> 3;
  return table().chunks[slot >> kChunkBits].load()[slot & (kChunkSize - 1)];
}

int compare_atoms(AtomId a, AtomId b) {
  if (a == b) return 0;
  auto ka = static_cast<int>(kind_of(a));
  auto kb = static_cast<int>(kind_of(b));
  if (ka != kb) return ka < kb ? -1 : 1;
  const AtomInfo& ia = atom_info(a);
  const AtomInfo& ib = atom_info(b);
  switch (kind_of(a)) {
    case AtomKind::symbol:
      return ia.name.compare(ib.name) < 0 ? -1 : 1;
    case AtomKind::function: {
      if (int c = ia.name.compare(ib.name)) return c < 0 ? -1 : 1;
      if (int c = ia.argument.compare(ib.argument)) return c < 0 ? -1 : 1;
      return ia.order < ib.order ? -1 : 1;
    }
    default:
      return compare_structural(*ia.inner, *ib.inner);
  }
}

std::string atom_to_string(AtomId id) {
  const AtomInfo& info = atom_info(id);
  switch (info.kind) {
    case AtomKind::symbol:
      return info.name;
    case AtomKind::function:
      return info.name + std::string(static_cast<std::size_t>(info.order), '\'') +
             "(" + info.argument + ")";
    case AtomKind::sqrt:
      return "sqrt(" + info.inner->to_string() + ")";
    case AtomKind::exp:
      return "exp(" + info.inner->to_string() + ")";
    case AtomKind::sin:
      return "sin(" + info.inner->to_string() + ")";
    case AtomKind::cos:
      return "cos(" + info.inner->to_string() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Monomials

int Monomial::exponent_of(AtomId id) const {
  for (const auto& [a, e] : factors)
    if (a == id) return e;
  return 0;
}

int compare_lex(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fa = a.factors[i];
    const auto& fb = b.factors[i];
    if (fa.first != fb.first) return fa.first > fb.first ? 1 : -1;
    if (fa.second != fb.second) return fa.second > fb.second ? 1 : -1;
  }
  if (a.factors.size() == b.factors.size()) return 0;
  return a.factors.size() > b.factors.size() ? 1 : -1;
}

namespace {

void insert_factor(Monomial& m, AtomId id, int e) {
  auto it = std::lower_bound(
      m.factors.begin(), m.factors.end(), id,
      [](const std::pair<AtomId, int>& f, AtomId v) { return f.first > v; });
  m.factors.insert(it, {id, e});
}

// exp(a)^e -> exp(e a); returns 0 when the result is exp(0).
AtomId scaled_exp(const RationalFunction& inner, int e, bool& unit) {
  RationalFunction arg = inner * RationalFunction(e);
  unit = arg.is_zero();
  return unit ? 0 : elementary_atom(AtomKind::exp, arg);
}

}  // namespace

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  std::optional<RationalFunction> exp_arg;
  auto take_exp = [&](AtomId id, int e) {
    RationalFunction arg = *atom_info(id).inner * RationalFunction(e);
    exp_arg = exp_arg ? *exp_arg + arg : arg;
  };
  std::size_t i = 0, j = 0;
  bool has_exp = false;
  while (i < a.factors.size() || j < b.factors.size()) {
    std::pair<AtomId, int> f;
    if (j >= b.factors.size() ||
        (i < a.factors.size() && a.factors[i].first > b.factors[j].first)) {
      f = a.factors[i++];
    } else if (i >= a.factors.size() ||
               b.factors[j].first > a.factors[i].first) {
      f = b.factors[j++];
    } else {
      f = {a.factors[i].first, a.factors[i].second + b.factors[j].second};
      ++i;
      ++j;
    }
    if (kind_of(f.first) == AtomKind::exp) {
      has_exp = true;
      take_exp(f.first, f.second);
    } else {
      out.factors.push_back(f);
    }
  }
  if (has_exp && !exp_arg->is_zero())
    insert_factor(out, elementary_atom(AtomKind::exp, *exp_arg), 1);
  return out;
}

namespace {

Monomial monomial_pow(const Monomial& m, int n) {
  Monomial out;
  for (const auto& [a, e] : m.factors) {
    if (kind_of(a) == AtomKind::exp) {
      bool unit = false;
      AtomId id = scaled_exp(*atom_info(a).inner, e * n, unit);
      if (!unit) insert_factor(out, id, 1);
    } else {
      out.factors.push_back({a, e * n});
    }
  }
  return out;
}

// Divides a by b when every exponent of b is covered; exp atoms must match.
std::optional<Monomial> monomial_div(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t j = 0;
  for (const auto& f : a.factors) {
    while (j < b.factors.size() && b.factors[j].first > f.first)
      return std::nullopt;
    if (j < b.factors.size() && b.factors[j].first == f.first) {
      int e = f.second - b.factors[j].second;
      if (e < 0) return std::nullopt;
      if (e > 0) out.factors.push_back({f.first, e});
      ++j;
    } else {
      out.factors.push_back(f);
    }
  }
  if (j != b.factors.size()) return std::nullopt;
  return out;
}

int total_degree(const Monomial& m) {
  int d = 0;
  for (const auto& f : m.factors) d += f.second;
  return d;
}

// Graded, then atoms in descending structural order.
int compare_monomial_structural(const Monomial& a, const Monomial& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db ? -1 : 1;
  auto sorted = [](const Monomial& m) {
    auto f = m.factors;
    std::sort(f.begin(), f.end(), [](const auto& x, const auto& y) {
      return compare_atoms(x.first, y.first) > 0;
    });
    return f;
  };
  auto fa = sorted(a), fb = sorted(b);
  std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_atoms(fa[i].first, fb[i].first)) return c;
    if (fa[i].second != fb[i].second) return fa[i].second < fb[i].second ? -1 : 1;
  }
  if (fa.size() == fb.size()) return 0;
  return fa.size() < fb.size() ? -1 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomials

Poly::Poly(Rational c) {
  c.canonicalize();
  if (c != 0) terms_.push_back({Monomial{}, std::move(c)});
}

Poly Poly::from_term(Monomial m, Rational c) {
  c.canonicalize();
  Poly p;
  if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

Poly Poly::atom(AtomId id, int power) {
  if (power == 0) return Poly(Rational(1));
  Monomial m;
  if (kind_of(id) == AtomKind::exp) {
    bool unit = false;
    AtomId e = scaled_exp(*atom_info(id).inner, power, unit);
    if (!unit) m.factors.push_back({e, 1});
  } else {
    m.factors.push_back({id, power});
  }
  return from_term(std::move(m), Rational(1));
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.empty());
}

std::optional<Rational> Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].monomial.empty()) return terms_[0].coeff;
  return std::nullopt;
}

bool Poly::contains_kind(AtomKind kind) const {
  for (const auto& t : terms_)
    for (const auto& f : t.monomial.factors)
      if (kind_of(f.first) == kind) return true;
  return false;
}

int Poly::max_power_of_kind(AtomKind kind) const {
  int best = 0;
  for (const auto& t : terms_)
    for (const auto& f : t.monomial.factors)
      if (kind_of(f.first) == kind) best = std::max(best, f.second);
  return best;
}

void Poly::combine() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return compare_lex(a.monomial, b.monomial) > 0;
  });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().monomial == t.monomial) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  terms_ = std::move(out);
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

Poly Poly::scaled(const Rational& c) const {
  if (c == 0) return Poly();
  Poly p = *this;
  for (auto& t : p.terms_) t.coeff *= c;
  return p;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly p;
  p.terms_.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() && j < b.terms_.size()) {
    int c = compare_lex(a.terms_[i].monomial, b.terms_[j].monomial);
    if (c > 0) {
      p.terms_.push_back(a.terms_[i++]);
    } else if (c < 0) {
      p.terms_.push_back(b.terms_[j++]);
    } else {
      Rational s = a.terms_[i].coeff + b.terms_[j].coeff;
      if (s != 0) p.terms_.push_back({a.terms_[i].monomial, s});
      ++i;
      ++j;
    }
  }
  for (; i < a.terms_.size(); ++i) p.terms_.push_back(a.terms_[i]);
  for (; j < b.terms_.size(); ++j) p.terms_.push_back(b.terms_[j]);
  return p;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  Poly p;
  if (a.is_zero() || b.is_zero()) return p;
  p.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_)
      p.terms_.push_back({ta.monomial * tb.monomial, ta.coeff * tb.coeff});
  p.combine();
  return p;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coeff != b.terms_[i].coeff) return false;
    if (!(a.terms_[i].monomial == b.terms_[i].monomial)) return false;
  }
  return true;
}

void Poly::collect_atoms(std::set<AtomId>& out) const {
  for (const auto& t : terms_)
    for (const auto& f : t.monomial.factors) out.insert(f.first);
}

namespace {

std::string monomial_to_string(const Monomial& m) {
  auto f = m.factors;
  std::sort(f.begin(), f.end(), [](const auto& x, const auto& y) {
    return compare_atoms(x.first, y.first) > 0;
  });
  std::string s;
  for (const auto& [a, e] : f) {
    if (!s.empty()) s += "*";
    s += atom_to_string(a);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

}  // namespace

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const Term*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const Term* x, const Term* y) {
    return compare_monomial_structural(x->monomial, y->monomial) > 0;
  });
  std::string s;
  bool first = true;
  for (const Term* t : order) {
    Rational c = t->coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    std::string mono = monomial_to_string(t->monomial);
    if (mono.empty()) {
      s += c.get_str();
    } else if (c == 1) {
      s += mono;
    } else {
      s += c.get_str() + "*" + mono;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Division and gcd (exp-free input)

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return Poly();
  const auto& lead = b.terms().front();
  Poly q;
  Poly r = a;
  // Each step cancels the leading term of r; lex is a monomial order, so
  // this terminates and succeeds exactly when b divides a.
  std::size_t guard = 0;
  while (!r.is_zero()) {
    const auto& lt = r.terms().front();
    auto m = monomial_div(lt.monomial, lead.monomial);
    if (!m) return std::nullopt;
    Poly t = Poly::from_term(*m, lt.coeff / lead.coeff);
    q = q + t;
    r = r - t * b;
    if (++guard > 100000) return std::nullopt;
  }
  return q;
}

namespace {

using Univariate = std::vector<Poly>;  // coefficient of x^k at index k

void trim(Univariate& u) {
  while (!u.empty() && u.back().is_zero()) u.pop_back();
}

Univariate decompose(const Poly& p, AtomId x) {
  Univariate u;
  for (const auto& t : p.terms()) {
    int e = t.monomial.exponent_of(x);
    Monomial rest;
    for (const auto& f : t.monomial.factors)
      if (f.first != x) rest.factors.push_back(f);
    if (static_cast<std::size_t>(e) >= u.size()) u.resize(e + 1);
    u[e] = u[e] + Poly::from_term(std::move(rest), t.coeff);
  }
  trim(u);
  return u;
}

Poly recompose(const Univariate& u, AtomId x) {
  Poly p;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k].is_zero()) continue;
    p = p + (k == 0 ? u[k] : u[k] * Poly::atom(x, static_cast<int>(k)));
  }
  return p;
}

Poly make_monic(const Poly& p) {
  if (p.is_zero()) return p;
  return p.scaled(Rational(1) / p.terms().front().coeff);
}

Poly gcd_rec(const Poly& a, const Poly& b);

Poly content(const Univariate& u) {
  Poly g;
  for (const auto& c : u) {
    g = gcd_rec(g, c);
    if (g.is_constant() && !g.is_zero()) break;
  }
  return g;
}

Univariate divide_all(const Univariate& u, const Poly& c) {
  Univariate out;
  for (const auto& p : u) {
    auto q = divide_exact(p, c);
    if (!q) throw std::logic_error("content does not divide coefficient");
    out.push_back(*q);
  }
  return out;
}

// Scales to integer coefficients with unit content, keeping PRS
// coefficient growth in check.
void clear_numeric_content(Univariate& u) {
  mpz_class l = 1, g = 0;
  for (const auto& p : u)
    for (const auto& t : p.terms()) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    }
  if (g == 0) return;
  Rational s(l, g);
  s.canonicalize();
  if (s == 1) return;
  for (auto& p : u) p = p.scaled(s);
}

Univariate primitive(const Univariate& u) {
  if (u.size() <= 1) return Univariate{Poly(Rational(1))};
  Univariate out = divide_all(u, content(u));
  clear_numeric_content(out);
  return out;
}

Univariate pseudo_remainder(Univariate a, const Univariate& b) {
  const Poly& lb = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    Poly la = a.back();
    std::size_t shift = a.size() - b.size();
    for (auto& c : a) c = c * lb;
    for (std::size_t k = 0; k < b.size(); ++k)
      a[k + shift] = a[k + shift] - la * b[k];
    trim(a);
    clear_numeric_content(a);
  }
  return a;
}

std::map<AtomId, int> degrees(const Poly& p) {
  std::map<AtomId, int> d;
  for (const auto& t : p.terms())
    for (const auto& [a, e] : t.monomial.factors) d[a] = std::max(d[a], e);
  return d;
}

Poly gcd_rec(const Poly& a, const Poly& b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(Rational(1));
  if (a == b) return make_monic(a);

  auto da = degrees(a), db = degrees(b);
  // A variable present in only one argument can only live in its content.
  for (const auto& [v, e] : da)
    if (!db.count(v)) return gcd_rec(content(decompose(a, v)), b);
  for (const auto& [v, e] : db)
    if (!da.count(v)) return gcd_rec(a, content(decompose(b, v)));

  // Both share every variable; eliminate the one of lowest degree.
  AtomId x = 0;
  int best = -1;
  for (const auto& [v, e] : da) {
    int d = std::max(e, db[v]);
    if (best < 0 || d < best) {
      best = d;
      x = v;
    }
  }

  Univariate ua = decompose(a, x);
  Univariate ub = decompose(b, x);
  Poly ca = content(ua);
  Poly cb = content(ub);
  Poly c = gcd_rec(ca, cb);
  Univariate pa = divide_all(ua, ca);
  Univariate pb = divide_all(ub, cb);
  clear_numeric_content(pa);
  clear_numeric_content(pb);
  if (pa.size() < pb.size()) std::swap(pa, pb);
  if (pb.size() == 2) {
    // Linear in x: the gcd is pb itself or trivial.
    Poly cand = recompose(pb, x);
    if (divide_exact(recompose(pa, x), cand))
      return make_monic(c * cand);
    return make_monic(c);
  }
  while (pb.size() > 1) {
    Univariate r = pseudo_remainder(pa, pb);
    pa = std::move(pb);
    if (r.empty()) {
      pb.clear();
      break;
    }
    pb = primitive(r);
  }
  // pb is a nonzero constant (coprime) or empty (pa is the gcd).
  Univariate g = pb.empty() ? primitive(pa) : Univariate{Poly(Rational(1))};
  return make_monic(c * recompose(g, x));
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) { return gcd_rec(a, b); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_atom(AtomId id, const EvalEnv& env) {
  const AtomInfo& info = atom_info(id);
  switch (info.kind) {
    case AtomKind::symbol:
    case AtomKind::function:
      return env.leaf(id, info);
    case AtomKind::sqrt:
      return std::sqrt(info.inner->evaluate(env));
    case AtomKind::exp:
      return std::exp(info.inner->evaluate(env));
    case AtomKind::sin:
      return std::sin(info.inner->evaluate(env));
    case AtomKind::cos:
      return std::cos(info.inner->evaluate(env));
  }
  return std::nan("");
}

}  // namespace

double evaluate(const Poly& p, const EvalEnv& env) {
  std::map<AtomId, double> cache;
  double sum = 0.0;
  for (const auto& t : p.terms()) {
    double v = t.coeff.get_d();
    for (const auto& [a, e] : t.monomial.factors) {
      auto it = cache.find(a);
      if (it == cache.end()) it = cache.emplace(a, eval_atom(a, env)).first;
      v *= std::pow(it->second, e);
    }
    sum += v;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Rational functions

RationalFunction::RationalFunction(Poly num, Poly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("zero denominator");
  normalize();
}

RationalFunction RationalFunction::symbol(std::string_view name) {
  RationalFunction r;
  r.num_ = Poly::atom(symbol_atom(name));
  return r;
}

RationalFunction RationalFunction::function(std::string_view name,
                                            std::string_view argument,
                                            int order) {
  RationalFunction r;
  r.num_ = Poly::atom(function_atom(name, argument, order));
  return r;
}

RationalFunction RationalFunction::exp(const RationalFunction& arg) {
  if (arg.is_zero()) return RationalFunction(1);
  RationalFunction r;
  r.num_ = Poly::atom(elementary_atom(AtomKind::exp, arg));
  return r;
}

RationalFunction RationalFunction::sin(const RationalFunction& arg) {
  if (arg.is_zero()) return RationalFunction(0);
  RationalFunction r;
  r.num_ = Poly::atom(elementary_atom(AtomKind::sin, arg));
  return r;
}

RationalFunction RationalFunction::cos(const RationalFunction& arg) {
  if (arg.is_zero()) return RationalFunction(1);
  RationalFunction r;
  r.num_ = Poly::atom(elementary_atom(AtomKind::cos, arg));
  return r;
}

RationalFunction RationalFunction::sqrt(const RationalFunction& arg) {
  if (auto c = arg.constant_value()) {
    if (*c == 0) return RationalFunction(0);
    if (*c > 0) {
      mpz_class n = c->get_num(), d = c->get_den();
      if (mpz_perfect_square_p(n.get_mpz_t()) &&
          mpz_perfect_square_p(d.get_mpz_t())) {
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        return RationalFunction(Rational(rn, rd));
      }
    }
  }
  RationalFunction r;
  r.num_ = Poly::atom(elementary_atom(AtomKind::sqrt, arg));
  return r;
}

bool RationalFunction::is_one() const {
  auto c = constant_value();
  return c && *c == 1;
}

std::optional<Rational> RationalFunction::constant_value() const {
  auto n = num_.constant_value();
  auto d = den_.constant_value();
  if (!n || !d) return std::nullopt;
  return *n / *d;
}

bool RationalFunction::contains_opaque() const {
  for (const Poly* p : {&num_, &den_})
    for (const auto& t : p->terms())
      for (const auto& f : t.monomial.factors)
        if (kind_of(f.first) >= AtomKind::sqrt) return true;
  return false;
}

namespace {

// sqrt(a)^e with e >= 2 becomes a^(e/2) sqrt(a)^(e%2).
std::optional<RationalFunction> reduce_sqrt(const Poly& p) {
  if (p.max_power_of_kind(AtomKind::sqrt) < 2) return std::nullopt;
  RationalFunction acc;
  for (const auto& t : p.terms()) {
    Monomial rest;
    RationalFunction factor(t.coeff);
    for (const auto& [a, e] : t.monomial.factors) {
      if (kind_of(a) == AtomKind::sqrt && e >= 2) {
        factor *= atom_info(a).inner->pow(e / 2);
        if (e % 2) rest.factors.push_back({a, 1});
      } else {
        rest.factors.push_back({a, e});
      }
    }
    acc += factor * RationalFunction(Poly::from_term(rest, Rational(1)),
                                     Poly(Rational(1)));
  }
  return acc;
}

bool has_exp(const Poly& p) { return p.contains_kind(AtomKind::exp); }

}  // namespace

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(Rational(1));
    return;
  }
  auto rn = reduce_sqrt(num_);
  auto rd = reduce_sqrt(den_);
  if (rn || rd) {
    RationalFunction n = rn ? *rn : RationalFunction(num_, Poly(Rational(1)));
    RationalFunction d = rd ? *rd : RationalFunction(den_, Poly(Rational(1)));
    *this = n / d;
    return;
  }

  // A lone exp factor in a monomial denominator moves up as exp(-a).
  if (den_.size() == 1) {
    const auto& m = den_.terms()[0].monomial;
    for (const auto& [a, e] : m.factors) {
      if (kind_of(a) != AtomKind::exp) continue;
      Monomial inv;
      bool unit = false;
      AtomId ne = scaled_exp(*atom_info(a).inner, -e, unit);
      if (!unit) inv.factors.push_back({ne, 1});
      Monomial rest;
      for (const auto& f : m.factors)
        if (f.first != a) rest.factors.push_back(f);
      num_ = num_ * Poly::from_term(inv, Rational(1));
      den_ = Poly::from_term(rest, den_.terms()[0].coeff);
      break;
    }
  }

  if (auto c = den_.constant_value()) {
    num_ = num_.scaled(Rational(1) / *c);
    den_ = Poly(Rational(1));
    return;
  }

  // Common monomial content (exp atoms excluded).
  {
    std::map<AtomId, int> common;
    bool first = true;
    for (const Poly* p : {&num_, &den_}) {
      for (const auto& t : p->terms()) {
        std::map<AtomId, int> here;
        for (const auto& [a, e] : t.monomial.factors)
          if (kind_of(a) != AtomKind::exp) here[a] = e;
        if (first) {
          common = here;
          first = false;
        } else {
          for (auto it = common.begin(); it != common.end();) {
            auto h = here.find(it->first);
            if (h == here.end()) {
              it = common.erase(it);
            } else {
              it->second = std::min(it->second, h->second);
              ++it;
            }
          }
        }
        if (common.empty()) break;
      }
    }
    if (!common.empty()) {
      Monomial g;
      for (auto it = common.rbegin(); it != common.rend(); ++it)
        g.factors.push_back(*it);
      auto strip = [&](const Poly& p) {
        Poly out;
        for (const auto& t : p.terms())
          out = out + Poly::from_term(*monomial_div(t.monomial, g), t.coeff);
        return out;
      };
      num_ = strip(num_);
      den_ = strip(den_);
    }
  }

  if (den_.size() > 1 && !has_exp(num_) && !has_exp(den_)) {
    if (auto q = divide_exact(num_, den_)) {
      num_ = *q;
      den_ = Poly(Rational(1));
    } else {
      Poly g = poly_gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = *divide_exact(num_, g);
        den_ = *divide_exact(den_, g);
      }
    }
  }

  if (auto c = den_.constant_value()) {
    num_ = num_.scaled(Rational(1) / *c);
    den_ = Poly(Rational(1));
    return;
  }

  // Structurally leading denominator coefficient becomes 1.
  const Poly::Term* lead = &den_.terms()[0];
  for (const auto& t : den_.terms())
    if (compare_monomial_structural(t.monomial, lead->monomial) > 0) lead = &t;
  Rational s = Rational(1) / lead->coeff;
  if (s != 1) {
    num_ = num_.scaled(s);
    den_ = den_.scaled(s);
  }
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    if (den_.is_constant()) {
      num_ = num_ + o.num_;
      if (num_.is_zero()) den_ = Poly(Rational(1));
      return *this;
    }
    *this = RationalFunction(num_ + o.num_, den_);
    return *this;
  }
  if (den_.size() == 1 && o.den_.size() == 1 && !has_exp(den_) &&
      !has_exp(o.den_)) {
    // lcm of monomial denominators
    const auto& ma = den_.terms()[0].monomial;
    const auto& mb = o.den_.terms()[0].monomial;
    std::map<AtomId, int> l;
    for (const auto& [a, e] : ma.factors) l[a] = e;
    for (const auto& [a, e] : mb.factors) l[a] = std::max(l[a], e);
    Monomial lm;
    for (auto it = l.rbegin(); it != l.rend(); ++it) lm.factors.push_back(*it);
    Poly fa = Poly::from_term(*monomial_div(lm, ma),
                              Rational(1) / den_.terms()[0].coeff);
    Poly fb = Poly::from_term(*monomial_div(lm, mb),
                              Rational(1) / o.den_.terms()[0].coeff);
    *this = RationalFunction(num_ * fa + o.num_ * fb,
                             Poly::from_term(lm, Rational(1)));
    return *this;
  }
  *this = RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
  return *this += -o;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = RationalFunction();
  if (den_.is_constant() && o.den_.is_constant()) {
    Poly n = num_ * o.num_;
    if (n.max_power_of_kind(AtomKind::sqrt) < 2) {
      num_ = std::move(n);
      return *this;
    }
    *this = RationalFunction(std::move(n), Poly(Rational(1)));
    return *this;
  }
  *this = RationalFunction(num_ * o.num_, den_ * o.den_);
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (is_zero()) return *this;
  *this = RationalFunction(num_ * o.den_, den_ * o.num_);
  return *this;
}

RationalFunction RationalFunction::pow(int n) const {
  if (n == 0) return RationalFunction(1);
  if (n < 0) return RationalFunction(1) / pow(-n);
  if (num_.size() == 1 && den_.size() == 1) {
    const auto& tn = num_.terms()[0];
    const auto& td = den_.terms()[0];
    Rational cn, cd;
    mpz_pow_ui(cn.get_num_mpz_t(), tn.coeff.get_num_mpz_t(), n);
    mpz_pow_ui(cn.get_den_mpz_t(), tn.coeff.get_den_mpz_t(), n);
    mpz_pow_ui(cd.get_num_mpz_t(), td.coeff.get_num_mpz_t(), n);
    mpz_pow_ui(cd.get_den_mpz_t(), td.coeff.get_den_mpz_t(), n);
    cn.canonicalize();
    cd.canonicalize();
    return RationalFunction(Poly::from_term(monomial_pow(tn.monomial, n), cn),
                            Poly::from_term(monomial_pow(td.monomial, n), cd));
  }
  RationalFunction result(1), base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

namespace {

RationalFunction atom_derivative(AtomId id, std::string_view coord) {
  const AtomInfo& info = atom_info(id);
  switch (info.kind) {
    case AtomKind::symbol:
      return RationalFunction(info.name == coord ? 1 : 0);
    case AtomKind::function:
      if (info.argument != coord) return RationalFunction(0);
      return RationalFunction::function(info.name, info.argument,
                                        info.order + 1);
    case AtomKind::sqrt: {
      RationalFunction du = info.inner->derivative(coord);
      if (du.is_zero()) return du;
      return du / (RationalFunction(2) *
                   RationalFunction(Poly::atom(id), Poly(Rational(1))));
    }
    case AtomKind::exp: {
      RationalFunction du = info.inner->derivative(coord);
      if (du.is_zero()) return du;
      return du * RationalFunction(Poly::atom(id), Poly(Rational(1)));
    }
    case AtomKind::sin: {
      RationalFunction du = info.inner->derivative(coord);
      if (du.is_zero()) return du;
      return du * RationalFunction::cos(*info.inner);
    }
    case AtomKind::cos: {
      RationalFunction du = info.inner->derivative(coord);
      if (du.is_zero()) return du;
      return -(du * RationalFunction::sin(*info.inner));
    }
  }
  return RationalFunction(0);
}

RationalFunction poly_derivative(const Poly& p, std::string_view coord,
                                 std::map<AtomId, RationalFunction>& cache) {
  RationalFunction acc;
  for (const auto& t : p.terms()) {
    const auto& fs = t.monomial.factors;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      auto it = cache.find(fs[i].first);
      if (it == cache.end())
        it = cache.emplace(fs[i].first, atom_derivative(fs[i].first, coord))
                 .first;
      if (it->second.is_zero()) continue;
      Monomial rest;
      for (std::size_t j = 0; j < fs.size(); ++j) {
        int e = fs[j].second - (j == i ? 1 : 0);
        if (e > 0) rest.factors.push_back({fs[j].first, e});
      }
      RationalFunction term(
          Poly::from_term(std::move(rest), t.coeff * fs[i].second),
          Poly(Rational(1)));
      acc += term * it->second;
    }
  }
  return acc;
}

}  // namespace

RationalFunction RationalFunction::derivative(std::string_view coord) const {
  std::map<AtomId, RationalFunction> cache;
  RationalFunction dn = poly_derivative(num_, coord, cache);
  if (den_.is_constant()) return dn;
  RationalFunction dd = poly_derivative(den_, coord, cache);
  if (dd.is_zero())
    return dn / RationalFunction(den_, Poly(Rational(1)));
  RationalFunction n(num_, Poly(Rational(1)));
  RationalFunction d(den_, Poly(Rational(1)));
  return (dn * d - n * dd) / (d * d);
}

RationalFunction RationalFunction::substitute(
    const std::function<std::optional<RationalFunction>(AtomId)>& f) const {
  std::map<AtomId, RationalFunction> cache;
  auto image = [&](AtomId a) -> const RationalFunction& {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    RationalFunction v;
    if (auto r = f(a)) {
      v = *r;
    } else {
      const AtomInfo& info = atom_info(a);
      switch (info.kind) {
        case AtomKind::symbol:
        case AtomKind::function:
          v = RationalFunction(Poly::atom(a), Poly(Rational(1)));
          break;
        case AtomKind::sqrt:
          v = RationalFunction::sqrt(info.inner->substitute(f));
          break;
        case AtomKind::exp:
          v = RationalFunction::exp(info.inner->substitute(f));
          break;
        case AtomKind::sin:
          v = RationalFunction::sin(info.inner->substitute(f));
          break;
        case AtomKind::cos:
          v = RationalFunction::cos(info.inner->substitute(f));
          break;
      }
    }
    return cache.emplace(a, std::move(v)).first->second;
  };
  auto sub_poly = [&](const Poly& p) {
    RationalFunction acc;
    for (const auto& t : p.terms()) {
      RationalFunction term(t.coeff);
      for (const auto& [a, e] : t.monomial.factors) term *= image(a).pow(e);
      acc += term;
    }
    return acc;
  };
  RationalFunction n = sub_poly(num_);
  if (den_.is_constant())
    return n / RationalFunction(*den_.constant_value());
  return n / sub_poly(den_);
}

RationalFunction RationalFunction::substitute_symbol(
    std::string_view name, const RationalFunction& value) const {
  AtomId target = symbol_atom(name);
  return substitute([&](AtomId a) -> std::optional<RationalFunction> {
    if (a == target) return value;
    return std::nullopt;
  });
}

RationalFunction RationalFunction::substitute_function(
    std::string_view name, const RationalFunction& value) const {
  std::map<std::pair<std::string, int>, RationalFunction> derivs;
  return substitute([&](AtomId a) -> std::optional<RationalFunction> {
    if (kind_of(a) != AtomKind::function) return std::nullopt;
    const AtomInfo& info = atom_info(a);
    if (info.name != name) return std::nullopt;
    auto key = std::make_pair(info.argument, info.order);
    auto it = derivs.find(key);
    if (it == derivs.end()) {
      RationalFunction v = value;
      for (int k = 0; k < info.order; ++k) v = v.derivative(info.argument);
      it = derivs.emplace(key, std::move(v)).first;
    }
    return it->second;
  });
}

std::set<AtomId> RationalFunction::leaf_atoms() const {
  std::set<AtomId> all, out;
  num_.collect_atoms(all);
  den_.collect_atoms(all);
  for (AtomId a : all) {
    if (kind_of(a) <= AtomKind::function) {
      out.insert(a);
    } else {
      auto inner = atom_info(a).inner->leaf_atoms();
      out.insert(inner.begin(), inner.end());
    }
  }
  return out;
}

bool RationalFunction::depends_on(std::string_view coordinate) const {
  for (AtomId a : leaf_atoms()) {
    const AtomInfo& info = atom_info(a);
    if (info.kind == AtomKind::symbol && info.name == coordinate) return true;
    if (info.kind == AtomKind::function && info.argument == coordinate)
      return true;
  }
  return false;
}

double RationalFunction::evaluate(const EvalEnv& env) const {
  double n = superwarp::evaluate(num_, env);
  if (den_.is_constant()) return n / den_.constant_value()->get_d();
  return n / superwarp::evaluate(den_, env);
}

std::string RationalFunction::to_string() const {
  std::string n = num_.to_string();
  if (den_.is_constant()) return n;
  bool simple_num = num_.size() == 1 && num_.terms()[0].coeff > 0;
  if (!simple_num) n = "(" + n + ")";
  return n + "/(" + den_.to_string() + ")";
}

int compare_structural(const RationalFunction& a, const RationalFunction& b) {
  auto cmp_poly = [](const Poly& x, const Poly& y) {
    std::vector<const Poly::Term*> tx, ty;
    for (const auto& t : x.terms()) tx.push_back(&t);
    for (const auto& t : y.terms()) ty.push_back(&t);
    auto by = [](const Poly::Term* p, const Poly::Term* q) {
      return compare_monomial_structural(p->monomial, q->monomial) > 0;
    };
    std::sort(tx.begin(), tx.end(), by);
    std::sort(ty.begin(), ty.end(), by);
    std::size_t n = std::min(tx.size(), ty.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (int c = compare_monomial_structural(tx[i]->monomial, ty[i]->monomial))
        return c;
      if (tx[i]->coeff != ty[i]->coeff) return tx[i]->coeff < ty[i]->coeff ? -1 : 1;
    }
    if (tx.size() == ty.size()) return 0;
    return tx.size() < ty.size() ? -1 : 1;
  };
  if (int c = cmp_poly(a.denominator(), b.denominator())) return c;
  return cmp_poly(a.numerator(), b.numerator());
}

}  // namespace superwarp
