#include "superwarp/scalar_expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace superwarp {

struct ScalarExpr::Node {
  Op op = Op::constant;
  Rational value;
  std::string name;
  std::string argument;
  int order = 0;
  int exponent = 0;
  std::vector<ScalarExpr> kids;
};

ScalarExpr::ScalarExpr() : ScalarExpr(Rational(0)) {}
ScalarExpr::ScalarExpr(int c) : ScalarExpr(Rational(c)) {}
ScalarExpr::ScalarExpr(const Rational& c) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = c;
  n->value.canonicalize();
  node_ = std::move(n);
}

ScalarExpr ScalarExpr::symbol(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::symbol;
  n->name = std::move(name);
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::function(std::string name, std::string argument,
                                int order) {
  auto n = std::make_shared<Node>();
  n->op = Op::function;
  n->name = std::move(name);
  n->argument = std::move(argument);
  n->order = order;
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::apply(Op elementary, ScalarExpr arg) {
  auto n = std::make_shared<Node>();
  n->op = elementary;
  n->kids = {std::move(arg)};
  return ScalarExpr(std::move(n));
}

ScalarExpr::Op ScalarExpr::op() const { return node_->op; }
const Rational& ScalarExpr::value() const { return node_->value; }
const std::string& ScalarExpr::name() const { return node_->name; }
const std::string& ScalarExpr::argument() const { return node_->argument; }
int ScalarExpr::order() const { return node_->order; }
int ScalarExpr::exponent() const { return node_->exponent; }
const std::vector<ScalarExpr>& ScalarExpr::children() const {
  return node_->kids;
}

namespace {

bool is_const(const ScalarExpr& e, int v) {
  return e.op() == ScalarExpr::Op::constant && e.value() == v;
}

}  // namespace

// The arithmetic constructors fold only the trivial identities with 0
// and 1; anything else is left to canonicalize.
ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  auto n = std::make_shared<ScalarExpr::Node>();
  n->op = ScalarExpr::Op::add;
  n->kids = {a, b};
  return ScalarExpr(std::move(n));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  if (is_const(b, 0)) return a;
  auto n = std::make_shared<ScalarExpr::Node>();
  n->op = ScalarExpr::Op::sub;
  n->kids = {a, b};
  return ScalarExpr(std::move(n));
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  if (is_const(a, 0) || is_const(b, 0)) return ScalarExpr(0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  auto n = std::make_shared<ScalarExpr::Node>();
  n->op = ScalarExpr::Op::mul;
  n->kids = {a, b};
  return ScalarExpr(std::move(n));
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  if (is_const(a, 0)) return ScalarExpr(0);
  if (is_const(b, 1)) return a;
  auto n = std::make_shared<ScalarExpr::Node>();
  n->op = ScalarExpr::Op::div;
  n->kids = {a, b};
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::operator-() const {
  if (op() == Op::constant) return ScalarExpr(Rational(-value()));
  return ScalarExpr(0) - *this;
}

ScalarExpr ScalarExpr::pow(int n) const {
  if (n == 1) return *this;
  if (n == 0) return ScalarExpr(1);
  auto node = std::make_shared<Node>();
  node->op = Op::pow;
  node->exponent = n;
  node->kids = {*this};
  return ScalarExpr(std::move(node));
}

bool ScalarExpr::structurally_equal(const ScalarExpr& o) const {
  if (node_ == o.node_) return true;
  const Node& a = *node_;
  const Node& b = *o.node_;
  if (a.op != b.op || a.value != b.value || a.name != b.name ||
      a.argument != b.argument || a.order != b.order ||
      a.exponent != b.exponent || a.kids.size() != b.kids.size())
    return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!a.kids[i].structurally_equal(b.kids[i])) return false;
  return true;
}

RationalFunction ScalarExpr::to_rational() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant:
      return RationalFunction(n.value);
    case Op::symbol:
      return RationalFunction::symbol(n.name);
    case Op::function:
      return RationalFunction::function(n.name, n.argument, n.order);
    case Op::add:
      return n.kids[0].to_rational() + n.kids[1].to_rational();
    case Op::sub:
      return n.kids[0].to_rational() - n.kids[1].to_rational();
    case Op::mul:
      return n.kids[0].to_rational() * n.kids[1].to_rational();
    case Op::div:
      return n.kids[0].to_rational() / n.kids[1].to_rational();
    case Op::pow:
      return n.kids[0].to_rational().pow(n.exponent);
    case Op::exp:
      return RationalFunction::exp(n.kids[0].to_rational());
    case Op::sin:
      return RationalFunction::sin(n.kids[0].to_rational());
    case Op::cos:
      return RationalFunction::cos(n.kids[0].to_rational());
    case Op::sqrt:
      return RationalFunction::sqrt(n.kids[0].to_rational());
  }
  return RationalFunction();
}

namespace {

ScalarExpr atom_tree(AtomId id) {
  const AtomInfo& info = atom_info(id);
  switch (info.kind) {
    case AtomKind::symbol:
      return ScalarExpr::symbol(info.name);
    case AtomKind::function:
      return ScalarExpr::function(info.name, info.argument, info.order);
    case AtomKind::sqrt:
      return ScalarExpr::apply(ScalarExpr::Op::sqrt,
                               ScalarExpr::from_rational(*info.inner));
    case AtomKind::exp:
      return ScalarExpr::apply(ScalarExpr::Op::exp,
                               ScalarExpr::from_rational(*info.inner));
    case AtomKind::sin:
      return ScalarExpr::apply(ScalarExpr::Op::sin,
                               ScalarExpr::from_rational(*info.inner));
    case AtomKind::cos:
      return ScalarExpr::apply(ScalarExpr::Op::cos,
                               ScalarExpr::from_rational(*info.inner));
  }
  return ScalarExpr();
}

ScalarExpr poly_tree(const Poly& p) {
  // Same term order as the printed normal form.
  std::vector<const Poly::Term*> order;
  for (const auto& t : p.terms()) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](const Poly::Term* x, const Poly::Term* y) {
                     return compare_structural(
                                RationalFunction(Poly::from_term(x->monomial, 1),
                                                 Poly(Rational(1))),
                                RationalFunction(Poly::from_term(y->monomial, 1),
                                                 Poly(Rational(1)))) > 0;
                   });
  ScalarExpr acc;
  for (const Poly::Term* t : order) {
    auto factors = t->monomial.factors;
    std::sort(factors.begin(), factors.end(), [](const auto& x, const auto& y) {
      return compare_atoms(x.first, y.first) > 0;
    });
    ScalarExpr term(Rational(abs(t->coeff)));
    for (const auto& [a, e] : factors) term = term * atom_tree(a).pow(e);
    acc = t->coeff < 0 ? acc - term : acc + term;
  }
  return acc;
}

}  // namespace

ScalarExpr ScalarExpr::from_rational(const RationalFunction& r) {
  ScalarExpr n = poly_tree(r.numerator());
  if (r.denominator().is_constant()) return n;
  return n / poly_tree(r.denominator());
}

namespace {

int precedence(const ScalarExpr& e) {
  using Op = ScalarExpr::Op;
  switch (e.op()) {
    case Op::add:
    case Op::sub:
      return 1;
    case Op::mul:
    case Op::div:
      return 2;
    case Op::pow:
      return 4;
    case Op::constant:
      return e.value() < 0 || e.value().get_den() != 1 ? 2 : 5;
    default:
      return 5;
  }
}

std::string wrap(const ScalarExpr& e, int min_prec) {
  std::string s = e.to_string();
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string ScalarExpr::to_string() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant:
      return n.value.get_str();
    case Op::symbol:
      return n.name;
    case Op::function:
      return n.name + std::string(static_cast<std::size_t>(n.order), '\'') +
             "(" + n.argument + ")";
    case Op::add:
      return n.kids[0].to_string() + " + " + wrap(n.kids[1], 1);
    case Op::sub:
      if (is_const(n.kids[0], 0)) return "-" + wrap(n.kids[1], 2);
      return n.kids[0].to_string() + " - " + wrap(n.kids[1], 2);
    case Op::mul:
      return wrap(n.kids[0], 2) + "*" + wrap(n.kids[1], 3);
    case Op::div:
      return wrap(n.kids[0], 2) + "/" + wrap(n.kids[1], 3);
    case Op::pow:
      return wrap(n.kids[0], 5) + "^" +
             (n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")"
                             : std::to_string(n.exponent));
    case Op::exp:
      return "exp(" + n.kids[0].to_string() + ")";
    case Op::sin:
      return "sin(" + n.kids[0].to_string() + ")";
    case Op::cos:
      return "cos(" + n.kids[0].to_string() + ")";
    case Op::sqrt:
      return "sqrt(" + n.kids[0].to_string() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ScalarExpr parse() {
    ScalarExpr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("expression \"" + std::string(s_) + "\" at offset " +
                     std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ScalarExpr expr() {
    ScalarExpr e = term();
    for (;;) {
      if (eat('+')) {
        e = e + term();
      } else if (eat('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  ScalarExpr term() {
    ScalarExpr e = unary();
    for (;;) {
      if (eat('*')) {
        e = e * unary();
      } else if (eat('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  ScalarExpr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  ScalarExpr power() {
    ScalarExpr base = primary();
    if (!eat('^')) return base;
    ScalarExpr ex = unary();
    RationalFunction v = ex.to_rational();
    auto c = v.constant_value();
    if (!c || c->get_den() != 1 || !mpz_fits_sint_p(c->get_num_mpz_t()))
      fail("exponent must be an integer constant");
    return base.pow(static_cast<int>(c->get_num().get_si()));
  }

  ScalarExpr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t f0 = pos_;
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      frac = std::string(s_.substr(f0, pos_ - f0));
    }
    if (digits.empty() && frac.empty()) fail("malformed number");
    mpz_class num(digits.empty() ? "0" : digits);
    mpz_class den(1);
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    Rational q(num, den);
    q.canonicalize();
    return ScalarExpr(q);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  ScalarExpr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ScalarExpr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_'))
      fail("unexpected '" + std::string(1, c) + "'");
    std::string id = identifier();
    int primes = 0;
    while (pos_ < s_.size() && s_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      using Op = ScalarExpr::Op;
      static const std::pair<const char*, Op> elementary[] = {
          {"exp", Op::exp}, {"sin", Op::sin}, {"cos", Op::cos}, {"sqrt", Op::sqrt}};
      for (const auto& [fname, op] : elementary) {
        if (id == fname) {
          if (primes) fail("derivative marks on " + id);
          ++pos_;
          ScalarExpr arg = expr();
          if (!eat(')')) fail("expected ')'");
          return ScalarExpr::apply(op, arg);
        }
      }
      ++pos_;
      skip();
      std::string arg = identifier();
      if (arg.empty()) fail("function " + id + " needs a coordinate argument");
      if (!eat(')')) fail("expected ')' after " + id + "(" + arg);
      return ScalarExpr::function(id, arg, primes);
    }
    if (primes) fail("derivative marks on symbol " + id);
    return ScalarExpr::symbol(id);
  }
};

}  // namespace

ScalarExpr parse_expr(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Differentiation and canonical form

ScalarExpr differentiate(const ScalarExpr& e, std::string_view coord) {
  using Op = ScalarExpr::Op;
  const auto& k = e.children();
  switch (e.op()) {
    case Op::constant:
      return ScalarExpr(0);
    case Op::symbol:
      return ScalarExpr(e.name() == coord ? 1 : 0);
    case Op::function:
      if (e.argument() != coord) return ScalarExpr(0);
      return ScalarExpr::function(e.name(), e.argument(), e.order() + 1);
    case Op::add:
      return differentiate(k[0], coord) + differentiate(k[1], coord);
    case Op::sub:
      return differentiate(k[0], coord) - differentiate(k[1], coord);
    case Op::mul:
      return differentiate(k[0], coord) * k[1] + k[0] * differentiate(k[1], coord);
    case Op::div:
      return (differentiate(k[0], coord) * k[1] -
              k[0] * differentiate(k[1], coord)) /
             k[1].pow(2);
    case Op::pow:
      return ScalarExpr(e.exponent()) * k[0].pow(e.exponent() - 1) *
             differentiate(k[0], coord);
    case Op::exp:
      return e * differentiate(k[0], coord);
    case Op::sin:
      return ScalarExpr::apply(Op::cos, k[0]) * differentiate(k[0], coord);
    case Op::cos:
      return -(ScalarExpr::apply(Op::sin, k[0]) * differentiate(k[0], coord));
    case Op::sqrt:
      return differentiate(k[0], coord) / (ScalarExpr(2) * e);
  }
  return ScalarExpr(0);
}

ScalarExpr canonicalize(const ScalarExpr& e) {
  return ScalarExpr::from_rational(e.to_rational());
}

// ---------------------------------------------------------------------------
// Equality

void Assumptions::merge(const Assumptions& o) {
  for (const auto& [k, iv] : o.intervals) {
    auto it = intervals.find(k);
    if (it == intervals.end()) {
      intervals.emplace(k, iv);
    } else {
      it->second.lo = std::max(it->second.lo, iv.lo);
      it->second.hi = std::min(it->second.hi, iv.hi);
    }
  }
  nonvanishing.insert(nonvanishing.end(), o.nonvanishing.begin(),
                      o.nonvanishing.end());
  positive.insert(positive.end(), o.positive.begin(), o.positive.end());
}

const char* to_string(Equality e) {
  switch (e) {
    case Equality::equal:
      return "equal";
    case Equality::not_equal:
      return "not_equal";
    case Equality::undecided:
      return "undecided";
  }
  return "?";
}

PointSampler::PointSampler(const Assumptions& assume, std::uint64_t seed)
    : assume_(assume), rng_(seed) {}

void PointSampler::next() { values_.clear(); }

double PointSampler::value(AtomId id) {
  auto it = values_.find(id);
  if (it != values_.end()) return it->second;
  const AtomInfo& info = atom_info(id);
  double lo = 0.5, hi = 2.0;
  const Interval* c = nullptr;
  if (info.kind == AtomKind::symbol || info.order == 0) {
    auto f = assume_.intervals.find(info.name);
    if (f != assume_.intervals.end()) c = &f->second;
  }
  if (c) {
    double l = std::max(lo, c->lo), h = std::min(hi, c->hi);
    if (l < h) {
      lo = l;
      hi = h;
    } else if (c->lo > -1e299 && c->hi < 1e299) {
      double w = c->hi - c->lo;
      lo = c->lo + 0.1 * w;
      hi = c->hi - 0.1 * w;
    } else if (c->lo > -1e299) {
      lo = c->lo + 0.5;
      hi = c->lo + 2.0;
    } else {
      lo = c->hi - 2.0;
      hi = c->hi - 0.5;
    }
  }
  double v = std::uniform_real_distribution<double>(lo, hi)(rng_);
  values_.emplace(id, v);
  return v;
}

EvalEnv PointSampler::env() {
  return EvalEnv{[this](AtomId id, const AtomInfo&) { return value(id); }};
}

bool PointSampler::admissible() {
  EvalEnv e = env();
  for (const auto& r : assume_.nonvanishing) {
    double v = r.evaluate(e);
    if (!std::isfinite(v) || std::abs(v) < 1e-9) return false;
  }
  for (const auto& r : assume_.positive) {
    double v = r.evaluate(e);
    if (!std::isfinite(v) || v <= 0) return false;
  }
  return true;
}

Equality expr_equal(const RationalFunction& a, const RationalFunction& b,
                    const Assumptions& assume, const EqualityOptions& opts) {
  RationalFunction d = a - b;
  if (d.is_zero()) return Equality::equal;
  if (!d.contains_opaque()) return Equality::not_equal;
  PointSampler sampler(assume, opts.seed);
  EvalEnv env = sampler.env();
  int valid = 0;
  for (int attempt = 0; attempt < opts.max_attempts && valid < opts.points;
       ++attempt) {
    sampler.next();
    if (!sampler.admissible()) continue;
    double va = a.evaluate(env);
    double vb = b.evaluate(env);
    if (!std::isfinite(va) || !std::isfinite(vb)) continue;
    ++valid;
    if (std::abs(va - vb) >= 1e-9 * (1 + std::abs(va))) return Equality::not_equal;
  }
  return valid == 0 ? Equality::undecided : Equality::equal;
}

Equality expr_equal(const ScalarExpr& a, const ScalarExpr& b,
                    const Assumptions& assume, const EqualityOptions& opts) {
  return expr_equal(a.to_rational(), b.to_rational(), assume, opts);
}

bool is_zero(const RationalFunction& r, const Assumptions& assume,
             const EqualityOptions& opts) {
  if (r.is_zero()) return true;
  return expr_equal(r, RationalFunction(0), assume, opts) == Equality::equal;
}

}  // namespace superwarp
