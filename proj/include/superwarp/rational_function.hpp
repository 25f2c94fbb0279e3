#pragma once

// Canonical normal form for even (Grassmann-free) coordinate functions.
//
// A RationalFunction is a quotient of two sparse multivariate polynomials
// with exact rational coefficients. The indeterminates ("atoms") are
// coordinate/parameter symbols, named functions h^(k)(x) of one coordinate,
// and opaque elementary subterms sqrt(.), exp(.), sin(.), cos(.) whose
// arguments are themselves in normal form.
//
// Normalization guarantees a unique zero and cancels common factors of
// numerator and denominator (full multivariate gcd when no exp atoms are
// involved, monomial content otherwise). Zero testing is therefore exact.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace superwarp {

using Rational = mpq_class;

class RationalFunction;

enum class AtomKind : std::uint8_t { symbol = 0, function, sqrt, exp, sin, cos };

/// Interned atom handle. The low three bits carry the AtomKind.
using AtomId = std::uint32_t;

constexpr AtomKind kind_of(AtomId id) {
  return static_cast<AtomKind>(id & 0x7u);
}

struct AtomInfo {
  AtomKind kind = AtomKind::symbol;
  std::string name;      // symbol name, or function name
  std::string argument;  // coordinate a named function depends on
  int order = 0;         // derivative order of a named function
  std::shared_ptr<const RationalFunction> inner;  // elementary argument
};

AtomId symbol_atom(std::string_view name);
AtomId function_atom(std::string_view name, std::string_view argument,
                     int order);
const AtomInfo& atom_info(AtomId id);

/// Structural order on atoms, independent of interning order.
int compare_atoms(AtomId a, AtomId b);

std::string atom_to_string(AtomId id);

struct Monomial {
  // Sorted by descending AtomId; exponents are positive. An exp atom
  // appears at most once, with exponent 1 (exp(a)exp(b) -> exp(a+b)).
  std::vector<std::pair<AtomId, int>> factors;

  bool empty() const { return factors.empty(); }
  int exponent_of(AtomId id) const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Lexicographic order with larger atom ids more significant.
int compare_lex(const Monomial& a, const Monomial& b);

Monomial operator*(const Monomial& a, const Monomial& b);

class Poly {
 public:
  struct Term {
    Monomial monomial;
    Rational coeff;
  };

  Poly() = default;
  explicit Poly(Rational c);
  static Poly from_term(Monomial m, Rational c);
  static Poly atom(AtomId id, int power = 1);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant value if the polynomial has no atoms.
  std::optional<Rational> constant_value() const;
  bool contains_kind(AtomKind kind) const;
  int max_power_of_kind(AtomKind kind) const;

  Poly operator-() const;
  Poly scaled(const Rational& c) const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b);

  void collect_atoms(std::set<AtomId>& out) const;
  std::string to_string() const;

 private:
  friend class PolyBuilder;
  void combine();
  std::vector<Term> terms_;
};

/// Exact division; nullopt when b does not divide a. Requires exp-free input.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

/// Monic greatest common divisor over Q of exp-free polynomials.
Poly poly_gcd(const Poly& a, const Poly& b);

/// Numeric value provider for leaf atoms (symbols and named functions).
struct EvalEnv {
  std::function<double(AtomId, const AtomInfo&)> leaf;
};

class RationalFunction {
 public:
  RationalFunction() : den_(Rational(1)) {}
  RationalFunction(const Rational& c) : num_(c), den_(Rational(1)) {}
  RationalFunction(int c) : RationalFunction(Rational(c)) {}
  RationalFunction(Poly num, Poly den);

  static RationalFunction symbol(std::string_view name);
  static RationalFunction function(std::string_view name,
                                   std::string_view argument, int order = 0);
  static RationalFunction exp(const RationalFunction& arg);
  static RationalFunction sin(const RationalFunction& arg);
  static RationalFunction cos(const RationalFunction& arg);
  static RationalFunction sqrt(const RationalFunction& arg);

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  std::optional<Rational> constant_value() const;
  /// True when sqrt/exp/sin/cos atoms occur anywhere.
  bool contains_opaque() const;

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a,
                                    const RationalFunction& b) {
    return a += b;
  }
  friend RationalFunction operator-(RationalFunction a,
                                    const RationalFunction& b) {
    return a -= b;
  }
  friend RationalFunction operator*(RationalFunction a,
                                    const RationalFunction& b) {
    return a *= b;
  }
  friend RationalFunction operator/(RationalFunction a,
                                    const RationalFunction& b) {
    return a /= b;
  }
  RationalFunction pow(int n) const;

  /// Structural equality of normal forms.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction derivative(std::string_view coordinate) const;

  /// Replace atoms. The callback returns a replacement or nullopt to keep
  /// the atom; elementary atoms are rebuilt from substituted arguments.
  RationalFunction substitute(
      const std::function<std::optional<RationalFunction>(AtomId)>& f) const;
  RationalFunction substitute_symbol(std::string_view name,
                                     const RationalFunction& value) const;
  /// Replace a named function h^(k) by the k-th derivative of `value`.
  RationalFunction substitute_function(std::string_view name,
                                       const RationalFunction& value) const;

  /// Leaf atoms (symbols and named functions), including those inside
  /// elementary arguments.
  std::set<AtomId> leaf_atoms() const;
  bool depends_on(std::string_view coordinate) const;

  double evaluate(const EvalEnv& env) const;
  std::string to_string() const;

 private:
  void normalize();
  Poly num_;
  Poly den_;
};

/// Structural total order on normal forms.
int compare_structural(const RationalFunction& a, const RationalFunction& b);

double evaluate(const Poly& p, const EvalEnv& env);

}  // namespace superwarp
