#pragma once

// Expression trees over even coordinates, their text syntax, and the
// equality oracle used by every verification in the library.

#include "superwarp/rational_function.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace superwarp {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScalarExpr {
 public:
  enum class Op {
    constant, symbol, function,
    add, sub, mul, div, pow,
    exp, sin, cos, sqrt
  };

  ScalarExpr();  // the zero constant
  ScalarExpr(int c);
  ScalarExpr(const Rational& c);

  static ScalarExpr symbol(std::string name);
  static ScalarExpr function(std::string name, std::string argument,
                             int order = 0);
  static ScalarExpr apply(Op elementary, ScalarExpr arg);

  Op op() const;
  const Rational& value() const;       // constant
  const std::string& name() const;     // symbol, function
  const std::string& argument() const; // function
  int order() const;                   // function derivative order
  int exponent() const;                // pow
  const std::vector<ScalarExpr>& children() const;

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  ScalarExpr operator-() const;
  ScalarExpr pow(int n) const;

  /// Tree-shape equality (no algebra).
  bool structurally_equal(const ScalarExpr& o) const;

  RationalFunction to_rational() const;
  static ScalarExpr from_rational(const RationalFunction& r);

  std::string to_string() const;

 private:
  struct Node;
  explicit ScalarExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

ScalarExpr parse_expr(std::string_view text);
inline RationalFunction parse_rational(std::string_view text) {
  return parse_expr(text).to_rational();
}

/// Tree-level derivative with the usual rules.
ScalarExpr differentiate(const ScalarExpr& e, std::string_view coord);

/// Normal form, rebuilt as a tree.
ScalarExpr canonicalize(const ScalarExpr& e);

struct Interval {
  double lo = -1e300;
  double hi = 1e300;
};

/// Sampling constraints. Intervals are keyed by symbol name, or by the
/// function name for the underived value h(x). Expressions in
/// `nonvanishing` must stay away from zero, those in `positive` above it.
struct Assumptions {
  std::map<std::string, Interval> intervals;
  std::vector<RationalFunction> nonvanishing;
  std::vector<RationalFunction> positive;

  void require_positive(const std::string& key) {
    auto& iv = intervals[key];
    iv.lo = std::max(iv.lo, 0.0);
  }
  void merge(const Assumptions& o);
};

enum class Equality { equal, not_equal, undecided };

const char* to_string(Equality e);

struct EqualityOptions {
  std::uint64_t seed = 20240611;
  int points = 8;
  int max_attempts = 200;
};

/// Exact when the difference is free of opaque atoms; otherwise falls
/// back to random evaluation inside the assumption intervals.
Equality expr_equal(const RationalFunction& a, const RationalFunction& b,
                    const Assumptions& assume = {},
                    const EqualityOptions& opts = {});
Equality expr_equal(const ScalarExpr& a, const ScalarExpr& b,
                    const Assumptions& assume = {},
                    const EqualityOptions& opts = {});

/// Convenience: expr_equal(r, 0) == equal.
bool is_zero(const RationalFunction& r, const Assumptions& assume = {},
             const EqualityOptions& opts = {});

/// Deterministic sampler used by the fallback and by finite-difference
/// tests: value of each leaf atom at one random admissible point.
class PointSampler {
 public:
  PointSampler(const Assumptions& assume, std::uint64_t seed);
  /// Draws a fresh point; every leaf atom gets an independent value.
  void next();
  double value(AtomId id);
  /// Overrides the value of a leaf atom for the current point.
  void set(AtomId id, double v) { values_[id] = v; }
  EvalEnv env();
  bool admissible();

 private:
  const Assumptions& assume_;
  std::mt19937_64 rng_;
  std::map<AtomId, double> values_;
};

}  // namespace superwarp
