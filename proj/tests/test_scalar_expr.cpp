#include "test_support.hpp"

#include "superwarp/scalar_expr.hpp"

#include <cmath>
#include <random>

using namespace superwarp;

namespace {

RationalFunction R(const char* s) { return parse_rational(s); }

// Evaluates after replacing h by a concrete smooth function of t, so that
// h, h', h'' stop being independent.
double eval_concrete(const RationalFunction& r, double t, double k) {
  RationalFunction c =
      r.substitute_function("h", R("2 + sin(t) + t^2/3"));
  EvalEnv env{[&](AtomId, const AtomInfo& info) {
    if (info.name == "t") return t;
    if (info.name == "k") return k;
    return std::nan("");
  }};
  return c.evaluate(env);
}

ScalarExpr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 11);
  ScalarExpr t = ScalarExpr::symbol("t");
  ScalarExpr k = ScalarExpr::symbol("k");
  switch (pick(rng)) {
    case 0:
      return ScalarExpr(Rational(std::uniform_int_distribution<int>(-3, 3)(rng),
                                 std::uniform_int_distribution<int>(1, 3)(rng)));
    case 1:
      return t;
    case 2:
      return k;
    case 3:
      return ScalarExpr::function("h", "t");
    case 4:
      return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 5:
      return random_tree(rng, depth - 1) - random_tree(rng, depth - 1);
    case 6:
    case 7:
      return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 8: {
      ScalarExpr d = random_tree(rng, depth - 1);
      return random_tree(rng, depth - 1) / (d * d + ScalarExpr(1));
    }
    case 9:
      return random_tree(rng, depth - 1).pow(
          std::uniform_int_distribution<int>(2, 3)(rng));
    case 10:
      return ScalarExpr::apply(ScalarExpr::Op::sin, random_tree(rng, depth - 1));
    default: {
      ScalarExpr a = random_tree(rng, depth - 1);
      return ScalarExpr::apply(ScalarExpr::Op::sqrt, a * a + ScalarExpr(1));
    }
  }
}

}  // namespace

TEST_CASE("differentiate: product and exponential rules") {
  auto h = ScalarExpr::function("h", "t");
  CHECK(expr_equal(differentiate(h * h, "t"), parse_expr("2*h(t)*h'(t)")) ==
        Equality::equal);
  CHECK(expr_equal(differentiate(parse_expr("c1*exp(t)"), "t"),
                   parse_expr("c1*exp(t)")) == Equality::equal);
  CHECK(differentiate(ScalarExpr(Rational(7, 3)), "t").to_rational().is_zero());
  CHECK(differentiate(h, "x").to_rational().is_zero());
}

TEST_CASE("differentiate: quotient of squared derivative") {
  ScalarExpr e = parse_expr("h'(t)^2/h(t)^2");
  RationalFunction d = differentiate(e, "t").to_rational();
  RationalFunction expected = R("(2*h'(t)*h''(t)*h(t) - 2*h'(t)^3)/h(t)^3");
  CHECK(d == expected);
  CHECK(d.denominator() == R("h(t)^3").numerator());

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 5; ++i) {
    double t = u(rng), step = 1e-5;
    RationalFunction f = e.to_rational();
    double fd = (eval_concrete(f, t + step, 0) - eval_concrete(f, t - step, 0)) /
                (2 * step);
    double an = eval_concrete(d, t, 0);
    CHECK(std::abs(fd - an) < 1e-6 * (1 + std::abs(an)));
  }
}

TEST_CASE("canonicalize: cancellation and factoring") {
  CHECK(canonicalize(parse_expr("h(t)*h'(t) - h'(t)*h(t)")).to_string() == "0");
  CHECK(R("(h(t)^2 - 1)/(h(t) - 1)") == R("h(t) + 1"));
  CHECK(R("(x^2 - y^2)/(x + y)") == R("x - y"));
  CHECK(R("(x^2*y + x*y^2)/(x*y^2 + y^3)") == R("x/y"));
  CHECK(R("1/(a - b) - 1/(b - a)") == R("2/(a - b)"));
}

TEST_CASE("canonicalize: idempotent and round-trips through text") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    ScalarExpr e = random_tree(rng, 3);
    ScalarExpr c1 = canonicalize(e);
    ScalarExpr c2 = canonicalize(c1);
    CHECK(c1.structurally_equal(c2));
    RationalFunction r = e.to_rational();
    CHECK(parse_rational(r.to_string()) == r);
  }
}

TEST_CASE("canonicalize: exponential family of the hyperbolic case") {
  RationalFunction h = R("c1*exp(sqrt(1 - lambda0)*t)");
  RationalFunction res = (h.derivative("t").derivative("t")) / h -
                         (RationalFunction(1) - R("lambda0"));
  CHECK(res.is_zero());
  RationalFunction h2 = R("c1*exp(sqrt(1 - lambda0)*t) + c2*exp(-sqrt(1 - lambda0)*t)");
  RationalFunction res2 = h2.derivative("t").derivative("t") -
                          (RationalFunction(1) - R("lambda0")) * h2;
  CHECK(res2.is_zero());
}

TEST_CASE("elementary simplifications") {
  CHECK(R("exp(t)*exp(-t)") == RationalFunction(1));
  CHECK(R("exp(a)*exp(b)") == R("exp(a + b)"));
  CHECK(R("exp(0)") == RationalFunction(1));
  CHECK(R("sin(0)").is_zero());
  CHECK(R("cos(0)") == RationalFunction(1));
  CHECK(R("sqrt(x)^2") == R("x"));
  CHECK(R("sqrt(x)^3") == R("x*sqrt(x)"));
  CHECK(R("sqrt(9/4)") == RationalFunction(Rational(3, 2)));
  CHECK(R("1/exp(t)") == R("exp(-t)"));
}

TEST_CASE("expr_equal") {
  CHECK(expr_equal(R("h'(t)*h(t)/h(t)"), R("h'(t)")) == Equality::equal);
  CHECK(expr_equal(R("h''(t)"), R("h'(t)")) == Equality::not_equal);
  CHECK(expr_equal(R("sin(k*t)^2 + cos(k*t)^2"), R("1")) == Equality::equal);
  CHECK(expr_equal(R("sin(k*t)^2 + cos(k*t)^2"), R("2")) == Equality::not_equal);

  // Every sampled point violates the registered assumption.
  Assumptions impossible;
  impossible.positive.push_back(R("-1 - x^2"));
  CHECK(expr_equal(R("sin(x)"), R("cos(x)"), impossible) == Equality::undecided);
}

TEST_CASE("expr_equal respects interval assumptions") {
  Assumptions a;
  a.intervals["x"] = Interval{-5, -1};
  // sqrt(x^2) = -x only when x < 0.
  CHECK(expr_equal(R("sqrt(x^2)"), R("-x"), a) == Equality::equal);
  CHECK(expr_equal(R("sqrt(x^2)"), R("-x")) == Equality::not_equal);
}

TEST_CASE("parser errors") {
  CHECK_THROWS_AS(parse_expr("1 +"), ParseError);
  CHECK_THROWS_AS(parse_expr("t^x"), ParseError);
  CHECK_THROWS_AS(parse_expr("h(t"), ParseError);
  CHECK_THROWS_AS(parse_expr("x'"), ParseError);
  CHECK(parse_rational("0.25*t") == R("t/4"));
  CHECK(parse_rational("-t^2") == -R("t*t"));
}

TEST_CASE("property: commutativity and product rule on random trees") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    ScalarExpr a = random_tree(rng, 3);
    ScalarExpr b = random_tree(rng, 3);
    CHECK(expr_equal(a + b, b + a) == Equality::equal);
    CHECK(expr_equal(a * b, b * a) == Equality::equal);
    ScalarExpr lhs = differentiate(a * b, "t");
    ScalarExpr rhs = differentiate(a, "t") * b + a * differentiate(b, "t");
    CHECK(expr_equal(lhs, rhs) == Equality::equal);
  }
}

TEST_CASE("property: derivative matches central differences") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    ScalarExpr e = random_tree(rng, 3);
    RationalFunction f = e.to_rational();
    RationalFunction df = differentiate(e, "t").to_rational();
    CHECK(df == f.derivative("t"));
    for (int p = 0; p < 3; ++p) {
      double t = u(rng), k = u(rng), step = 1e-5;
      double fd = (eval_concrete(f, t + step, k) - eval_concrete(f, t - step, k)) /
                  (2 * step);
      double an = eval_concrete(df, t, k);
      CHECK(std::abs(fd - an) <= 1e-4 * (1 + std::abs(an)));
    }
  }
}
