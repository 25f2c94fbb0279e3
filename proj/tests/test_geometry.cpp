#include "test_support.hpp"
#include "fixtures.hpp"

using namespace superwarp;
using namespace fixtures;

namespace {

SuperScalar S(const char* text, const Chart& c) { return parse_super(text, c); }
VectorField F(const char* text, const Chart& c) { return parse_field(text, c); }

bool is_identity(const SuperMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (!(m[i][j] == SuperScalar(i == j ? 1 : 0))) return false;
  return true;
}

}  // namespace

TEST_CASE("metric pairing on frame fields") {
  ManifoldSpec l = line();
  CHECK(metric_eval(l, F("d_t", l.chart), F("d_t", l.chart)) == SuperScalar(-1));
  ManifoldSpec m = r12();
  const Chart& c = m.chart;
  CHECK(metric_eval(m, F("d_xi", c), F("d_eta", c)) == SuperScalar(-1));
  CHECK(metric_eval(m, F("d_eta", c), F("d_xi", c)) == SuperScalar(1));
  CHECK(metric_eval(m, F("d_t", c), F("d_xi", c)).is_zero());
  // Coefficients come out on the left with the sign of passing d_I.
  CHECK(metric_eval(m, F("d_xi", c), F("xi*d_eta", c)) == S("xi", c));
  CHECK(metric_eval(m, F("xi*d_xi", c), F("d_eta", c)) == S("-xi", c));
}

TEST_CASE("pairing is graded symmetric and left linear") {
  ManifoldSpec m = curved();
  const Chart& c = m.chart;
  validate(m);
  std::mt19937_64 rng(3);
  for (int n = 0; n < 40; ++n) {
    Parity px = random_parity(rng), py = random_parity(rng), pf = random_parity(rng);
    VectorField x = random_field(rng, c, px), y = random_field(rng, c, py);
    SuperScalar f = random_scalar(rng, c, pf);
    CHECK(metric_eval(m, x, y) == metric_eval(m, y, x).scaled(swap_sign(px, py)));
    CHECK(metric_eval(m, f * x, y) == f * metric_eval(m, x, y));
    CHECK(metric_eval(m, x, f * y) == (f * metric_eval(m, x, y)).scaled(swap_sign(px, pf)));
  }
}

TEST_CASE("inverse metric") {
  ManifoldSpec m = r12();
  InverseMetric inv = invert_metric(m);
  CHECK(inv.entries[0][0] == SuperScalar(-1));
  CHECK(inv.entries[1][2] == SuperScalar(1));
  CHECK(inv.entries[2][1] == SuperScalar(-1));
  CHECK(is_identity(multiply(m.metric, inv.entries)));
  CHECK(is_identity(multiply(line().metric, invert_metric(line()).entries)));
  ManifoldSpec k = curved();
  SuperMatrix kinv = invert_metric(k).entries;
  CHECK(is_identity(multiply(k.metric, kinv)));
  CHECK(is_identity(multiply(kinv, k.metric)));
}

TEST_CASE("warped inverse scales the fiber block") {
  ManifoldSpec w = build_manifold(
      "warped", Chart({{"t", Parity::even}, {"xi", Parity::odd}, {"eta", Parity::odd}}),
      {{{"t", "t"}, "-1"}, {{"xi", "eta"}, "-h(t)^2"}}, Parity::even, positive_h());
  SuperMatrix inv = invert_metric(w).entries;
  CHECK(inv[1][2] == S("1/h(t)^2", w.chart));
  CHECK(inv[2][1] == S("-1/h(t)^2", w.chart));
  CHECK(is_identity(multiply(w.metric, inv)));
}

TEST_CASE("validation names the violated invariant") {
  Chart c({{"x", Parity::even}, {"y", Parity::even}, {"xi", Parity::odd}, {"eta", Parity::odd}});
  auto which = [](const ManifoldSpec& m) {
    try {
      validate(m);
    } catch (const InvariantViolation& e) {
      return e.invariant();
    }
    return std::string("ok");
  };
  CHECK(which(build_manifold("a", c, {{{"x", "x"}, "1"}, {{"y", "y"}, "1"}, {{"xi", "eta"}, "1"}})) == "ok");
  CHECK(which(build_manifold("b", c,
                             {{{"x", "x"}, "1"}, {{"y", "y"}, "1"}, {{"xi", "eta"}, "1"},
                              {{"x", "y"}, "1"}, {{"y", "x"}, "2"}})) == "graded-symmetry");
  CHECK(which(build_manifold("c", c,
                             {{{"x", "x"}, "1"}, {{"y", "y"}, "1"}, {{"xi", "eta"}, "1"},
                              {{"x", "xi"}, "1"}})) == "parity-homogeneity");
  CHECK(which(build_manifold("d", c, {{{"x", "x"}, "1"}, {{"xi", "eta"}, "1"}})) ==
        "body-nondegeneracy");
  // The odd block is antisymmetric, so g(xi,xi) must vanish.
  CHECK(which(build_manifold("e", c,
                             {{{"x", "x"}, "1"}, {{"y", "y"}, "1"}, {{"xi", "eta"}, "1"},
                              {{"xi", "xi"}, "1"}})) == "graded-symmetry");
  CHECK_THROWS_AS(invert(build_manifold("d", c, {{{"x", "x"}, "1"}, {{"xi", "eta"}, "1"}}).metric),
                  DomainError);
}

TEST_CASE("gradient") {
  ManifoldSpec l = line();
  CHECK(gradient(l, S("h(t)", l.chart)) == F("-h'(t)*d_t", l.chart));
  CHECK(gradient(l, S("5", l.chart)).is_zero());
  ManifoldSpec m = r12();
  CHECK(gradient(m, S("h(t)", m.chart)) == F("-h'(t)*d_t", m.chart));
  // d_xi(xi) = 1 = <d_xi, a d_eta> = -a.
  CHECK(gradient(m, S("xi", m.chart)) == F("-d_eta", m.chart));
}

TEST_CASE("gradient satisfies its defining identity on every frame field") {
  std::mt19937_64 rng(5);
  for (const ManifoldSpec& m : {line(), r12(), curved()}) {
    for (int n = 0; n < 6; ++n) {
      Parity pf = random_parity(rng);
      SuperScalar f = random_scalar(rng, m.chart, pf);
      VectorField g = gradient(m, f);
      for (int i = 0; i < m.dim(); ++i) CHECK(gradient_residual(m, f, g, i).is_zero());
    }
  }
}

TEST_CASE("divergence, Laplacian and Hessian") {
  ManifoldSpec l = line();
  Connection lc = levi_civita(l);
  const Chart& c = l.chart;
  CHECK(divergence(lc, F("t*d_t", c)) == SuperScalar(1));
  CHECK(divergence(lc, F("-h'(t)*d_t", c)) == S("-h''(t)", c));
  CHECK(divergence(lc, VectorField(1)).is_zero());
  CHECK(laplacian(l, S("h(t)", c)) == S("-h''(t)", c));
  CHECK(laplacian(l, S("3", c)).is_zero());
  CHECK(hessian(lc, S("h(t)", c), F("d_t", c), F("d_t", c)) == S("h''(t)", c));
  CHECK(hessian(lc, S("2", c), F("d_t", c), F("d_t", c)).is_zero());

  ManifoldSpec m = r12();
  Connection lm = levi_civita(m);
  CHECK(laplacian(lm, S("h(t)", m.chart)) == S("-h''(t)", m.chart));
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      SuperScalar hjk = hessian(lm, S("h(t)", m.chart), VectorField::frame(m.chart, j),
                                VectorField::frame(m.chart, k));
      if (j == 0 && k == 0)
        CHECK(hjk == S("h''(t)", m.chart));
      else
        CHECK(hjk.is_zero());
    }
}

TEST_CASE("Hessian is tensorial in both slots") {
  ManifoldSpec m = curved();
  const Chart& c = m.chart;
  Connection lc = levi_civita(m);
  std::mt19937_64 rng(9);
  for (int n = 0; n < 8; ++n) {
    Parity px = random_parity(rng), py = random_parity(rng), pf = random_parity(rng);
    VectorField x = random_field(rng, c, px), y = random_field(rng, c, py);
    SuperScalar f = random_scalar(rng, c, pf);
    SuperScalar u = random_scalar(rng, c, Parity::even);
    SuperScalar h = hessian(lc, u, x, y);
    CHECK(hessian(lc, u, f * x, y) == f * h);
    CHECK(hessian(lc, u, x, f * y) == (f * h).scaled(swap_sign(pf, px)));
  }
}

TEST_CASE("bracket and scalar from the right") {
  ManifoldSpec m = r12();
  const Chart& c = m.chart;
  CHECK(bracket(F("d_xi", c), F("d_eta", c), c).is_zero());
  CHECK(bracket(F("d_t", c), F("t*d_xi", c), c) == F("d_xi", c));
  // [d_xi, xi d_eta] = d_eta, since (-1)^{1*0}.
  CHECK(bracket(F("d_xi", c), F("xi*d_eta", c), c) == F("d_eta", c));
  CHECK(scalar_from_right(F("d_xi", c), S("eta", c), c) == F("-eta*d_xi", c));
  CHECK(scalar_from_right(F("d_t", c), S("eta", c), c) == F("eta*d_t", c));
  CHECK_THROWS_AS(bracket(F("d_t + d_xi", c), F("d_t", c), c), DomainError);
}

TEST_CASE("field parser") {
  Chart c({{"t", Parity::even}, {"xi", Parity::odd}});
  CHECK(F("d_t", c).to_string(c) == "d_t");
  CHECK(F("h(t)*d_t - xi*d_xi", c).to_string(c) == "h(t)*d_t - xi*d_xi");
  CHECK(F("d_t/h(t)", c) == F("(1/h(t))*d_t", c));
  CHECK_THROWS_AS(F("d_t*h(t)", c), ParseError);
  CHECK_THROWS_AS(F("d_s", c), ParseError);
  CHECK_THROWS_AS(F("t + d_t", c), ParseError);
  CHECK(F("0", c).is_zero());
}
