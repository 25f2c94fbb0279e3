#include "test_support.hpp"
#include "fixtures.hpp"

using namespace superwarp;
using namespace fixtures;

namespace {

SuperScalar S(const char* text, const Chart& c) { return parse_super(text, c); }
VectorField F(const char* text, const Chart& c) { return parse_field(text, c); }

VectorField frame(const ManifoldSpec& m, int i) { return VectorField::frame(m.chart, i); }

// Warped R^(1,0) x_h R^(0,2) with the odd block of the flat fiber.
ManifoldSpec warped_line() {
  return build_manifold(
      "warped", Chart({{"t", Parity::even}, {"xi", Parity::odd}, {"eta", Parity::odd}}),
      {{{"t", "t"}, "-1"}, {{"xi", "eta"}, "-h(t)^2"}}, Parity::even, positive_h());
}

// Warped with a two-dimensional even fiber as well.
ManifoldSpec warped_mixed() {
  return build_manifold("warped_mixed",
                        Chart({{"t", Parity::even},
                               {"y1", Parity::even},
                               {"y2", Parity::even},
                               {"xi", Parity::odd},
                               {"eta", Parity::odd}}),
                        {{{"t", "t"}, "-1"},
                         {{"y1", "y1"}, "h(t)^2"},
                         {{"y2", "y2"}, "h(t)^2"},
                         {{"xi", "eta"}, "-h(t)^2"}},
                        Parity::even, positive_h());
}

}  // namespace

TEST_CASE("Levi-Civita symbols") {
  for (const ManifoldSpec& m : {line(), r12()}) {
    Connection lc = levi_civita(m);
    for (const auto& g : lc.gamma_table()) CHECK(g.is_zero());
  }
  ManifoldSpec w = warped_mixed();
  Connection lc = levi_civita(w);
  SuperScalar hh = S("h'(t)/h(t)", w.chart);
  for (int j = 1; j < w.dim(); ++j) {
    CHECK(lc.gamma(0, j, j) == hh);
    CHECK(lc.gamma(j, 0, j) == hh);
  }
  // Lemma-style check: nabla_{d_y1} d_t = (h'/h) d_y1, and for odd U the
  // sign (-1)^{|U||X|} is trivial because d_t is even.
  CHECK(covariant_derivative(lc, frame(w, 1), frame(w, 0)) == hh * frame(w, 1));
  CHECK(covariant_derivative(lc, frame(w, 3), frame(w, 0)) == hh * frame(w, 3));
}

TEST_CASE("covariant derivative basics") {
  ManifoldSpec l = line();
  Connection lc = levi_civita(l);
  CHECK(covariant_derivative(lc, F("d_t", l.chart), F("t*d_t", l.chart)) == F("d_t", l.chart));
  CHECK(covariant_derivative(lc, F("d_t", l.chart), VectorField(1)).is_zero());
}

TEST_CASE("Levi-Civita is torsion free and metric compatible") {
  std::mt19937_64 rng(17);
  for (const ManifoldSpec& m : {r12(), curved(), warped_mixed()}) {
    Connection lc = levi_civita(m);
    int n = m.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CHECK(torsion(lc, frame(m, i), frame(m, j)).is_zero());
        for (int k = 0; k < n; ++k)
          CHECK(nonmetricity_residual(lc, frame(m, i), frame(m, j), frame(m, k)).is_zero());
      }
    for (int r = 0; r < 4; ++r) {
      Parity px = random_parity(rng), py = random_parity(rng), pz = random_parity(rng);
      VectorField x = random_field(rng, m.chart, px), y = random_field(rng, m.chart, py),
                  z = random_field(rng, m.chart, pz);
      CHECK(torsion(lc, x, y).is_zero());
      CHECK(nonmetricity_residual(lc, x, y, z).is_zero());
    }
  }
}

TEST_CASE("Koszul formula holds for non-frame fields") {
  // 2<nabla_X Y, Z> = X<Y,Z> + (-1)^{|X|(|Y|+|Z|)} Y<Z,X> - (-1)^{|Z|(|X|+|Y|)} Z<X,Y>
  //   + <[X,Y],Z> - (-1)^{|X|(|Y|+|Z|)} <[Y,Z],X> + (-1)^{|Z|(|X|+|Y|)} <[Z,X],Y>.
  ManifoldSpec m = curved();
  const Chart& c = m.chart;
  Connection lc = levi_civita(m);
  std::mt19937_64 rng(23);
  for (int r = 0; r < 6; ++r) {
    Parity px = random_parity(rng), py = random_parity(rng), pz = random_parity(rng);
    VectorField x = random_field(rng, c, px), y = random_field(rng, c, py),
                z = random_field(rng, c, pz);
    int s1 = swap_sign(px, py + pz), s2 = swap_sign(pz, px + py);
    SuperScalar rhs = apply(x, metric_eval(m, y, z), c) +
                      apply(y, metric_eval(m, z, x), c).scaled(s1) -
                      apply(z, metric_eval(m, x, y), c).scaled(s2) +
                      metric_eval(m, bracket(x, y, c), z) -
                      metric_eval(m, bracket(y, z, c), x).scaled(s1) +
                      metric_eval(m, bracket(z, x, c), y).scaled(s2);
    CHECK(metric_eval(m, covariant_derivative(lc, x, y), z).scaled(2) == rhs);
  }
}

TEST_CASE("covariant derivative is linear in X and graded Leibniz in Y") {
  ManifoldSpec m = curved();
  const Chart& c = m.chart;
  Connection lc = levi_civita(m);
  std::mt19937_64 rng(29);
  for (int r = 0; r < 6; ++r) {
    Parity px = random_parity(rng), py = random_parity(rng), pf = random_parity(rng);
    VectorField x = random_field(rng, c, px), y = random_field(rng, c, py);
    SuperScalar f = random_scalar(rng, c, pf);
    VectorField d = covariant_derivative(lc, x, y);
    CHECK(covariant_derivative(lc, f * x, y) == f * d);
    CHECK(covariant_derivative(lc, x, f * y) ==
          apply(x, f, c) * y + (f * d).map([&](const SuperScalar& v) {
            return v.scaled(swap_sign(px, pf));
          }));
  }
}

TEST_CASE("ssnm connection on R^(1,2)") {
  ManifoldSpec m = r12();
  const Chart& c = m.chart;
  Connection hat = ssnm_connection(m, F("d_t", c));
  CHECK(covariant_derivative(hat, F("d_xi", c), F("d_eta", c)).is_zero());
  CHECK(covariant_derivative(hat, F("d_t", c), F("d_t", c)) == F("-d_t", c));
  Connection zero = ssnm_connection(m, VectorField(3));
  CHECK(zero.gamma_table() == levi_civita(m).gamma_table());
  CHECK_THROWS_AS(ssnm_connection(m, F("d_xi", c)), DomainError);
}

TEST_CASE("ssnm connection on a warped product") {
  ManifoldSpec w = warped_mixed();
  const Chart& c = w.chart;
  VectorField p = F("d_t", c);
  Connection hat = ssnm_connection(w, p);
  for (int j = 1; j < w.dim(); ++j) {
    VectorField u = frame(w, j);
    SuperScalar coeff = S("h'(t)/h(t)", c) + pi_form(w, p, frame(w, 0));
    CHECK(covariant_derivative(hat, u, frame(w, 0)) == coeff * u);
    CHECK(torsion(hat, frame(w, 0), u) == u);
  }
  CHECK(torsion(hat, frame(w, 0), frame(w, 0)).is_zero());
}

TEST_CASE("ssnm satisfies both characterizing identities") {
  std::mt19937_64 rng(31);
  for (const ManifoldSpec& m : {r12(), curved(), warped_mixed()}) {
    const Chart& c = m.chart;
    for (int trial = 0; trial < 2; ++trial) {
      VectorField p = random_field(rng, c, Parity::even);
      Connection hat = ssnm_connection(m, p);
      Connection lc = levi_civita(m);
      int n = m.dim();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          VectorField x = frame(m, i), y = frame(m, j);
          CHECK(torsion(hat, x, y) == ssnm_torsion_expected(m, p, x, y));
          VectorField diff = covariant_derivative(hat, x, y) - covariant_derivative(lc, x, y);
          CHECK(diff == scalar_from_right(x, pi_form(m, p, y), c));
          for (int k = 0; k < n; ++k) {
            VectorField z = frame(m, k);
            CHECK(nonmetricity_residual(hat, x, y, z) ==
                  ssnm_nonmetricity_expected(m, p, x, y, z));
          }
        }
    }
  }
}

TEST_CASE("non-metricity example on the line") {
  ManifoldSpec l = line();
  VectorField dt = F("d_t", l.chart);
  Connection hat = ssnm_connection(l, dt);
  CHECK(nonmetricity_residual(hat, dt, dt, dt) == SuperScalar(-2));
  CHECK(nonmetricity_residual(ssnm_connection(l, VectorField(1)), dt, dt, dt).is_zero());
}

TEST_CASE("perturbed symbols break the characterization") {
  std::mt19937_64 rng(37);
  ManifoldSpec m = r12();
  const Chart& c = m.chart;
  VectorField p = F("d_t", c);
  Connection hat = ssnm_connection(m, p);
  int n = m.dim();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SuperScalar> g = hat.gamma_table();
    int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n),
        k = static_cast<int>(rng() % n);
    Parity need = c.parity(i) + c.parity(j) + c.parity(k);
    SuperScalar bump = random_scalar(rng, c, need);
    if (bump.is_zero()) continue;
    g[(static_cast<std::size_t>(i) * n + j) * n + k] += bump;
    Connection bad = custom_connection(m, g);
    bool fails = false;
    for (int a = 0; a < n && !fails; ++a)
      for (int b = 0; b < n && !fails; ++b) {
        fails = !(torsion(bad, frame(m, a), frame(m, b)) ==
                  ssnm_torsion_expected(m, p, frame(m, a), frame(m, b)));
        for (int d = 0; d < n && !fails; ++d)
          fails = !(nonmetricity_residual(bad, frame(m, a), frame(m, b), frame(m, d)) ==
                    ssnm_nonmetricity_expected(m, p, frame(m, a), frame(m, b), frame(m, d)));
      }
    CHECK(fails);
  }
}
