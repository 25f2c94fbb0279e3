#include "test_support.hpp"
#include "fixtures.hpp"

#include "superwarp/curvature.hpp"

using namespace superwarp;
using namespace fixtures;

namespace {

SuperScalar S(const char* text, const Chart& c) { return parse_super(text, c); }
VectorField F(const char* text, const Chart& c) { return parse_field(text, c); }
VectorField frame(const ManifoldSpec& m, int i) { return VectorField::frame(m.chart, i); }

// R^(1,0) x_h F with F flat of dimension (2,2).
ManifoldSpec warped_line_22() {
  return build_manifold("warped",
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

TEST_CASE("flat Levi-Civita curvature vanishes") {
  Curvature k(levi_civita(r12()));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(k.ricci_frame(i, j).is_zero());
      for (int l = 0; l < 3; ++l) CHECK(k.frame(i, j, l).is_zero());
    }
  CHECK(k.riemann_rows().empty());
}

TEST_CASE("ssnm curvature on R^(1,2)") {
  ManifoldSpec m = r12();
  const Chart& c = m.chart;
  Curvature k(ssnm_connection(m, F("d_t", c)));
  CHECK(k.frame(0, 1, 0) == F("-d_xi", c));
  CHECK(k.frame(1, 0, 0) == F("d_xi", c));
  CHECK(k.frame(0, 2, 0) == F("-d_eta", c));
  // Hand expansion of the Ricci sum: only I = xi, eta contribute, each with
  // the sign (-1)^{|I||I|} = -1 times the coefficient 1 of R(d_I,d_t)d_t.
  CHECK(k.ricci_frame(0, 0) == SuperScalar(-2));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a || b) CHECK(k.ricci_frame(a, b).is_zero());
  CHECK(ricci(k.connection(), frame(m, 0), frame(m, 0)) == SuperScalar(-2));
}

TEST_CASE("warped Levi-Civita: base-base-fiber curvature vanishes") {
  ManifoldSpec w = warped_line_22();
  Curvature k(levi_civita(w));
  for (int v = 1; v < w.dim(); ++v) CHECK(k.frame(0, 0, v).is_zero());
}

TEST_CASE("Ricci of the warped ssnm connection along the base") {
  // Base R^(1,0), fiber (q, n) = (2, 2): q - n = 0; fiber (2, 0): q - n = 2.
  ManifoldSpec w22 = warped_line_22();
  Curvature k22(ssnm_connection(w22, F("d_t", w22.chart)));
  CHECK(k22.ricci_frame(0, 0).is_zero());

  ManifoldSpec w20 = build_manifold(
      "w20", Chart({{"t", Parity::even}, {"y1", Parity::even}, {"y2", Parity::even}}),
      {{{"t", "t"}, "-1"}, {{"y1", "y1"}, "h(t)^2"}, {{"y2", "y2"}, "h(t)^2"}},
      Parity::even, positive_h());
  Curvature k20(ssnm_connection(w20, F("d_t", w20.chart)));
  CHECK(k20.ricci_frame(0, 0) == S("-2*(h''(t)/h(t) - 1)", w20.chart));

  ManifoldSpec w02 = build_manifold(
      "w02", Chart({{"t", Parity::even}, {"xi", Parity::odd}, {"eta", Parity::odd}}),
      {{{"t", "t"}, "-1"}, {{"xi", "eta"}, "-h(t)^2"}}, Parity::even, positive_h());
  Curvature k02(ssnm_connection(w02, F("d_t", w02.chart)));
  CHECK(k02.ricci_frame(0, 0) == S("2*(h''(t)/h(t) - 1)", w02.chart));
}

TEST_CASE("curvature identities on random fields") {
  std::mt19937_64 rng(41);
  for (const ManifoldSpec& m : {r12(), curved(), warped_line_22()}) {
    const Chart& c = m.chart;
    VectorField p = random_field(rng, c, Parity::even);
    for (const Connection& conn : {levi_civita(m), ssnm_connection(m, p)}) {
      for (int r = 0; r < 3; ++r) {
        Parity px = random_parity(rng), py = random_parity(rng), pz = random_parity(rng),
               pf = random_parity(rng);
        VectorField x = random_field(rng, c, px), y = random_field(rng, c, py),
                    z = random_field(rng, c, pz);
        SuperScalar f = random_scalar(rng, c, pf);
        VectorField rxy = riemann(conn, x, y, z);
        VectorField ryx = riemann(conn, y, x, z);
        CHECK((swap_sign(px, py) == 1 ? rxy + ryx : rxy - ryx).is_zero());
        // Tensorial in Z: R(X,Y)(fZ) = (-1)^{|f|(|X|+|Y|)} f R(X,Y)Z.
        int s = swap_sign(pf, px + py);
        VectorField fr = f * rxy;
        CHECK(riemann(conn, x, y, f * z) == (s == 1 ? fr : -fr));
        CHECK(ricci(conn, x, y) == ricci(conn, y, x).scaled(swap_sign(px, py)));
      }
    }
  }
}

TEST_CASE("frame cache agrees with the field formula") {
  ManifoldSpec m = curved();
  Curvature k(ssnm_connection(m, F("d_x + y*d_y", m.chart)));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) {
      CHECK(k.ricci_frame(i, j) == ricci(k.connection(), frame(m, i), frame(m, j)));
      for (int l = 0; l < m.dim(); ++l)
        CHECK(k.frame(i, j, l) == riemann(k.connection(), frame(m, i), frame(m, j), frame(m, l)));
    }
}

TEST_CASE("curvature comparison identity") {
  std::mt19937_64 rng(43);
  for (const ManifoldSpec& m : {r12(), warped_line_22(), curved()}) {
    const Chart& c = m.chart;
    std::vector<VectorField> ps = {VectorField(m.dim()), frame(m, 0),
                                   random_field(rng, c, Parity::even)};
    Connection lc = levi_civita(m);
    for (const VectorField& p : ps) {
      Connection hat = ssnm_connection(m, p);
      for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
          for (int k = 0; k < m.dim(); ++k)
            CHECK(prop215_check(lc, hat, frame(m, i), frame(m, j), frame(m, k)).is_zero());
    }
    CHECK(prop215_check(m, frame(m, 0), frame(m, 0), frame(m, 1), frame(m, 0)).is_zero());
  }
}
