#include "test_support.hpp"

#include "superwarp/super_scalar.hpp"

#include <algorithm>
#include <bit>
#include <random>

using namespace superwarp;

namespace {

Chart chart3() {
  return Chart({{"t", Parity::even},
                {"xi", Parity::odd},
                {"eta", Parity::odd},
                {"zeta", Parity::odd}});
}

SuperScalar S(const char* text, const Chart& c) { return parse_super(text, c); }

RationalFunction random_coeff(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(-3, 3);
  RationalFunction t = RationalFunction::symbol("t");
  RationalFunction h = RationalFunction::function("h", "t");
  RationalFunction c(small(rng));
  if (rng() % 2) c += RationalFunction(small(rng)) * t;
  if (rng() % 3 == 0) c += h * RationalFunction(small(rng));
  if (c.is_zero()) c = RationalFunction(1);
  return c;
}

// Random element of the requested parity, or of mixed parity when unset.
SuperScalar random_super(std::mt19937_64& rng, std::optional<Parity> p = {}) {
  SuperScalar out;
  int terms = 1 + static_cast<int>(rng() % 4);
  for (int k = 0; k < terms; ++k) {
    SuperScalar::Mask m = static_cast<SuperScalar::Mask>(rng() % 8);
    if (p && parity_of(std::popcount(m)) != *p) m ^= 1u;
    out += SuperScalar::term(m, random_coeff(rng));
  }
  return out;
}

}  // namespace

TEST_CASE("graded product signs") {
  Chart c = chart3();
  SuperScalar xi = S("xi", c), eta = S("eta", c);
  CHECK(xi * eta == S("xi*eta", c));
  CHECK(eta * xi == -S("xi*eta", c));
  CHECK(S("eta*xi", c) == -S("xi*eta", c));
  CHECK((xi * xi).is_zero());
  CHECK((S("1 + xi*eta", c) * S("1 - xi*eta", c)) == SuperScalar(1));
  CHECK(S("zeta*eta*xi", c) == -S("xi*eta*zeta", c));
  CHECK(S("xi*eta", c).parity() == Parity::even);
  CHECK(S("xi*eta*zeta", c).parity() == Parity::odd);
  CHECK_FALSE(S("1 + xi", c).parity().has_value());
}

TEST_CASE("left odd derivative") {
  Chart c = chart3();
  CHECK(partial(S("xi*eta", c), c, 1) == S("eta", c));
  CHECK(partial(S("xi*eta", c), c, 2) == -S("xi", c));
  CHECK(partial(S("h(t)*xi*eta", c), c, 0) == S("h'(t)*xi*eta", c));
  CHECK(partial(S("xi*eta*zeta", c), c, 3) == S("xi*eta", c));
  CHECK(partial(S("t^2", c), c, 1).is_zero());
  CHECK_THROWS(partial(S("t", c), c, 7));
}

TEST_CASE("inverse of even elements") {
  Chart c = chart3();
  SuperScalar f = S("h(t) + xi*eta + t*eta*zeta", c);
  CHECK(f * inverse(f) == SuperScalar(1));
  CHECK(inverse(f) * f == SuperScalar(1));
  CHECK_THROWS(inverse(S("xi*eta", c)));
}

TEST_CASE("monomial sign agrees with the reorder routine") {
  // Concatenate the generators of a then b and sort; compare signs.
  for (SuperScalar::Mask a = 0; a < 16; ++a)
    for (SuperScalar::Mask b = 0; b < 16; ++b) {
      int expected = 0;
      if (!(a & b)) {
        std::vector<int> gens;
        for (int k = 0; k < 4; ++k)
          if (a >> k & 1) gens.push_back(k);
        for (int k = 0; k < 4; ++k)
          if (b >> k & 1) gens.push_back(k);
        std::vector<Parity> ps(gens.size(), Parity::odd);
        std::vector<int> order(gens.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(),
                  [&](int x, int y) { return gens[x] < gens[y]; });
        expected = reorder_sign(ps, order);
      }
      CHECK(monomial_product_sign(a, b) == expected);
    }
}

TEST_CASE("reorder sign basics") {
  CHECK(swap_sign(Parity::odd, Parity::odd) == -1);
  CHECK(swap_sign(Parity::odd, Parity::even) == 1);
  CHECK(move_past_sign(Parity::odd, {Parity::odd, Parity::odd}) == 1);
  CHECK(move_past_sign(Parity::odd, {Parity::odd, Parity::even}) == -1);
  const Parity ps[3] = {Parity::odd, Parity::odd, Parity::odd};
  const int cyc[3] = {1, 2, 0};
  CHECK(reorder_sign(ps, cyc) == 1);
}

TEST_CASE("graded commutativity and associativity on random elements") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 120; ++n) {
    Parity pf = parity_of(static_cast<int>(rng() % 2));
    Parity pg = parity_of(static_cast<int>(rng() % 2));
    SuperScalar f = random_super(rng, pf), g = random_super(rng, pg);
    CHECK(f * g == (g * f).scaled(swap_sign(pf, pg)));
    SuperScalar a = random_super(rng), b = random_super(rng), d = random_super(rng);
    CHECK((a * b) * d == a * (b * d));
  }
}

TEST_CASE("graded Leibniz rule and anticommuting odd derivatives") {
  Chart c = chart3();
  std::mt19937_64 rng(11);
  for (int n = 0; n < 120; ++n) {
    Parity pf = parity_of(static_cast<int>(rng() % 2));
    SuperScalar f = random_super(rng, pf), g = random_super(rng);
    for (int i = 0; i < c.dim(); ++i) {
      int s = swap_sign(c.parity(i), pf);
      CHECK(partial(f * g, c, i) ==
            partial(f, c, i) * g + (f * partial(g, c, i)).scaled(s));
    }
    for (int i = 1; i < c.dim(); ++i) {
      CHECK(partial(partial(f, c, i), c, i).is_zero());
      for (int j = 1; j < c.dim(); ++j)
        CHECK(partial(partial(f, c, i), c, j) == -partial(partial(f, c, j), c, i));
    }
    CHECK(partial(partial(f, c, 0), c, 1) == partial(partial(f, c, 1), c, 0));
  }
}

TEST_CASE("chart and parser errors") {
  CHECK_THROWS(Chart({{"x", Parity::even}, {"x", Parity::odd}}));
  Chart c = chart3();
  CHECK_THROWS_AS(parse_super("exp(xi)", c), ParseError);
  CHECK_THROWS_AS(parse_super("1/xi", c), ParseError);
  CHECK(parse_super("1/(1 + xi*eta)", c) == parse_super("1 - xi*eta", c));
}
