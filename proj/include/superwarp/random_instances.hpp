#pragma once

// Seeded random scalars and fields for property checks. Coefficients are
// small integer polynomials in the even coordinates.

#include "superwarp/geometry.hpp"

#include <bit>
#include <random>

namespace superwarp {

inline RationalFunction random_coeff(std::mt19937_64& rng, const Chart& c) {
  std::uniform_int_distribution<int> small(-2, 2);
  RationalFunction out(small(rng));
  for (int i = 0; i < c.dim(); ++i)
    if (c.parity(i) == Parity::even && rng() % 2)
      out += RationalFunction(small(rng)) * RationalFunction::symbol(c.coord(i).name);
  if (out.is_zero()) out = RationalFunction(1);
  return out;
}

inline SuperScalar random_scalar(std::mt19937_64& rng, const Chart& c, Parity p) {
  int odd = c.odd_count();
  SuperScalar out;
  int terms = 1 + static_cast<int>(rng() % 3);
  for (int k = 0; k < terms; ++k) {
    SuperScalar::Mask m = odd ? static_cast<SuperScalar::Mask>(rng() % (1u << odd)) : 0;
    if (parity_of(std::popcount(m)) != p) {
      if (!odd) continue;
      m ^= 1u;
    }
    out += SuperScalar::term(m, random_coeff(rng, c));
  }
  return out;
}

inline VectorField random_field(std::mt19937_64& rng, const Chart& c, Parity p) {
  VectorField x(c.dim());
  for (int i = 0; i < c.dim(); ++i)
    if (rng() % 3) x[i] = random_scalar(rng, c, p + c.parity(i));
  return x;
}

inline Parity random_parity(std::mt19937_64& rng) {
  return parity_of(static_cast<int>(rng() % 2));
}

}  // namespace superwarp
