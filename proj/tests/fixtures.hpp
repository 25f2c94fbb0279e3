#pragma once

// Small manifolds and random generators shared by the geometry tests.

#include "superwarp/random_instances.hpp"
#include "superwarp/warped.hpp"

#include <bit>
#include <random>

namespace fixtures {

using namespace superwarp;

inline Assumptions positive_h() {
  Assumptions a;
  a.require_positive("h");
  return a;
}

/// R^(1,0) with g = -dt dt.
inline ManifoldSpec line() {
  return build_manifold("line", Chart({{"t", Parity::even}}), {{{"t", "t"}, "-1"}},
                        Parity::even, positive_h());
}

/// R^(1,2) with g(dt,dt) = -1, g(dxi,deta) = -1, g(deta,dxi) = 1.
inline ManifoldSpec r12() {
  return build_manifold("r12",
                        Chart({{"t", Parity::even}, {"xi", Parity::odd}, {"eta", Parity::odd}}),
                        {{{"t", "t"}, "-1"}, {{"xi", "eta"}, "-1"}}, Parity::even,
                        positive_h());
}

/// A non-constant metric with odd entries off the diagonal blocks.
inline ManifoldSpec curved() {
  Assumptions a;
  a.intervals["x"] = Interval{0.5, 2.0};
  a.intervals["y"] = Interval{0.5, 2.0};
  return build_manifold(
      "curved",
      Chart({{"x", Parity::even},
             {"y", Parity::even},
             {"xi", Parity::odd},
             {"eta", Parity::odd}}),
      {{{"x", "x"}, "1 + y^2 + x*xi*eta"},
       {{"y", "y"}, "x^2"},
       {{"x", "xi"}, "y*eta"},
       {{"y", "eta"}, "x*xi"},
       {{"xi", "eta"}, "-x"}},
      Parity::even, a);
}

/// Fibers for warped products; coordinate names avoid t, xi, eta.
inline ManifoldSpec flat20() {
  return build_manifold("flat20", Chart({{"y1", Parity::even}, {"y2", Parity::even}}),
                        {{{"y1", "y1"}, "1"}, {{"y2", "y2"}, "1"}});
}

inline ManifoldSpec odd02() {
  return build_manifold("odd02", Chart({{"zeta1", Parity::odd}, {"zeta2", Parity::odd}}),
                        {{{"zeta1", "zeta2"}, "-1"}});
}

inline ManifoldSpec mixed12() {
  return build_manifold(
      "mixed12", Chart({{"y1", Parity::even}, {"zeta1", Parity::odd}, {"zeta2", Parity::odd}}),
      {{{"y1", "y1"}, "-1"}, {{"zeta1", "zeta2"}, "-1"}});
}

/// Four flat even directions plus one odd block; q - n = 2 like flat20.
inline ManifoldSpec flat42() {
  return build_manifold("flat42",
                        Chart({{"y1", Parity::even},
                               {"y2", Parity::even},
                               {"y3", Parity::even},
                               {"y4", Parity::even},
                               {"zeta1", Parity::odd},
                               {"zeta2", Parity::odd}}),
                        {{{"y1", "y1"}, "1"},
                         {{"y2", "y2"}, "1"},
                         {{"y3", "y3"}, "-1"},
                         {{"y4", "y4"}, "1"},
                         {{"zeta1", "zeta2"}, "-1"}});
}

inline WarpedSpec warped(ManifoldSpec base, ManifoldSpec fiber, PLocation loc = PLocation::none,
                         std::string p = "", std::string h = "h(t)") {
  WarpedSpec s;
  s.name = base.name + "_x_" + fiber.name;
  s.base = std::move(base);
  s.fiber = std::move(fiber);
  s.h = std::move(h);
  s.p_location = loc;
  s.p = std::move(p);
  return s;
}

}  // namespace fixtures
