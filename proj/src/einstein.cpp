#include "superwarp/einstein.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <future>
#include <random>
#include <sstream>
#include <thread>

namespace superwarp {

std::string to_string(BaseType b) { return b == BaseType::R10 ? "R10" : "R12"; }

std::string to_string(FamilyTag t) {
  switch (t) {
    case FamilyTag::exponential: return "exponential";
    case FamilyTag::linear: return "linear";
    case FamilyTag::trigonometric: return "trigonometric";
    case FamilyTag::constant: return "constant";
    case FamilyTag::none: return "none";
  }
  return "?";
}

BaseType parse_base_type(std::string_view s) {
  if (s == "R10") return BaseType::R10;
  if (s == "R12") return BaseType::R12;
  throw ParseError("unknown base type " + std::string(s) + " (expected R10 or R12)");
}

std::string SolutionFamily::to_string() const {
  std::ostringstream os;
  os << id << " [" << superwarp::to_string(tag) << "] h(t) = " << h;
  if (!second_derivative.empty()) os << " with h''(t) = " << second_derivative;
  os << "; lambda = " << lambda << "; fiber Einstein constant = " << fiber_constant;
  for (const auto& s : side_conditions) os << "; " << s;
  return os.str();
}

// ---------------------------------------------------------------------------
// Manifolds

ManifoldSpec base_manifold(BaseType b) {
  Assumptions a;
  a.require_positive("h");
  if (b == BaseType::R10)
    return build_manifold("R10", Chart({{"t", Parity::even}}), {{{"t", "t"}, "-1"}},
                          Parity::even, a);
  return build_manifold("R12",
                        Chart({{"t", Parity::even}, {"xi", Parity::odd}, {"eta", Parity::odd}}),
                        {{{"t", "t"}, "-1"}, {{"xi", "eta"}, "-1"}}, Parity::even, a);
}

ManifoldSpec flat_fiber(int l, const std::string& tag) {
  int n = l >= 0 ? 0 : (-l + 1) / 2 * 2;
  int q = l + n;
  if (q == 0 && n == 0) {
    q = 2;
    n = 2;
  }
  std::vector<Coordinate> cs;
  std::map<std::pair<std::string, std::string>, std::string> entries;
  for (int i = 1; i <= q; ++i) {
    std::string y = "y" + std::to_string(i) + tag;
    cs.push_back({y, Parity::even});
    entries[{y, y}] = "1";
  }
  for (int i = 1; i <= n; ++i) cs.push_back({"zeta" + std::to_string(i) + tag, Parity::odd});
  for (int i = 1; i < n; i += 2)
    entries[{"zeta" + std::to_string(i) + tag, "zeta" + std::to_string(i + 1) + tag}] = "-1";
  return build_manifold("flat(" + std::to_string(q) + "," + std::to_string(n) + ")",
                        Chart(std::move(cs)), entries);
}

ManifoldSpec einstein_fiber(int l, const RationalFunction& c, const Assumptions& assume,
                            const std::string& tag) {
  if (c.is_zero()) return flat_fiber(l, tag);
  if (l == 1) {
    WarpedSpec s;
    s.base = einstein_fiber(2, c, assume, tag + "a");
    s.fiber = einstein_fiber(-1, c, assume, tag + "b");
    s.h = "1";
    ManifoldSpec m = build_warped(s);
    m.name = "einstein(1)";
    return m;
  }
  RationalFunction k2 = -c / RationalFunction(l - 1);
  PointSampler sampler(assume, 7);
  EvalEnv env = sampler.env();
  double v = 0;
  for (int i = 0; i < 200 && v == 0; ++i) {
    sampler.next();
    if (sampler.admissible()) v = k2.evaluate(env);
  }
  if (!(v != 0)) throw DomainError("cannot determine the sign of the fiber constant");
  int s = v > 0 ? 1 : -1;
  if (s < 0) k2 = -k2;
  std::string y0 = "y0" + tag;
  WarpedSpec w;
  w.base = build_manifold("line", Chart({{y0, Parity::even}}), {{{y0, y0}, "1"}});
  w.fiber = flat_fiber(l - 1, tag);
  w.h = "exp(sqrt(" + k2.to_string() + ")*" + y0 + ")";
  ManifoldSpec m = build_warped(w);
  if (s < 0)
    for (auto& row : m.metric)
      for (auto& e : row) e = -e;
  m.name = "einstein(" + std::to_string(l) + ")";
  m.assumptions.merge(assume);
  return m;
}

SuperMatrix einstein_residual(const Curvature& curvature, const SuperScalar& lambda) {
  const ManifoldSpec& m = curvature.connection().manifold();
  int n = m.dim();
  SuperMatrix out(n, std::vector<SuperScalar>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out[a][b] = curvature.ricci_frame(a, b) - lambda * m.metric[a][b];
  return out;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

std::string q(const Rational& r) {
  std::string s = r.get_str();
  return r < 0 || s.find('/') != std::string::npos ? "(" + s + ")" : s;
}

SolutionFamily family(std::string id, FamilyTag tag, std::string h, std::string lambda,
                      std::string fiber_constant) {
  SolutionFamily f;
  f.id = std::move(id);
  f.tag = tag;
  f.h = std::move(h);
  f.lambda = std::move(lambda);
  f.fiber_constant = std::move(fiber_constant);
  for (const char* c : {"c1", "c2", "c"})
    if (f.h.find(c) != std::string::npos) f.constants.push_back(c);
  // "c" also matches inside "c1"; keep it only for the bare constant.
  if (f.h != "c") std::erase(f.constants, "c");
  return f;
}

void restrict_symbol(SolutionFamily& f, const std::string& name, double lo, double hi) {
  f.assumptions.intervals[name] = Interval{lo, hi};
}

std::vector<SolutionFamily> classify_r10_ssnm(const EinsteinProblem& p) {
  std::vector<SolutionFamily> out;
  const int l = p.l;
  const auto& l0 = p.lambda0;
  std::string lam = l0 ? q(Rational(-*l0)) : "-lambda0";
  // Differences with lambda0 folded when it is known.
  auto shifted = [&](int c, int sign) {
    if (l0) return q(Rational(c + sign * *l0));
    return sign < 0 ? std::to_string(c) + " - lambda0" : "lambda0 - " + std::to_string(-c);
  };
  // k*t with k = sqrt(c + sign*lambda0), folding exact roots.
  auto rate = [&](int c, int sign) -> std::string {
    if (l0) {
      Rational v = c + sign * *l0;
      if (v > 0 && mpz_perfect_square_p(v.get_num_mpz_t()) &&
          mpz_perfect_square_p(v.get_den_mpz_t())) {
        mpz_class n = sqrt(v.get_num()), d = sqrt(v.get_den());
        Rational r(n, d);
        return r == 1 ? "t" : q(r) + "*t";
      }
    }
    return "sqrt(" + shifted(c, sign) + ")*t";
  };
  if (l == 1) {
    std::string c0 = "h(t)*h'(t) - h(t)^2";
    if (!l0 || *l0 < 1) {
      std::string a = rate(1, -1);
      auto f = family("4.4(2-1)", FamilyTag::exponential,
                      "c1*exp(" + a + ") + c2*exp(-" + a + ")", lam, c0);
      f.side_conditions = {"c0 = h h' - h^2"};
      if (!l0) {
        f.side_conditions.push_back("lambda0 < 1");
        restrict_symbol(f, "lambda0", -2.0, 0.9);
      }
      out.push_back(f);
    }
    if (!l0 || *l0 == 1) {
      auto f = family("4.4(2-2)", FamilyTag::linear, "c1 + c2*t", "-1", c0);
      f.side_conditions = {"c0 = h h' - h^2", "lambda0 = 1"};
      out.push_back(f);
    }
    if (!l0 || *l0 > 1) {
      std::string b = rate(-1, 1);
      auto f = family("4.4(2-3)", FamilyTag::trigonometric,
                      "c1*cos(" + b + ") + c2*sin(" + b + ")", lam, c0);
      f.side_conditions = {"c0 = h h' - h^2"};
      if (!l0) {
        f.side_conditions.push_back("lambda0 > 1");
        restrict_symbol(f, "lambda0", 1.1, 3.0);
      }
      out.push_back(f);
    }
    return out;
  }
  if (l == 0) {
    if (l0 && *l0 != 0) return out;
    std::string c0 = p.c0 ? q(*p.c0) : "c0";
    auto f = family("4.5", FamilyTag::none, "h(t)", "0", c0);
    f.second_derivative = "(h'(t)^2 - " + c0 + ")/h(t)";
    f.side_conditions = {"lambda0 = 0", "c0 + h h'' - h'^2 = 0"};
    out.push_back(f);
    return out;
  }
  if ((!l0 || *l0 == 0) && (!p.c0 || *p.c0 == 0)) {
    auto f = family("4.6(1)", FamilyTag::exponential, "c1*exp(t)", "0", "0");
    f.side_conditions = {"lambda0 = lambdaN = 0"};
    out.push_back(f);
  }
  if (!l0 || *l0 == l) {
    // lambdaN = -c0 and h = sqrt(lambdaN / (q - n)).
    std::string lamN;
    bool admissible = true;
    if (p.c0) {
      Rational v = -*p.c0 / l;
      admissible = v > 0;
      lamN = q(-*p.c0);
    } else {
      lamN = "lambdaN";
    }
    if (admissible) {
      auto f = family("4.6(2)", FamilyTag::constant, "sqrt(" + lamN + "/" + q(l) + ")",
                      "-" + q(l), "-" + lamN);
      f.side_conditions = {"lambda0 = q - n", "h = c1 = sqrt(lambdaN/(q-n))"};
      if (!p.c0) {
        if (l > 0)
          restrict_symbol(f, "lambdaN", 0.5, 2.0);
        else
          restrict_symbol(f, "lambdaN", -2.0, -0.5);
      }
      out.push_back(f);
    }
  }
  return out;
}

std::vector<SolutionFamily> classify_r12_lc(const EinsteinProblem& p) {
  std::vector<SolutionFamily> out;
  if (p.lambda0 && *p.lambda0 != 0) return out;
  std::string c0 = p.c0 ? q(*p.c0) : "c0";
  const int l = p.l;
  if (l == 0) {
    auto f = family("4.7(1)", FamilyTag::none, "h(t)", "0", "-" + c0);
    f.second_derivative = "(" + c0 + " + h'(t)^2)/h(t)";
    f.side_conditions = {"lambda = 0", "q = n", "h h'' - h'^2 = c0"};
    out.push_back(f);
  } else if (l == 1) {
    auto f = family("4.7(2)", FamilyTag::linear, "c1*t + c2", "0", "0");
    f.side_conditions = {"lambda = 0", "q - n - 1 = 0"};
    out.push_back(f);
  } else {
    if (p.c0 && Rational(*p.c0 / (l - 1)) < 0) return out;
    auto f = family("4.7(3)", FamilyTag::linear,
                    "sqrt(" + c0 + "/" + q(l - 1) + ")*t + c2", "0", "-" + c0);
    f.side_conditions = {"lambda = 0", "c0/(q-n-1) >= 0", "the opposite sign of the slope also solves"};
    if (!p.c0) {
      if (l > 1)
        restrict_symbol(f, "c0", 0.5, 2.0);
      else
        restrict_symbol(f, "c0", -2.0, -0.5);
    }
    out.push_back(f);
  }
  return out;
}

std::vector<SolutionFamily> classify_r12_ssnm(const EinsteinProblem& p) {
  if (p.l == 0) throw DegenerateError("q - n = 0: k = 1 + 2/(q - n) is undefined");
  std::vector<SolutionFamily> out;
  if (p.l != -2) return out;
  if (p.lambda0 && *p.lambda0 != 0) return out;
  if (p.c0 && *p.c0 != 0) return out;
  auto f = family("4.8", FamilyTag::constant, "c", "0", "0");
  f.side_conditions = {"lambda = 0", "c0 = 0", "q - n + 2 = 0"};
  out.push_back(f);
  return out;
}

}  // namespace

std::vector<SolutionFamily> classify(const EinsteinProblem& p) {
  if (p.connection == ConnectionKind::custom)
    throw UnsupportedError("classification needs levi_civita or ssnm");
  if (p.base == BaseType::R10) {
    if (p.connection == ConnectionKind::levi_civita)
      throw UnsupportedError("R10 with the Levi-Civita connection is not classified");
    return classify_r10_ssnm(p);
  }
  return p.connection == ConnectionKind::levi_civita ? classify_r12_lc(p) : classify_r12_ssnm(p);
}

std::vector<std::pair<std::string, std::string>> governing_equations(const EinsteinProblem& p) {
  std::string l = std::to_string(p.l);
  std::string lm1 = "(" + std::to_string(p.l - 1) + ")";
  std::string lm2 = "(" + std::to_string(p.l - 2) + ")";
  if (p.base == BaseType::R10) {
    if (p.connection != ConnectionKind::ssnm)
      throw UnsupportedError("R10 with the Levi-Civita connection is not classified");
    return {{"base", "(" + l + ")*(h''(t)/h(t) - 1) - lambda"},
            {"fiber", "lambda*h(t)^2 - h''(t)*h(t) - " + lm1 + "*h'(t)^2 + (" + l +
                          ")*h(t)*h'(t) - C"}};
  }
  if (p.connection == ConnectionKind::levi_civita)
    return {{"base", "(" + l + ")*h''(t)/h(t) - lambda"},
            {"base-odd", "lambda"},
            {"fiber", "lambda*h(t)^2 - h(t)*h''(t) - " + lm1 + "*h'(t)^2 - C"}};
  return {{"base", "2 - (" + l + ")*(h''(t)/h(t) - 1) + lambda"},
          {"base-odd", "lambda"},
          {"fiber", "lambda*h(t)^2 - h''(t)*h(t) - " + lm1 + "*h'(t)^2 + " + lm2 +
                        "*h(t)*h'(t) - C"}};
}

// ---------------------------------------------------------------------------
// Residual checks

namespace {

struct Substitution {
  bool implicit;
  RationalFunction h;
  RationalFunction h2;  // rule for h''(t) when implicit

  RationalFunction operator()(const RationalFunction& r) const {
    if (!implicit) return r.substitute_function("h", h);
    return r.substitute([&](AtomId a) -> std::optional<RationalFunction> {
      if (kind_of(a) != AtomKind::function) return std::nullopt;
      const AtomInfo& info = atom_info(a);
      if (info.name == "h" && info.order == 2) return h2;
      return std::nullopt;
    });
  }
};

std::string residual_text(const RationalFunction& r, const Assumptions& a) {
  if (r.is_zero() || is_zero(r, a)) return "0";
  return r.to_string();
}

}  // namespace

VerificationReport residual_check(const EinsteinProblem& p, const SolutionFamily& f) {
  VerificationReport rep;
  ManifoldSpec base = base_manifold(p.base);
  Assumptions assume = base.assumptions;
  assume.merge(f.assumptions);
  if (p.lambda0) assume.intervals.erase("lambda0");

  Substitution sub;
  sub.implicit = f.h == "h(t)";
  if (sub.implicit) {
    sub.h = parse_rational("h(t)");
    sub.h2 = parse_rational(f.second_derivative);
  } else {
    sub.h = parse_rational(f.h);
  }
  RationalFunction lambda = sub(parse_rational(f.lambda));
  RationalFunction c = sub(parse_rational(f.fiber_constant));
  std::string tuple = "h(t) = " + f.h;

  for (const auto& [label, text] : governing_equations(p)) {
    RationalFunction e = parse_rational(text)
                             .substitute_symbol("lambda", lambda)
                             .substitute_symbol("C", c);
    std::string r = residual_text(sub(e), assume);
    rep.add({f.id, label + " equation", tuple, r, r == "0"});
  }

  std::string dc = residual_text(c.derivative("t"), assume);
  rep.add({f.id, "fiber constant independent of t", tuple, dc, dc == "0"});
  if (dc != "0") {
    rep.add({f.id, "full Einstein residual", tuple,
             "no Einstein test fiber: fiber constant " + c.to_string() + " depends on t",
             false});
    return rep;
  }

  try {
    WarpedSpec ws;
    ws.base = base;
    ws.base.assumptions.merge(f.assumptions);
    ws.fiber = einstein_fiber(p.l, c, assume);
    ws.name = to_string(p.base) + "_x_" + ws.fiber.name;
    ws.h = f.h;
    if (p.connection == ConnectionKind::ssnm) {
      ws.p_location = PLocation::base;
      ws.p = "d_t";
    }
    WarpedProduct w(ws);
    const Curvature& k = p.connection == ConnectionKind::ssnm ? w.ssnm() : w.lc();
    SuperMatrix res = einstein_residual(k, SuperScalar(lambda));
    const Chart& ch = w.chart();
    Assumptions all = w.product().assumptions;
    all.merge(assume);
    for (int a = 0; a < ch.dim(); ++a)
      for (int b = 0; b < ch.dim(); ++b) {
        SuperScalar e = res[a][b].map([&](const RationalFunction& v) { return sub(v); });
        std::string r = e.is_zero() || is_zero(e, all) ? "0" : e.to_string(ch);
        rep.add({f.id, "Ric - lambda g on " + w.product().name,
                 "(d_" + ch.coord(a).name + ",d_" + ch.coord(b).name + ")", r, r == "0"});
      }
  } catch (const DomainError& e) {
    rep.add({f.id, "full Einstein residual", tuple, std::string("not evaluated: ") + e.what(),
             false});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Numeric pieces

EliminationResult exponential_elimination(double k, bool literal_row) {
  Eigen::Matrix<double, 5, 5> a;
  double k2 = k * k, k3 = k2 * k, k4 = k3 * k;
  a << 1, 1, 1, 1, -1,
      2 * k, -2 * k, k, -k, 0,
      4 * k2, 4 * k2, k2, k2, 0,
      8 * k3, -8 * k3, k3, -k3, 0,
      16 * k4, (literal_row ? 416 : 16) * k4, k4, k4, 0;
  Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  EliminationResult r;
  auto sv = svd.singularValues();
  double tol = 1e-12 * sv(0);
  r.rank = static_cast<int>((sv.array() > tol).count());
  r.min_singular = sv(4) / sv(0);
  Eigen::Matrix<double, 5, 1> b = svd.solve(Eigen::Matrix<double, 5, 1>::Zero());
  r.solution_norm = b.norm();
  r.residual = (a * b).norm();
  return r;
}

std::vector<SweepSample> random_nonsolution_sweep(int l, const Rational& lambda0, int samples,
                                                  std::uint64_t seed) {
  std::vector<SweepSample> out(samples);
  auto run = [&](int i) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> lead(1, 3), coef(0, 8);
    Rational a[4] = {Rational(lead(rng)), Rational(coef(rng), 4), Rational(coef(rng), 4),
                     Rational(coef(rng), 4)};
    for (auto& x : a) x.canonicalize();
    RationalFunction t = RationalFunction::symbol("t");
    RationalFunction h;
    auto build = [&] {
      h = RationalFunction(a[0]) + RationalFunction(a[1]) * t + RationalFunction(a[2]) * t * t +
          RationalFunction(a[3]) * t * t * t;
    };
    build();
    auto base_eq = [&] {
      RationalFunction h2 = h.derivative("t").derivative("t");
      return RationalFunction(l) * (h2 / h - RationalFunction(1)) + RationalFunction(lambda0);
    };
    if (base_eq().is_zero()) {
      a[3] += 1;
      build();
    }
    SweepSample s;
    s.h = h.to_string();
    s.base_equation_violated = !base_eq().is_zero();
    WarpedSpec ws;
    ws.base = base_manifold(BaseType::R10);
    ws.fiber = flat_fiber(l);
    ws.h = s.h;
    ws.p_location = PLocation::base;
    ws.p = "d_t";
    WarpedProduct w(ws);
    SuperMatrix res = einstein_residual(w.ssnm(), SuperScalar(RationalFunction(-lambda0)));
    for (const auto& row : res)
      for (const auto& e : row)
        if (!e.is_zero() && !is_zero(e, w.product().assumptions)) s.residual_nonzero = true;
    out[i] = s;
  };
  unsigned threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (unsigned j = 0; j < threads; ++j)
    jobs.push_back(std::async(std::launch::async, [&, j] {
      for (int i = static_cast<int>(j); i < samples; i += static_cast<int>(threads)) run(i);
    }));
  for (auto& job : jobs) job.get();
  return out;
}

}  // namespace superwarp
