#include "superwarp/warped.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace superwarp {

std::string to_string(PLocation p) {
  switch (p) {
    case PLocation::none: return "none";
    case PLocation::base: return "base";
    case PLocation::fiber: return "fiber";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

Chart concat(const Chart& a, const Chart& b) {
  std::vector<Coordinate> cs = a.coords();
  cs.insert(cs.end(), b.coords().begin(), b.coords().end());
  return Chart(std::move(cs));
}

SuperScalar shift_masks(const SuperScalar& f, int by) {
  SuperScalar out;
  for (const auto& [m, c] : f.terms()) out += SuperScalar::term(m << by, c);
  return out;
}

void check_positive(const SuperScalar& h, const Assumptions& assume) {
  if (!h.is_body()) throw DomainError("warping function must be a function of the even base coordinates");
  RationalFunction b = h.body();
  if (b.is_zero()) throw DomainError("warping function is zero");
  PointSampler sampler(assume, 20240611);
  EvalEnv env = sampler.env();
  for (int k = 0; k < 64; ++k) {
    sampler.next();
    if (!sampler.admissible()) continue;
    double v = b.evaluate(env);
    if (std::isfinite(v) && v <= 0)
      throw DomainError("warping function " + b.to_string() +
                        " is not strictly positive under the assumptions");
  }
}

}  // namespace

ManifoldSpec build_warped(const WarpedSpec& spec) {
  const ManifoldSpec& b = spec.base;
  const ManifoldSpec& f = spec.fiber;
  if (b.metric_parity != f.metric_parity)
    throw DomainError("base and fiber metrics have different parity");
  ManifoldSpec m;
  m.name = spec.name.empty() ? b.name + "_x_" + f.name : spec.name;
  m.chart = concat(b.chart, f.chart);
  m.metric_parity = b.metric_parity;
  m.assumptions = b.assumptions;
  m.assumptions.merge(f.assumptions);
  SuperScalar h = parse_super(spec.h, b.chart);
  check_positive(h, m.assumptions);
  m.assumptions.positive.push_back(h.body());
  SuperScalar h2 = h * h;
  int nb = b.dim(), nf = f.dim(), shift = b.chart.odd_count();
  m.metric.assign(nb + nf, std::vector<SuperScalar>(nb + nf));
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) m.metric[i][j] = b.metric[i][j];
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j)
      if (!f.metric[i][j].is_zero())
        m.metric[nb + i][nb + j] = h2 * shift_masks(f.metric[i][j], shift);
  return m;
}

WarpedProduct::WarpedProduct(WarpedSpec spec) : spec_(std::move(spec)) {
  product_ = build_warped(spec_);
  h_base_ = parse_super(spec_.h, base().chart);
  h_ = lift(Block::base, h_base_);
  switch (spec_.p_location) {
    case PLocation::none:
      p_factor_ = VectorField(0);
      p_ = VectorField(product_.dim());
      break;
    case PLocation::base:
      p_factor_ = parse_field(spec_.p, base().chart);
      p_ = lift(Block::base, p_factor_);
      break;
    case PLocation::fiber:
      p_factor_ = parse_field(spec_.p, fiber().chart);
      p_ = lift(Block::fiber, p_factor_);
      break;
  }
  if (spec_.p_location != PLocation::none) {
    auto pp = p_.parity(product_.chart);
    if (!pp) throw DomainError("P is inhomogeneous");
    if (*pp + product_.metric_parity != Parity::even)
      throw DomainError("|g| + |P| must be even");
    product_.P = p_;
  }
}

SuperScalar WarpedProduct::lift(Block b, const SuperScalar& f) const {
  return b == Block::base ? f : shift_masks(f, base().chart.odd_count());
}

VectorField WarpedProduct::lift(Block b, const VectorField& v) const {
  VectorField out(product_.dim());
  int off = b == Block::base ? 0 : base_dim();
  for (int i = 0; i < v.dim(); ++i) out[off + i] = lift(b, v[i]);
  return out;
}

VectorField WarpedProduct::restrict(Block b, const VectorField& v) const {
  int off = b == Block::base ? 0 : base_dim();
  int n = block_dim(b);
  int shift = base().chart.odd_count();
  SuperScalar::Mask base_bits = (SuperScalar::Mask{1} << shift) - 1;
  VectorField out(n);
  for (int i = 0; i < product_.dim(); ++i) {
    bool inside = i >= off && i < off + n;
    if (!inside) {
      if (!v[i].is_zero())
        throw DomainError("field has a component outside the " +
                          std::string(b == Block::base ? "base" : "fiber") + " block");
      continue;
    }
    SuperScalar c;
    for (const auto& [m, r] : v[i].terms()) {
      if (b == Block::base ? (m & ~base_bits) != 0 : (m & base_bits) != 0)
        throw DomainError("coefficient depends on odd coordinates of the other factor");
      c += SuperScalar::term(b == Block::base ? m : m >> shift, r);
    }
    out[i - off] = c;
  }
  return out;
}

namespace {

template <class T, class F>
const T& lazy(std::mutex& mu, std::unique_ptr<T>& slot, F&& make) {
  std::lock_guard lock(mu);
  if (!slot) slot = make();
  return *slot;
}

}  // namespace

const Connection& WarpedProduct::base_lc() const {
  return lazy(mu_, base_lc_, [&] { return std::make_unique<Connection>(levi_civita(base())); });
}
const Connection& WarpedProduct::base_ssnm() const {
  if (spec_.p_location != PLocation::base)
    throw HypothesisError("base ssnm connection needs P in the base");
  return lazy(mu_, base_ssnm_, [&] { return std::make_unique<Connection>(ssnm_connection(base(), p_factor_)); });
}
const Connection& WarpedProduct::fiber_lc() const {
  return lazy(mu_, fiber_lc_, [&] { return std::make_unique<Connection>(levi_civita(fiber())); });
}
const Curvature& WarpedProduct::lc() const {
  return lazy(mu_, lc_, [&] { return std::make_unique<Curvature>(levi_civita(product_)); });
}
const Curvature& WarpedProduct::ssnm() const {
  return lazy(mu_, ssnm_, [&] { return std::make_unique<Curvature>(ssnm_connection(product_, p_)); });
}
const Curvature& WarpedProduct::base_lc_curv() const {
  const Connection& c = base_lc();
  return lazy(mu_, base_lc_curv_, [&] { return std::make_unique<Curvature>(c); });
}
const Curvature& WarpedProduct::base_ssnm_curv() const {
  const Connection& c = base_ssnm();
  return lazy(mu_, base_ssnm_curv_, [&] { return std::make_unique<Curvature>(c); });
}
const Curvature& WarpedProduct::fiber_lc_curv() const {
  const Connection& c = fiber_lc();
  return lazy(mu_, fiber_lc_curv_, [&] { return std::make_unique<Curvature>(c); });
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

constexpr Block B = Block::base;
constexpr Block F = Block::fiber;

VectorField times(int s, const VectorField& v) { return s == 1 ? v : -v; }
int sg(Parity a, Parity b) { return swap_sign(a, b); }

// Factor-intrinsic building blocks, all returned on the product chart.
struct Terms {
  const WarpedProduct& w;
  const Chart& c;
  Parity g;
  Parity P;

  explicit Terms(const WarpedProduct& wp)
      : w(wp),
        c(wp.chart()),
        g(wp.product().metric_parity),
        P(wp.p().parity(wp.chart()).value_or(Parity::even)) {}

  Parity par(const VectorField& x) const { return homogeneous_parity(x, c, "closed_form"); }
  VectorField rb(const VectorField& x) const { return w.restrict(B, x); }
  VectorField rf(const VectorField& x) const { return w.restrict(F, x); }

  SuperScalar gmu(const VectorField& x, const VectorField& y) const {
    return metric_eval(w.product(), x, y);
  }
  SuperScalar g1(const VectorField& x, const VectorField& y) const {
    return w.lift(B, metric_eval(w.base(), rb(x), rb(y)));
  }
  SuperScalar g2(const VectorField& x, const VectorField& y) const {
    return w.lift(F, metric_eval(w.fiber(), rf(x), rf(y)));
  }
  SuperScalar pi(const VectorField& z) const { return gmu(z, w.p()); }
  const SuperScalar& h() const { return w.h(); }
  SuperScalar hinv() const { return inverse(w.h()); }
  SuperScalar hinv2() const { return hinv() * hinv(); }
  SuperScalar Xh(const VectorField& x) const { return apply(x, w.h(), c); }
  SuperScalar Ph() const { return apply(w.p(), w.h(), c); }
  VectorField gradh() const { return w.lift(B, gradient(w.base(), w.h_base())); }
  SuperScalar gradh_h() const { return apply(gradh(), w.h(), c); }
  SuperScalar lap_h() const { return w.lift(B, laplacian(w.base_lc(), w.h_base())); }
  SuperScalar H(const VectorField& x, const VectorField& y) const {
    return w.lift(B, hessian(w.base_lc(), w.h_base(), rb(x), rb(y)));
  }
  VectorField nab1(const VectorField& x, const VectorField& y) const {
    return w.lift(B, covariant_derivative(w.base_lc(), rb(x), rb(y)));
  }
  VectorField nab1_hat(const VectorField& x, const VectorField& y) const {
    return w.lift(B, covariant_derivative(w.base_ssnm(), rb(x), rb(y)));
  }
  VectorField nab2(const VectorField& x, const VectorField& y) const {
    return w.lift(F, covariant_derivative(w.fiber_lc(), rf(x), rf(y)));
  }
  VectorField R1(const VectorField& x, const VectorField& y, const VectorField& z) const {
    return w.lift(B, riemann(w.base_lc(), rb(x), rb(y), rb(z)));
  }
  VectorField R1hat(const VectorField& x, const VectorField& y, const VectorField& z) const {
    return w.lift(B, riemann(w.base_ssnm(), rb(x), rb(y), rb(z)));
  }
  VectorField R2(const VectorField& x, const VectorField& y, const VectorField& z) const {
    return w.lift(F, riemann(w.fiber_lc(), rf(x), rf(y), rf(z)));
  }
  SuperScalar Ric1(const VectorField& x, const VectorField& y) const {
    return w.lift(B, ricci(w.base_lc(), rb(x), rb(y)));
  }
  SuperScalar Ric1hat(const VectorField& x, const VectorField& y) const {
    return w.lift(B, ricci(w.base_ssnm(), rb(x), rb(y)));
  }
  SuperScalar Ric2(const VectorField& x, const VectorField& y) const {
    return w.lift(F, ricci(w.fiber_lc(), rf(x), rf(y)));
  }
  VectorField dot(const VectorField& x, const SuperScalar& f) const {
    return scalar_from_right(x, f, c);
  }
  SuperScalar q_minus_n() const { return SuperScalar(w.fiber().even_dim() - w.fiber().odd_dim()); }
  SuperScalar p_minus_m() const { return SuperScalar(w.base().even_dim() - w.base().odd_dim()); }
};

enum class Lhs { nabla_lc, nabla_hat, riemann_lc, riemann_hat, ricci_lc, ricci_hat };

using Args = std::vector<VectorField>;
using Rhs = std::function<FieldOrScalar(const Terms&, const Args&)>;

struct Item {
  std::string id;
  std::string anchor;
  Lhs lhs;
  std::vector<Block> blocks;
  bool needs_even;  // the |g| = |P| = 0 specialisation
  Rhs rhs;
};

FieldOrScalar zero_field(const Terms& t, const Args&) { return VectorField(t.c.dim()); }
FieldOrScalar zero_scalar(const Terms&, const Args&) { return SuperScalar(); }

const std::vector<Item>& items() {
  static const std::vector<Item> table = [] {
    std::vector<Item> v;
    // Levi-Civita connection of the warped metric.
    v.push_back({"3.1(1)", "nabla_X Y = nabla1_X Y", Lhs::nabla_lc, {B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar { return t.nab1(a[0], a[1]); }});
    v.push_back({"3.1(2)", "nabla_X U = X(h)/h U", Lhs::nabla_lc, {B, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return (t.Xh(a[0]) * t.hinv()) * a[1];
                 }});
    v.push_back({"3.1(3)", "nabla_U X = (-1)^{|U||X|} X(h)/h U", Lhs::nabla_lc, {F, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto& u = a[0];
                   const auto& x = a[1];
                   return times(sg(t.par(u), t.par(x)), (t.Xh(x) * t.hinv()) * u);
                 }});
    v.push_back({"3.1(4)", "nabla_U W = -h g2(U,W) grad h + nabla2_U W", Lhs::nabla_lc, {F, F},
                 false, [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.nab2(a[0], a[1]) - (t.h() * t.g2(a[0], a[1])) * t.gradh();
                 }});

    // ssnm connection, P in the base.
    v.push_back({"3.3(1)", "nabla^_X Y = nabla^1_X Y", Lhs::nabla_hat, {B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.nab1_hat(a[0], a[1]);
                 }});
    v.push_back({"3.3(2)", "nabla^_X U = X(h)/h U", Lhs::nabla_hat, {B, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return (t.Xh(a[0]) * t.hinv()) * a[1];
                 }});
    v.push_back({"3.3(3)", "nabla^_U X = (-1)^{|U||X|} [X(h)/h + pi(X)] U", Lhs::nabla_hat,
                 {F, B}, false, [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto& u = a[0];
                   const auto& x = a[1];
                   return times(sg(t.par(u), t.par(x)), (t.Xh(x) * t.hinv() + t.pi(x)) * u);
                 }});
    v.push_back({"3.3(4)", "nabla^_U W = -h g2(U,W) grad h + nabla2_U W", Lhs::nabla_hat,
                 {F, F}, false, [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.nab2(a[0], a[1]) - (t.h() * t.g2(a[0], a[1])) * t.gradh();
                 }});

    // ssnm connection, P in the fiber.
    v.push_back({"3.4(1)", "nabla^_X Y = nabla1_X Y - g1(X,Y) P", Lhs::nabla_hat, {B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.nab1(a[0], a[1]) - t.g1(a[0], a[1]) * t.w.p();
                 }});
    v.push_back({"3.4(2)", "nabla^_X U = X(h)/h U + X . g(U,P)", Lhs::nabla_hat, {B, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return (t.Xh(a[0]) * t.hinv()) * a[1] + t.dot(a[0], t.gmu(a[1], t.w.p()));
                 }});
    v.push_back({"3.4(3)", "nabla^_U X = (-1)^{|U||X|} X(h)/h U", Lhs::nabla_hat, {F, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto& u = a[0];
                   const auto& x = a[1];
                   return times(sg(t.par(u), t.par(x)), (t.Xh(x) * t.hinv()) * u);
                 }});
    v.push_back({"3.4(4)", "nabla^_U W = -h g2(U,W) grad h + nabla2_U W + U . g(W,P)",
                 Lhs::nabla_hat, {F, F}, false, [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.nab2(a[0], a[1]) - (t.h() * t.g2(a[0], a[1])) * t.gradh() +
                          t.dot(a[0], t.gmu(a[1], t.w.p()));
                 }});

    // Levi-Civita curvature.
    v.push_back({"3.2(1)", "R(X,Y)Z = R1(X,Y)Z", Lhs::riemann_lc, {B, B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.R1(a[0], a[1], a[2]);
                 }});
    v.push_back({"3.2(2)", "R(V,X)Y = -(-1)^{|V|(|X|+|Y|)} H(X,Y)/h V", Lhs::riemann_lc,
                 {F, B, B}, false, [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &vv = a[0], &x = a[1], &y = a[2];
                   int s = sg(t.par(vv), t.par(x) + t.par(y));
                   return times(-s, (t.H(x, y) * t.hinv()) * vv);
                 }});
    v.push_back({"3.2(3)", "R(X,Y)V = 0", Lhs::riemann_lc, {B, B, F}, false, zero_field});
    v.push_back({"3.2(4)", "R(V,W)X = 0", Lhs::riemann_lc, {F, F, B}, false, zero_field});
    v.push_back({"3.2(5)", "R(X,V)W = -(-1)^{|X|(|V|+|W|+|g|)} g(V,W)/h nabla1_X grad h",
                 Lhs::riemann_lc, {B, F, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &x = a[0], &vv = a[1], &ww = a[2];
                   int s = sg(t.par(x), t.par(vv) + t.par(ww) + t.g);
                   return times(-s, (t.gmu(vv, ww) * t.hinv()) * t.nab1(x, t.gradh()));
                 }});
    v.push_back({"3.2(6)", "R(V,W)U = R2(V,W)U - ... g2(W,U)(grad h)(h) V + ... g2(V,U)(grad h)(h) W",
                 Lhs::riemann_lc, {F, F, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &vv = a[0], &ww = a[1], &u = a[2];
                   Parity pv = t.par(vv), pw = t.par(ww), pu = t.par(u);
                   SuperScalar gh = t.gradh_h();
                   return t.R2(vv, ww, u) - times(sg(pv, pw + pu), (t.g2(ww, u) * gh) * vv) +
                          times(sg(pw, pu), (t.g2(vv, u) * gh) * ww);
                 }});

    // ssnm curvature, P in the base.
    v.push_back({"3.5(1)", "R^(X,Y)Z = R^1(X,Y)Z", Lhs::riemann_hat, {B, B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.R1hat(a[0], a[1], a[2]);
                 }});
    v.push_back({"3.5(2)",
                 "R^(V,X)Y = -(-1)^{|V|(|X|+|Y|)} [H(X,Y)/h + (-1)^{|X||Y|} g1(Y, nabla1_X P) - pi(X)pi(Y)] V",
                 Lhs::riemann_hat, {F, B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &vv = a[0], &x = a[1], &y = a[2];
                   Parity px = t.par(x), py = t.par(y);
                   SuperScalar br = t.H(x, y) * t.hinv() +
                                    t.g1(y, t.nab1(x, t.w.p())).scaled(sg(px, py)) -
                                    t.pi(x) * t.pi(y);
                   return times(-sg(t.par(vv), px + py), br * vv);
                 }});
    v.push_back({"3.5(3)", "R^(X,Y)V = 0", Lhs::riemann_hat, {B, B, F}, false, zero_field});
    v.push_back({"3.5(4)", "R^(V,W)X = 0", Lhs::riemann_hat, {F, F, B}, false, zero_field});
    v.push_back({"3.5(5)",
                 "R^(X,V)W = -(-1)^{|X|(|V|+|W|+|g|)} g(V,W) [nabla1_X grad h / h + (-1)^{(|X|+|P|)|g|} P(h)/h X]",
                 Lhs::riemann_hat, {B, F, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &x = a[0], &vv = a[1], &ww = a[2];
                   Parity px = t.par(x);
                   VectorField br = t.hinv() * t.nab1(x, t.gradh()) +
                                    times(sg(px + t.P, t.g), (t.Ph() * t.hinv()) * x);
                   return times(-sg(px, t.par(vv) + t.par(ww) + t.g), t.gmu(vv, ww) * br);
                 }});
    v.push_back({"3.5(5s)", "R^(X,V)W = -(-1)^{|X|(|V|+|W|)} g(V,W) [nabla1_X grad h / h + P(h)/h X]",
                 Lhs::riemann_hat, {B, F, F}, true,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &x = a[0], &vv = a[1], &ww = a[2];
                   VectorField br = t.hinv() * t.nab1(x, t.gradh()) + (t.Ph() * t.hinv()) * x;
                   return times(-sg(t.par(x), t.par(vv) + t.par(ww)), t.gmu(vv, ww) * br);
                 }});
    v.push_back({"3.5(6)",
                 "R^(U,V)W = R2(U,V)W + [(-1)^{|g|(|W|+|g|)} (grad h)(h)/h^2 + (-1)^{|P|(|W|+|g|)} P(h)/h] [...]",
                 Lhs::riemann_hat, {F, F, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &u = a[0], &vv = a[1], &ww = a[2];
                   Parity pu = t.par(u), pv = t.par(vv), pw = t.par(ww);
                   SuperScalar coeff = (t.gradh_h() * t.hinv2()).scaled(sg(t.g, pw + t.g)) +
                                       (t.Ph() * t.hinv()).scaled(sg(t.P, pw + t.g));
                   VectorField br = times(sg(pv, pw) * sg(t.P, pu), t.gmu(u, ww) * vv) -
                                    times(sg(pu, pv + pw) * sg(t.P, pv), t.gmu(vv, ww) * u);
                   return t.R2(u, vv, ww) + coeff * br;
                 }});
    v.push_back({"3.5(6s)",
                 "R^(U,V)W = R2(U,V)W + [(grad h)(h)/h^2 + P(h)/h] [(-1)^{|V||W|} g(U,W)V - (-1)^{|U|(|V|+|W|)} g(V,W)U]",
                 Lhs::riemann_hat, {F, F, F}, true,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &u = a[0], &vv = a[1], &ww = a[2];
                   Parity pu = t.par(u), pv = t.par(vv), pw = t.par(ww);
                   SuperScalar coeff = t.gradh_h() * t.hinv2() + t.Ph() * t.hinv();
                   VectorField br = times(sg(pv, pw), t.gmu(u, ww) * vv) -
                                    times(sg(pu, pv + pw), t.gmu(vv, ww) * u);
                   return t.R2(u, vv, ww) + coeff * br;
                 }});

    // ssnm curvature, P in the fiber.
    v.push_back({"3.6(1)", "R^(X,Y)Z = R1(X,Y)Z", Lhs::riemann_hat, {B, B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.R1(a[0], a[1], a[2]);
                 }});
    v.push_back({"3.6(2)",
                 "R^(V,X)Y = -(-1)^{|V|(|X|+|Y|)} H(X,Y)/h V - (-1)^{|X||Y|} h g2(V,P) g1(Y,grad h) X "
                 "- (-1)^{|g(X,Y)||V|} g1(X,Y) [nabla2_V P - h g2(V,P) grad h]",
                 Lhs::riemann_hat, {F, B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &vv = a[0], &x = a[1], &y = a[2];
                   Parity pv = t.par(vv), px = t.par(x), py = t.par(y);
                   const VectorField& p = t.w.p();
                   SuperScalar hg2 = t.h() * t.g2(vv, p);
                   VectorField out = times(-sg(pv, px + py), (t.H(x, y) * t.hinv()) * vv);
                   out -= times(sg(px, py), (hg2 * t.g1(y, t.gradh())) * x);
                   out -= times(sg(px + py + t.g, pv),
                                t.g1(x, y) * (t.nab2(vv, p) - hg2 * t.gradh()));
                   return out;
                 }});
    v.push_back({"3.6(3)",
                 "R^(X,Y)V = (-1)^{(|X|+|Y|)|V|} pi(V) [X(h)/h Y - (-1)^{|X||Y|} Y(h)/h X]",
                 Lhs::riemann_hat, {B, B, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &x = a[0], &y = a[1], &vv = a[2];
                   Parity px = t.par(x), py = t.par(y);
                   VectorField br = (t.Xh(x) * t.hinv()) * y -
                                    times(sg(px, py), (t.Xh(y) * t.hinv()) * x);
                   return times(sg(px + py, t.par(vv)), t.pi(vv) * br);
                 }});
    v.push_back({"3.6(4)",
                 "R^(V,W)X = -(-1)^{|X||W|} h g2(V,P) g1(X,grad h) W + (-1)^{(|V|+|X|)|W|} h g2(W,P) g1(X,grad h) V",
                 Lhs::riemann_hat, {F, F, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &vv = a[0], &ww = a[1], &x = a[2];
                   Parity pv = t.par(vv), pw = t.par(ww), px = t.par(x);
                   const VectorField& p = t.w.p();
                   SuperScalar gx = t.g1(x, t.gradh());
                   return times(-sg(px, pw), (t.h() * t.g2(vv, p) * gx) * ww) +
                          times(sg(pv + px, pw), (t.h() * t.g2(ww, p) * gx) * vv);
                 }});
    v.push_back({"3.6(5)",
                 "R^(X,V)W = -(-1)^{|X|(|V|+|W|+|g|)} g(V,W)/h nabla1_X grad h + (-1)^{(|X|+|V|)|W|} "
                 "[(-1)^{|X||W|} X(h)/h g(W,P) V - (-1)^{|X||V|} g(W, nabla2_V P) X] "
                 "+ (-1)^{(|X|+|V|)|W|} (-1)^{|X||V|} pi(W) pi(V) X",
                 Lhs::riemann_hat, {B, F, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &x = a[0], &vv = a[1], &ww = a[2];
                   Parity px = t.par(x), pv = t.par(vv), pw = t.par(ww);
                   const VectorField& p = t.w.p();
                   VectorField out = times(-sg(px, pv + pw + t.g),
                                           (t.gmu(vv, ww) * t.hinv()) * t.nab1(x, t.gradh()));
                   VectorField br = times(sg(px, pw), (t.Xh(x) * t.hinv() * t.gmu(ww, p)) * vv) -
                                    times(sg(px, pv), t.gmu(ww, t.nab2(vv, p)) * x);
                   out += times(sg(px + pv, pw), br);
                   out += times(sg(px + pv, pw) * sg(px, pv), (t.pi(ww) * t.pi(vv)) * x);
                   return out;
                 }});
    v.push_back({"3.6(6)",
                 "R^(U,V)W = R2(U,V)W - ... g2(V,W)(grad h)(h) U + ... g2(U,W)(grad h)(h) V "
                 "+ (-1)^{(|U|+|V|)|W|} [g(W, nabla2_U P) V - (-1)^{|U||V|} g(W, nabla2_V P) U] "
                 "+ (-1)^{(|U|+|V|)|W|} pi(W) [(-1)^{|U||V|} pi(V) U - pi(U) V]",
                 Lhs::riemann_hat, {F, F, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &u = a[0], &vv = a[1], &ww = a[2];
                   Parity pu = t.par(u), pv = t.par(vv), pw = t.par(ww);
                   const VectorField& p = t.w.p();
                   SuperScalar gh = t.gradh_h();
                   int s = sg(pu + pv, pw);
                   VectorField out = t.R2(u, vv, ww) -
                                     times(sg(pu, pv + pw), (t.g2(vv, ww) * gh) * u) +
                                     times(sg(pv, pw), (t.g2(u, ww) * gh) * vv);
                   out += times(s, t.gmu(ww, t.nab2(u, p)) * vv -
                                       times(sg(pu, pv), t.gmu(ww, t.nab2(vv, p)) * u));
                   out += times(s, t.pi(ww) * (times(sg(pu, pv), t.pi(vv) * u) - t.pi(u) * vv));
                   return out;
                 }});

    // Ricci tensors.
    v.push_back({"3.7(1)", "Ric(dx_I,dx_K) = Ric1(dx_I,dx_K) - (q-n)/h H(dx_I,dx_K)",
                 Lhs::ricci_lc, {B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   return t.Ric1(a[0], a[1]) - t.q_minus_n() * t.hinv() * t.H(a[0], a[1]);
                 }});
    v.push_back({"3.7(2a)", "Ric(dx_I,dy_J) = 0", Lhs::ricci_lc, {B, F}, false, zero_scalar});
    v.push_back({"3.7(2b)", "Ric(dy_J,dx_I) = 0", Lhs::ricci_lc, {F, B}, false, zero_scalar});
    v.push_back({"3.7(3)",
                 "Ric(dy_L,dy_J) = Ric2(dy_L,dy_J) - g(dy_L,dy_J) [Lap h/h + (q-n-1)(grad h)(h)/h^2]",
                 Lhs::ricci_lc, {F, F}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   SuperScalar br = t.lap_h() * t.hinv() +
                                    (t.q_minus_n() - SuperScalar(1)) * t.gradh_h() * t.hinv2();
                   return t.Ric2(a[0], a[1]) - t.gmu(a[0], a[1]) * br;
                 }});
    v.push_back({"3.8(1)",
                 "Ric^(dx_I,dx_K) = Ric^1(dx_I,dx_K) - (q-n)[H/h - pi(dx_I)pi(dx_K) "
                 "+ (-1)^{|I||K|} g1(dx_K, nabla1_{dx_I} P)/2 + g1(dx_I, nabla1_{dx_K} P)/2]",
                 Lhs::ricci_hat, {B, B}, false,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   const auto &i = a[0], &k = a[1];
                   const VectorField& p = t.w.p();
                   SuperScalar half(RationalFunction(Rational(1, 2)));
                   SuperScalar br = t.H(i, k) * t.hinv() - t.pi(i) * t.pi(k) +
                                    half * t.g1(k, t.nab1(i, p)).scaled(sg(t.par(i), t.par(k))) +
                                    half * t.g1(i, t.nab1(k, p));
                   return t.Ric1hat(i, k) - t.q_minus_n() * br;
                 }});
    v.push_back({"3.8(2a)", "Ric^(dx_I,dy_J) = 0", Lhs::ricci_hat, {B, F}, false, zero_scalar});
    v.push_back({"3.8(2b)", "Ric^(dy_J,dx_I) = 0", Lhs::ricci_hat, {F, B}, false, zero_scalar});
    v.push_back({"3.8(3)",
                 "Ric^(dy_L,dy_J) = Ric2(dy_L,dy_J) - g(dy_L,dy_J) [Lap h/h + (q-n-1)(grad h)(h)/h^2 "
                 "+ (q-n-1+p-m) P(h)/h]",
                 Lhs::ricci_hat, {F, F}, true,
                 [](const Terms& t, const Args& a) -> FieldOrScalar {
                   SuperScalar one(1);
                   SuperScalar br = t.lap_h() * t.hinv() +
                                    (t.q_minus_n() - one) * t.gradh_h() * t.hinv2() +
                                    (t.q_minus_n() - one + t.p_minus_m()) * t.Ph() * t.hinv();
                   return t.Ric2(a[0], a[1]) - t.gmu(a[0], a[1]) * br;
                 }});
    return v;
  }();
  return table;
}

const Item& find_item(const std::string& id) {
  for (const auto& it : items())
    if (it.id == id) return it;
  throw std::invalid_argument("unknown statement item " + id);
}

std::string statement_of(const std::string& item) { return item.substr(0, item.find('(')); }

PLocation required_p(const std::string& statement) {
  if (statement == "3.3" || statement == "3.5" || statement == "3.8") return PLocation::base;
  if (statement == "3.4" || statement == "3.6") return PLocation::fiber;
  return PLocation::none;
}

std::optional<int> frame_index(const VectorField& v) {
  std::optional<int> idx;
  for (int i = 0; i < v.dim(); ++i) {
    if (v[i].is_zero()) continue;
    if (idx || !(v[i] == SuperScalar(1))) return std::nullopt;
    idx = i;
  }
  return idx;
}

void check_blocks(const WarpedProduct& w, const Item& it, const Args& args) {
  if (args.size() != it.blocks.size())
    throw std::invalid_argument(it.id + ": expected " + std::to_string(it.blocks.size()) +
                                " arguments");
  for (std::size_t k = 0; k < args.size(); ++k) {
    try {
      w.restrict(it.blocks[k], args[k]);
    } catch (const DomainError&) {
      throw DomainError(it.id + ": argument " + std::to_string(k + 1) + " must lie in the " +
                        (it.blocks[k] == B ? "base" : "fiber"));
    }
  }
}

}  // namespace

const std::vector<std::string>& statement_ids() {
  static const std::vector<std::string> ids = {"3.1", "3.2", "3.3", "3.4",
                                               "3.5", "3.6", "3.7", "3.8"};
  return ids;
}

std::vector<std::string> statement_items(const std::string& statement_id) {
  std::vector<std::string> out;
  for (const auto& it : items())
    if (statement_of(it.id) == statement_id) out.push_back(it.id);
  if (out.empty()) throw std::invalid_argument("unknown statement " + statement_id);
  return out;
}

bool statement_applies(const std::string& statement_id, const WarpedProduct& w) {
  PLocation need = required_p(statement_id);
  return need == PLocation::none || need == w.p_location();
}

FieldOrScalar closed_form(const WarpedProduct& w, const std::string& item,
                          const std::vector<VectorField>& args) {
  const Item& it = find_item(item);
  if (!statement_applies(statement_of(item), w))
    throw HypothesisError(item + " requires P in the " + to_string(required_p(statement_of(item))));
  check_blocks(w, it, args);
  return it.rhs(Terms(w), args);
}

FieldOrScalar direct_value(const WarpedProduct& w, const std::string& item,
                           const std::vector<VectorField>& args) {
  const Item& it = find_item(item);
  check_blocks(w, it, args);
  bool hat = it.lhs == Lhs::nabla_hat || it.lhs == Lhs::riemann_hat || it.lhs == Lhs::ricci_hat;
  const Curvature& k = hat ? w.ssnm() : w.lc();
  std::vector<std::optional<int>> idx;
  bool frames = true;
  for (const auto& a : args) {
    idx.push_back(frame_index(a));
    frames = frames && idx.back().has_value();
  }
  switch (it.lhs) {
    case Lhs::nabla_lc:
    case Lhs::nabla_hat:
      return covariant_derivative(k.connection(), args[0], args[1]);
    case Lhs::riemann_lc:
    case Lhs::riemann_hat:
      if (frames) return k.frame(*idx[0], *idx[1], *idx[2]);
      return riemann(k.connection(), args[0], args[1], args[2]);
    case Lhs::ricci_lc:
    case Lhs::ricci_hat:
      if (frames) return k.ricci_frame(*idx[0], *idx[1]);
      return ricci(k.connection(), args[0], args[1]);
  }
  return SuperScalar();
}

namespace {

std::string residual_string(const FieldOrScalar& lhs, const FieldOrScalar& rhs,
                            const WarpedProduct& w) {
  const Chart& c = w.chart();
  if (std::holds_alternative<VectorField>(lhs)) {
    VectorField r = std::get<VectorField>(lhs) - std::get<VectorField>(rhs);
    if (r.is_zero() || is_zero(r, w.product().assumptions)) return "0";
    return r.to_string(c);
  }
  SuperScalar r = std::get<SuperScalar>(lhs) - std::get<SuperScalar>(rhs);
  if (r.is_zero() || is_zero(r, w.product().assumptions)) return "0";
  return r.to_string(c);
}

}  // namespace

VerificationReport verify_statement(const std::string& statement_id, const WarpedProduct& w) {
  std::vector<std::string> ids = statement_items(statement_id);
  if (!statement_applies(statement_id, w))
    throw HypothesisError("statement " + statement_id + " requires P in the " +
                          to_string(required_p(statement_id)) + " (spec " +
                          w.product().name + " has P in the " + to_string(w.p_location()) + ")");
  VerificationReport rep;
  const Chart& c = w.chart();
  bool even_case = w.product().metric_parity == Parity::even &&
                   w.p().parity(c).value_or(Parity::even) == Parity::even;
  for (const auto& id : ids) {
    const Item& it = find_item(id);
    if (it.needs_even && !even_case) continue;
    // Enumerate frame tuples over the block pattern in lexicographic order.
    std::size_t arity = it.blocks.size();
    std::vector<int> pos(arity, 0);
    while (true) {
      Args args;
      std::string tuple = "(";
      for (std::size_t k = 0; k < arity; ++k) {
        int gi = w.index(it.blocks[k], pos[k]);
        args.push_back(VectorField::frame(c, gi));
        tuple += (k ? "," : "") + std::string("d_") + c.coord(gi).name;
      }
      tuple += ")";
      FieldOrScalar lhs = direct_value(w, id, args);
      FieldOrScalar rhs = it.rhs(Terms(w), args);
      std::string res = residual_string(lhs, rhs, w);
      rep.add({id, it.anchor, w.product().name + " " + tuple, res, res == "0"});
      std::size_t k = arity;
      while (k > 0) {
        --k;
        if (++pos[k] < w.block_dim(it.blocks[k])) break;
        pos[k] = 0;
        if (k == 0) {
          k = arity + 1;
          break;
        }
      }
      if (k == arity + 1 || arity == 0) break;
    }
  }
  return rep;
}

}  // namespace superwarp
