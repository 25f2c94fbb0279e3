#include "superwarp/curvature.hpp"

namespace superwarp {

namespace {

VectorField scaled(const VectorField& v, int s) {
  if (s == 1) return v;
  return -v;
}

}  // namespace

VectorField riemann(const Connection& c, const VectorField& x, const VectorField& y,
                    const VectorField& z) {
  const Chart& ch = c.chart();
  Parity px = homogeneous_parity(x, ch, "riemann");
  Parity py = homogeneous_parity(y, ch, "riemann");
  homogeneous_parity(z, ch, "riemann");
  VectorField a = covariant_derivative(c, x, covariant_derivative(c, y, z));
  VectorField b = covariant_derivative(c, y, covariant_derivative(c, x, z));
  VectorField br = bracket(x, y, ch);
  VectorField out = a - scaled(b, swap_sign(px, py));
  if (!br.is_zero()) out -= covariant_derivative(c, br, z);
  return out;
}

namespace {

// The summand of Ric(X,Y) for coordinate I, given R(d_I,X)Y and R(d_I,Y)X.
SuperScalar ricci_term(const Chart& ch, int i, Parity px, Parity py, const VectorField& rxy,
                       const VectorField& ryx) {
  SuperScalar v = rxy[i] + ryx[i].scaled(swap_sign(px, py));
  Parity pi = ch.parity(i);
  return v.scaled(RationalFunction(Rational(swap_sign(pi, pi + px + py), 2)));
}

}  // namespace

SuperScalar ricci(const Connection& c, const VectorField& x, const VectorField& y) {
  const Chart& ch = c.chart();
  Parity px = homogeneous_parity(x, ch, "ricci");
  Parity py = homogeneous_parity(y, ch, "ricci");
  SuperScalar out;
  for (int i = 0; i < ch.dim(); ++i) {
    VectorField e = VectorField::frame(ch, i);
    out += ricci_term(ch, i, px, py, riemann(c, e, x, y), riemann(c, e, y, x));
  }
  return out;
}

Curvature::Curvature(Connection c)
    : conn_(std::move(c)),
      n_(conn_.dim()),
      r_(static_cast<std::size_t>(n_) * n_ * n_),
      ric_(static_cast<std::size_t>(n_) * n_) {}

const VectorField& Curvature::frame(int i, int j, int k) const {
  std::size_t idx = (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  {
    std::lock_guard lock(mu_);
    if (r_[idx]) return *r_[idx];
  }
  const Chart& ch = conn_.chart();
  // Frame brackets vanish, so only the two second derivatives remain.
  VectorField ei = VectorField::frame(ch, i), ej = VectorField::frame(ch, j),
              ek = VectorField::frame(ch, k);
  VectorField a = covariant_derivative(conn_, ei, covariant_derivative(conn_, ej, ek));
  VectorField b = covariant_derivative(conn_, ej, covariant_derivative(conn_, ei, ek));
  auto v = std::make_unique<VectorField>(a - scaled(b, swap_sign(ch.parity(i), ch.parity(j))));
  std::lock_guard lock(mu_);
  if (!r_[idx]) r_[idx] = std::move(v);
  return *r_[idx];
}

const SuperScalar& Curvature::ricci_frame(int a, int b) const {
  std::size_t idx = static_cast<std::size_t>(a) * n_ + b;
  {
    std::lock_guard lock(mu_);
    if (ric_[idx]) return *ric_[idx];
  }
  const Chart& ch = conn_.chart();
  Parity pa = ch.parity(a), pb = ch.parity(b);
  SuperScalar out;
  for (int i = 0; i < n_; ++i) out += ricci_term(ch, i, pa, pb, frame(i, a, b), frame(i, b, a));
  auto v = std::make_unique<SuperScalar>(std::move(out));
  std::lock_guard lock(mu_);
  if (!ric_[idx]) ric_[idx] = std::move(v);
  return *ric_[idx];
}

std::vector<ComponentRow> Curvature::riemann_rows() const {
  std::vector<ComponentRow> rows;
  const Chart& ch = conn_.chart();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        const VectorField& r = frame(i, j, k);
        for (int l = 0; l < n_; ++l)
          if (!r[l].is_zero()) rows.push_back({{i, j, k, l}, r[l].to_string(ch)});
      }
  return rows;
}

std::vector<ComponentRow> Curvature::ricci_rows() const {
  std::vector<ComponentRow> rows;
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) {
      const SuperScalar& r = ricci_frame(a, b);
      if (!r.is_zero()) rows.push_back({{a, b}, r.to_string(conn_.chart())});
    }
  return rows;
}

VectorField prop215_check(const ManifoldSpec& m, const VectorField& p, const VectorField& x,
                          const VectorField& y, const VectorField& z) {
  return prop215_check(levi_civita(m), ssnm_connection(m, p), x, y, z);
}

VectorField prop215_check(const Connection& lc, const Connection& hat, const VectorField& x,
                          const VectorField& y, const VectorField& z) {
  if (!hat.P()) throw DomainError("prop215_check: connection has no field P");
  const ManifoldSpec& m = lc.manifold();
  const VectorField& p = *hat.P();
  const Chart& ch = m.chart;
  Parity px = homogeneous_parity(x, ch, "prop215_check");
  Parity py = homogeneous_parity(y, ch, "prop215_check");
  Parity pz = homogeneous_parity(z, ch, "prop215_check");
  int sxy = swap_sign(px, py);
  int sz = swap_sign(px + py, pz);
  VectorField rhs = riemann(lc, x, y, z);
  SuperScalar gx = metric_eval(m, z, covariant_derivative(lc, x, p));
  SuperScalar gy = metric_eval(m, z, covariant_derivative(lc, y, p));
  rhs += scaled(gx * y - (gy * x).map([&](const SuperScalar& v) { return v.scaled(sxy); }), sz);
  SuperScalar pz_ = pi_form(m, p, z);
  SuperScalar pxs = pi_form(m, p, x), pys = pi_form(m, p, y);
  VectorField bracket_term = (pys * x).map([&](const SuperScalar& v) { return v.scaled(sxy); }) -
                             pxs * y;
  rhs += scaled(pz_ * bracket_term, sz);
  return riemann(hat, x, y, z) - rhs;
}

}  // namespace superwarp
