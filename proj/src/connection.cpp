#include "superwarp/connection.hpp"

namespace superwarp {

std::string to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::levi_civita: return "levi_civita";
    case ConnectionKind::ssnm: return "ssnm";
    case ConnectionKind::custom: return "custom";
  }
  return "?";
}

Connection::Connection(ManifoldSpec m, ConnectionKind kind, std::vector<SuperScalar> gamma,
                       std::optional<VectorField> p)
    : m_(std::move(m)), kind_(kind), gamma_(std::move(gamma)), p_(std::move(p)) {
  std::size_t n = m_.dim();
  if (gamma_.size() != n * n * n)
    throw std::invalid_argument("connection: gamma table has wrong size");
}

Connection levi_civita(const ManifoldSpec& m) {
  const Chart& c = m.chart;
  int n = c.dim();
  SuperMatrix ginv = invert(m.metric);
  auto par = [&](int i) { return c.parity(i); };
  std::vector<SuperScalar> gamma(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // C_K = <nabla_{d_I} d_J, d_K> from the Koszul formula on frames.
      std::vector<SuperScalar> ck(n);
      for (int k = 0; k < n; ++k) {
        SuperScalar a = partial(m.metric[j][k], c, i);
        SuperScalar b = partial(m.metric[k][i], c, j)
                            .scaled(swap_sign(par(i), par(j) + par(k)));
        SuperScalar d = partial(m.metric[i][j], c, k)
                            .scaled(swap_sign(par(k), par(i) + par(j)));
        ck[k] = (a + b - d).scaled(RationalFunction(Rational(1, 2)));
      }
      for (int l = 0; l < n; ++l) {
        SuperScalar g;
        for (int k = 0; k < n; ++k)
          if (!ck[k].is_zero() && !ginv[k][l].is_zero()) g += ck[k] * ginv[k][l];
        gamma[(static_cast<std::size_t>(i) * n + j) * n + l] = g;
      }
    }
  return Connection(m, ConnectionKind::levi_civita, std::move(gamma));
}

SuperScalar pi_form(const ManifoldSpec& m, const VectorField& p, const VectorField& z) {
  return metric_eval(m, z, p);
}

Connection ssnm_connection(const ManifoldSpec& m, const VectorField& p) {
  const Chart& c = m.chart;
  Parity pp = homogeneous_parity(p, c, "ssnm_connection");
  if (pp + m.metric_parity != Parity::even)
    throw DomainError("ssnm_connection: |g| + |P| must be even");
  Connection lc = levi_civita(m);
  int n = c.dim();
  std::vector<SuperScalar> gamma = lc.gamma_table();
  for (int j = 0; j < n; ++j) {
    SuperScalar pj = pi_form(m, p, VectorField::frame(c, j));
    if (pj.is_zero()) continue;
    for (int i = 0; i < n; ++i)
      gamma[(static_cast<std::size_t>(i) * n + j) * n + i] +=
          pj.scaled(swap_sign(c.parity(i), c.parity(j)));
  }
  return Connection(m, ConnectionKind::ssnm, std::move(gamma), p);
}

Connection custom_connection(const ManifoldSpec& m, std::vector<SuperScalar> gamma) {
  return Connection(m, ConnectionKind::custom, std::move(gamma));
}

VectorField covariant_derivative(const Connection& conn, const VectorField& x,
                                 const VectorField& y) {
  const Chart& c = conn.chart();
  int n = c.dim();
  VectorField out(n);
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    VectorField inner(n);
    for (int k = 0; k < n; ++k) inner[k] = partial(y[k], c, i);
    for (int j = 0; j < n; ++j) {
      if (y[j].is_zero()) continue;
      for (Parity p : {Parity::even, Parity::odd}) {
        SuperScalar yj = y[j].part(p);
        if (yj.is_zero()) continue;
        // nabla_{d_I}(Y^J d_J): Y^J moves past d_I.
        yj = yj.scaled(swap_sign(c.parity(i), p));
        for (int k = 0; k < n; ++k) {
          const SuperScalar& g = conn.gamma(i, j, k);
          if (!g.is_zero()) inner[k] += yj * g;
        }
      }
    }
    out += x[i] * inner;
  }
  return out;
}

VectorField torsion(const Connection& conn, const VectorField& x, const VectorField& y) {
  const Chart& c = conn.chart();
  int s = swap_sign(homogeneous_parity(x, c, "torsion"), homogeneous_parity(y, c, "torsion"));
  VectorField yx = covariant_derivative(conn, y, x);
  return covariant_derivative(conn, x, y) - yx.map([&](const SuperScalar& v) {
           return v.scaled(s);
         }) - bracket(x, y, c);
}

SuperScalar nonmetricity_residual(const Connection& conn, const VectorField& x,
                                  const VectorField& y, const VectorField& z) {
  const ManifoldSpec& m = conn.manifold();
  const Chart& c = m.chart;
  int s = swap_sign(homogeneous_parity(x, c, "nonmetricity"),
                    homogeneous_parity(y, c, "nonmetricity"));
  return apply(x, metric_eval(m, y, z), c) -
         metric_eval(m, covariant_derivative(conn, x, y), z) -
         metric_eval(m, y, covariant_derivative(conn, x, z)).scaled(s);
}

VectorField ssnm_torsion_expected(const ManifoldSpec& m, const VectorField& p,
                                  const VectorField& x, const VectorField& y) {
  const Chart& c = m.chart;
  int s = swap_sign(homogeneous_parity(x, c, "torsion"), homogeneous_parity(y, c, "torsion"));
  VectorField a = scalar_from_right(x, pi_form(m, p, y), c);
  VectorField b = scalar_from_right(y, pi_form(m, p, x), c);
  return a - b.map([&](const SuperScalar& v) { return v.scaled(s); });
}

SuperScalar ssnm_nonmetricity_expected(const ManifoldSpec& m, const VectorField& p,
                                       const VectorField& x, const VectorField& y,
                                       const VectorField& z) {
  const Chart& c = m.chart;
  Parity px = homogeneous_parity(x, c, "nonmetricity");
  Parity py = homogeneous_parity(y, c, "nonmetricity");
  Parity pz = homogeneous_parity(z, c, "nonmetricity");
  int sxy = swap_sign(px, py);
  int sz = swap_sign(pz, px + py);
  SuperScalar first = (pi_form(m, p, y) * metric_eval(m, x, z)).scaled(sxy);
  SuperScalar second = (pi_form(m, p, z) * metric_eval(m, y, x)).scaled(sxy * sz);
  return -(first + second);
}

SuperScalar divergence(const Connection& conn, const VectorField& x) {
  const Chart& c = conn.chart();
  Parity px = homogeneous_parity(x, c, "divergence");
  SuperScalar out;
  for (int i = 0; i < c.dim(); ++i) {
    VectorField d = covariant_derivative(conn, VectorField::frame(c, i), x);
    out += d[i].scaled(swap_sign(c.parity(i), c.parity(i) + px));
  }
  return out;
}

SuperScalar laplacian(const Connection& lc, const SuperScalar& f) {
  return divergence(lc, gradient(lc.manifold(), f));
}

SuperScalar laplacian(const ManifoldSpec& m, const SuperScalar& f) {
  return laplacian(levi_civita(m), f);
}

SuperScalar hessian(const Connection& conn, const SuperScalar& f, const VectorField& x,
                    const VectorField& y) {
  const Chart& c = conn.chart();
  return apply(x, apply(y, f, c), c) - apply(covariant_derivative(conn, x, y), f, c);
}

}  // namespace superwarp
