#include "superwarp/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace superwarp {

// ---------------------------------------------------------------------------
// Vector fields

VectorField VectorField::frame(const Chart& chart, int i) {
  VectorField x(chart.dim());
  x.coeffs_[i] = SuperScalar(RationalFunction(1));
  return x;
}

bool VectorField::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

std::optional<Parity> VectorField::parity(const Chart& chart) const {
  std::optional<Parity> p;
  for (int i = 0; i < dim(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    auto q = coeffs_[i].parity();
    if (!q) return std::nullopt;
    Parity total = *q + chart.parity(i);
    if (p && *p != total) return std::nullopt;
    p = total;
  }
  return p ? p : Parity::even;
}

VectorField VectorField::operator-() const {
  return map([](const SuperScalar& c) { return -c; });
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (coeffs_.empty()) coeffs_.resize(o.coeffs_.size());
  for (int i = 0; i < o.dim(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) { return *this += -o; }

VectorField operator*(const SuperScalar& f, const VectorField& x) {
  return x.map([&](const SuperScalar& c) { return f * c; });
}

std::string VectorField::to_string(const Chart& chart) const {
  std::string out;
  for (int i = 0; i < dim(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    std::string c = coeffs_[i].to_string(chart);
    std::string term = "d_" + chart.coord(i).name;
    if (c == "1") {
    } else if (c == "-1") {
      term = "-" + term;
    } else {
      bool compound = c.find_first_of("+-", 1) != std::string::npos;
      term = (compound ? "(" + c + ")" : c) + "*" + term;
    }
    if (out.empty()) {
      out = term;
    } else if (term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out.empty() ? "0" : out;
}

SuperScalar apply(const VectorField& x, const SuperScalar& f, const Chart& chart) {
  SuperScalar out;
  for (int i = 0; i < x.dim(); ++i) {
    if (x[i].is_zero()) continue;
    SuperScalar d = partial(f, chart, i);
    if (!d.is_zero()) out += x[i] * d;
  }
  return out;
}

Parity homogeneous_parity(const VectorField& x, const Chart& chart, const char* what) {
  auto p = x.parity(chart);
  if (!p) throw DomainError(std::string(what) + ": inhomogeneous vector field");
  return *p;
}

Parity homogeneous_parity(const SuperScalar& f, const char* what) {
  auto p = f.parity();
  if (!p) throw DomainError(std::string(what) + ": inhomogeneous function");
  return *p;
}

VectorField scalar_from_right(const VectorField& x, const SuperScalar& f,
                              const Chart& chart) {
  Parity px = homogeneous_parity(x, chart, "scalar_from_right");
  Parity pf = homogeneous_parity(f, "scalar_from_right");
  return (f.scaled(swap_sign(px, pf))) * x;
}

VectorField bracket(const VectorField& x, const VectorField& y, const Chart& chart) {
  Parity px = homogeneous_parity(x, chart, "bracket");
  Parity py = homogeneous_parity(y, chart, "bracket");
  int s = swap_sign(px, py);
  VectorField out(chart.dim());
  for (int k = 0; k < chart.dim(); ++k)
    out[k] = apply(x, y[k], chart) - apply(y, x[k], chart).scaled(s);
  return out;
}

bool is_zero(const VectorField& x, const Assumptions& assume) {
  for (const auto& c : x.coeffs())
    if (!is_zero(c, assume)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Matrices

SuperMatrix identity_matrix(int n) {
  SuperMatrix m(n, std::vector<SuperScalar>(n));
  for (int i = 0; i < n; ++i) m[i][i] = SuperScalar(RationalFunction(1));
  return m;
}

SuperMatrix multiply(const SuperMatrix& a, const SuperMatrix& b) {
  std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  SuperMatrix out(n, std::vector<SuperScalar>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!b[l][j].is_zero()) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

namespace {

using RMatrix = std::vector<std::vector<RationalFunction>>;

RMatrix invert_body(RMatrix a) {
  std::size_t n = a.size();
  RMatrix inv(n, std::vector<RationalFunction>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = RationalFunction(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n)
      throw DomainError("metric body is singular (zero pivot in column " +
                        std::to_string(col) + ")");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    RationalFunction p = RationalFunction(1) / a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      if (!a[col][j].is_zero()) a[col][j] *= p;
      if (!inv[col][j].is_zero()) inv[col][j] *= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      RationalFunction f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[col][j].is_zero()) a[r][j] -= f * a[col][j];
        if (!inv[col][j].is_zero()) inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

bool is_zero_matrix(const SuperMatrix& m) {
  for (const auto& row : m)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

}  // namespace

SuperMatrix invert(const SuperMatrix& g) {
  std::size_t n = g.size();
  RMatrix body(n, std::vector<RationalFunction>(n));
  SuperMatrix nil(n, std::vector<SuperScalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      body[i][j] = g[i][j].body();
      nil[i][j] = g[i][j] - SuperScalar(body[i][j]);
    }
  RMatrix binv_r = invert_body(body);
  SuperMatrix binv(n, std::vector<SuperScalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) binv[i][j] = SuperScalar(binv_r[i][j]);
  if (is_zero_matrix(nil)) return binv;

  SuperMatrix step = multiply(binv, nil);
  for (auto& row : step)
    for (auto& e : row) e = -e;
  SuperMatrix sum = identity_matrix(static_cast<int>(n));
  SuperMatrix power = sum;
  for (int k = 0; k < 40; ++k) {
    power = multiply(power, step);
    if (is_zero_matrix(power)) break;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += power[i][j];
  }
  return multiply(sum, binv);
}

InverseMetric invert_metric(const ManifoldSpec& m) {
  return InverseMetric{invert(m.metric)};
}

// ---------------------------------------------------------------------------
// Validation

double body_condition_number(const ManifoldSpec& m, std::uint64_t seed) {
  int n = m.dim();
  PointSampler sampler(m.assumptions, seed);
  EvalEnv env = sampler.env();
  for (int attempt = 0; attempt < 100; ++attempt) {
    sampler.next();
    if (!sampler.admissible()) continue;
    Eigen::MatrixXd b(n, n);
    bool finite = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        b(i, j) = m.metric[i][j].body().evaluate(env);
        finite = finite && std::isfinite(b(i, j));
      }
    if (!finite) continue;
    if (n == 0) return 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
    const auto& s = svd.singularValues();
    if (s(n - 1) == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / s(n - 1);
  }
  return std::numeric_limits<double>::infinity();
}

ManifoldSpec build_manifold(
    std::string name, Chart chart,
    const std::map<std::pair<std::string, std::string>, std::string>& entries,
    Parity metric_parity, Assumptions assumptions) {
  ManifoldSpec m;
  m.name = std::move(name);
  m.chart = std::move(chart);
  m.metric_parity = metric_parity;
  m.assumptions = std::move(assumptions);
  int n = m.chart.dim();
  m.metric.assign(n, std::vector<SuperScalar>(n));
  std::vector<std::vector<bool>> given(n, std::vector<bool>(n, false));
  for (const auto& [key, text] : entries) {
    int i = m.chart.index_of(key.first), j = m.chart.index_of(key.second);
    if (i < 0 || j < 0)
      throw ParseError("metric entry for unknown coordinate (" + key.first + "," +
                       key.second + ")");
    m.metric[i][j] = parse_super(text, m.chart);
    given[i][j] = true;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!given[i][j] || given[j][i]) continue;
      m.metric[j][i] = m.metric[i][j].scaled(swap_sign(m.chart.parity(i), m.chart.parity(j)));
      given[j][i] = true;
    }
  return m;
}

void validate(const ManifoldSpec& m, std::uint64_t seed) {
  const Chart& c = m.chart;
  int n = c.dim();
  if (static_cast<int>(m.metric.size()) != n)
    throw InvariantViolation("metric-shape", "metric has wrong row count");
  for (const auto& row : m.metric)
    if (static_cast<int>(row.size()) != n)
      throw InvariantViolation("metric-shape", "metric has wrong column count");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const SuperScalar& g = m.metric[i][j];
      for (const auto& [mask, v] : g.terms()) {
        Parity total = parity_of(std::popcount(mask)) + c.parity(i) + c.parity(j);
        if (total != m.metric_parity)
          throw InvariantViolation(
              "parity-homogeneity",
              "g(" + c.coord(i).name + "," + c.coord(j).name + ") has a term of the wrong degree");
      }
      if (j < i) continue;
      SuperScalar diff =
          g - m.metric[j][i].scaled(swap_sign(c.parity(i), c.parity(j)));
      if (!is_zero(diff, m.assumptions))
        throw InvariantViolation(
            "graded-symmetry",
            "g(" + c.coord(i).name + "," + c.coord(j).name + ") != (-1)^{|I||J|} g(" +
                c.coord(j).name + "," + c.coord(i).name + ")");
    }
  }
  double cond = body_condition_number(m, seed);
  if (!std::isfinite(cond) || cond > 1e12)
    throw InvariantViolation("body-nondegeneracy",
                             "metric body is numerically singular (condition " +
                                 std::to_string(cond) + ")");
  if (m.P) {
    auto pp = m.P->parity(c);
    if (!pp) throw InvariantViolation("P-homogeneity", "P is inhomogeneous");
    if (*pp + m.metric_parity != Parity::even)
      throw InvariantViolation("P-parity", "|g| + |P| must be 0");
  }
}

// ---------------------------------------------------------------------------
// Pairing and gradient

SuperScalar metric_eval(const ManifoldSpec& m, const VectorField& x,
                        const VectorField& y) {
  const Chart& c = m.chart;
  SuperScalar out;
  for (int i = 0; i < c.dim(); ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < c.dim(); ++j) {
      if (y[j].is_zero() || m.metric[i][j].is_zero()) continue;
      for (Parity p : {Parity::even, Parity::odd}) {
        SuperScalar yj = y[j].part(p);
        if (yj.is_zero()) continue;
        // <X^I d_I, Y^J d_J>: Y^J moves left past d_I.
        int s = swap_sign(c.parity(i), p);
        out += (x[i] * yj * m.metric[i][j]).scaled(s);
      }
    }
  }
  return out;
}

VectorField gradient(const ManifoldSpec& m, const SuperScalar& f) {
  const Chart& c = m.chart;
  int n = c.dim();
  VectorField out(n);
  for (Parity pf : {Parity::even, Parity::odd}) {
    SuperScalar fp = f.part(pf);
    if (fp.is_zero()) continue;
    Parity pg = pf + m.metric_parity;  // parity of grad f
    // Solve sum_J G^J A_JI = b_I with b_I = d_I f.
    SuperMatrix a(n, std::vector<SuperScalar>(n));
    int sf = swap_sign(pf, m.metric_parity);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        a[j][i] = m.metric[i][j].scaled(sf * swap_sign(c.parity(i), pg + c.parity(j)));
    SuperMatrix ainv = invert(a);
    for (int j = 0; j < n; ++j) {
      SuperScalar gj;
      for (int i = 0; i < n; ++i) {
        if (ainv[i][j].is_zero()) continue;
        SuperScalar b = partial(fp, c, i);
        if (!b.is_zero()) gj += b * ainv[i][j];
      }
      out[j] += gj;
    }
  }
  return out;
}

SuperScalar gradient_residual(const ManifoldSpec& m, const SuperScalar& f,
                              const VectorField& grad, int i) {
  VectorField e = VectorField::frame(m.chart, i);
  SuperScalar out;
  for (Parity pf : {Parity::even, Parity::odd}) {
    SuperScalar fp = f.part(pf);
    if (fp.is_zero()) continue;
    VectorField gp = grad.map([&](const SuperScalar& s) { return s; });
    // Restrict the gradient to the part generated by fp.
    Parity pg = pf + m.metric_parity;
    for (int j = 0; j < gp.dim(); ++j) gp[j] = gp[j].part(pg + m.chart.parity(j));
    out += partial(fp, m.chart, i) -
           metric_eval(m, e, gp).scaled(swap_sign(pf, m.metric_parity));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Field parsing

namespace {

bool mentions_field(const ScalarExpr& e) {
  if (e.op() == ScalarExpr::Op::symbol) return e.name().rfind("d_", 0) == 0;
  for (const auto& k : e.children())
    if (mentions_field(k)) return true;
  return false;
}

VectorField field_of(const ScalarExpr& e, const Chart& chart) {
  using Op = ScalarExpr::Op;
  const auto& k = e.children();
  switch (e.op()) {
    case Op::symbol: {
      int i = chart.index_of(e.name().substr(2));
      if (i < 0) throw ParseError("unknown basis field " + e.name());
      return VectorField::frame(chart, i);
    }
    case Op::add:
    case Op::sub: {
      auto is_zero_const = [](const ScalarExpr& x) {
        return x.op() == Op::constant && x.value() == 0;
      };
      if (e.op() == Op::sub && is_zero_const(k[0])) return -field_of(k[1], chart);
      if (!mentions_field(k[0]) || !mentions_field(k[1]))
        throw ParseError("cannot add a function and a vector field: " + e.to_string());
      VectorField a = field_of(k[0], chart), b = field_of(k[1], chart);
      return e.op() == Op::add ? a + b : a - b;
    }
    case Op::mul:
      if (mentions_field(k[0]))
        throw ParseError("write coefficients to the left of basis fields: " +
                         e.to_string());
      return to_super(k[0], chart) * field_of(k[1], chart);
    case Op::div: {
      if (mentions_field(k[1])) throw ParseError("division by a vector field");
      SuperScalar d = to_super(k[1], chart);
      if (d.parity() != Parity::even) throw ParseError("division by a non-even function");
      return inverse(d) * field_of(k[0], chart);
    }
    default:
      throw ParseError("not a vector field expression: " + e.to_string());
  }
}

}  // namespace

VectorField parse_field(std::string_view text, const Chart& chart) {
  ScalarExpr e = parse_expr(text);
  if (!mentions_field(e)) {
    if (e.op() == ScalarExpr::Op::constant && e.value() == 0)
      return VectorField(chart.dim());
    throw ParseError("vector field expression has no basis field d_<coord>: " +
                     std::string(text));
  }
  return field_of(e, chart);
}

}  // namespace superwarp
