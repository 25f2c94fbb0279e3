#include "superwarp/super_scalar.hpp"

#include <bit>
#include <stdexcept>

namespace superwarp {

Chart::Chart(std::vector<Coordinate> coords) : coords_(std::move(coords)) {
  odd_bit_.assign(coords_.size(), -1);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (coords_[j].name == coords_[i].name)
        throw std::invalid_argument("duplicate coordinate " + coords_[i].name);
    if (coords_[i].parity == Parity::odd) {
      odd_bit_[i] = static_cast<int>(odd_coords_.size());
      odd_coords_.push_back(static_cast<int>(i));
    }
  }
  if (odd_coords_.size() > 31)
    throw std::invalid_argument("at most 31 odd coordinates per chart");
}

int Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i].name == name) return static_cast<int>(i);
  return -1;
}

SuperScalar::SuperScalar(const RationalFunction& body) {
  if (!body.is_zero()) terms_.emplace(0u, body);
}

SuperScalar SuperScalar::generator(int bit) {
  return term(Mask{1} << bit, RationalFunction(1));
}

SuperScalar SuperScalar::term(Mask m, const RationalFunction& c) {
  SuperScalar s;
  if (!c.is_zero()) s.terms_.emplace(m, c);
  return s;
}

std::optional<Parity> SuperScalar::parity() const {
  std::optional<Parity> p;
  for (const auto& [m, c] : terms_) {
    Parity q = parity_of(std::popcount(m));
    if (p && *p != q) return std::nullopt;
    p = q;
  }
  return p ? p : Parity::even;
}

SuperScalar SuperScalar::part(Parity p) const {
  SuperScalar s;
  for (const auto& [m, c] : terms_)
    if (parity_of(std::popcount(m)) == p) s.terms_.emplace(m, c);
  return s;
}

RationalFunction SuperScalar::body() const {
  auto it = terms_.find(0u);
  return it == terms_.end() ? RationalFunction() : it->second;
}

bool SuperScalar::is_body() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0u);
}

SuperScalar SuperScalar::operator-() const {
  SuperScalar s = *this;
  for (auto& [m, c] : s.terms_) c = -c;
  return s;
}

SuperScalar& SuperScalar::operator+=(const SuperScalar& o) {
  for (const auto& [m, c] : o.terms_) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

SuperScalar& SuperScalar::operator-=(const SuperScalar& o) { return *this += -o; }

int monomial_product_sign(SuperScalar::Mask a, SuperScalar::Mask b) {
  if (a & b) return 0;
  // Each generator of b moves left past the generators of a with a larger
  // index; every such crossing of two odd symbols flips the sign.
  int crossings = 0;
  for (SuperScalar::Mask rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    crossings += std::popcount(a >> (j + 1));
  }
  return crossings % 2 ? -1 : 1;
}

SuperScalar operator*(const SuperScalar& a, const SuperScalar& b) {
  SuperScalar out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      int s = monomial_product_sign(ma, mb);
      if (s == 0) continue;
      RationalFunction c = ca * cb;
      if (s < 0) c = -c;
      out += SuperScalar::term(ma | mb, c);
    }
  }
  return out;
}

SuperScalar SuperScalar::scaled(const RationalFunction& c) const {
  if (c.is_zero()) return SuperScalar();
  return map([&](const RationalFunction& v) { return v * c; });
}

SuperScalar SuperScalar::scaled(int s) const {
  if (s == 1) return *this;
  if (s == -1) return -*this;
  return scaled(RationalFunction(s));
}

std::string SuperScalar::to_string(const Chart& chart) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string coeff = c.to_string();
    bool compound = coeff.find_first_of("+-/", 1) != std::string::npos;
    std::string term;
    if (m == 0) {
      term = coeff;
    } else {
      std::string gens;
      for (Mask r = m; r; r &= r - 1) {
        if (!gens.empty()) gens += "*";
        gens += chart.coord(chart.coord_of_bit(std::countr_zero(r))).name;
      }
      if (c.is_one()) {
        term = gens;
      } else if (auto v = c.constant_value(); v && *v == -1) {
        term = "-" + gens;
      } else {
        term = (compound ? "(" + coeff + ")" : coeff) + "*" + gens;
      }
    }
    if (out.empty()) {
      out = term;
    } else if (term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

SuperScalar partial(const SuperScalar& f, const Chart& chart, int coord) {
  if (coord < 0 || coord >= chart.dim())
    throw std::out_of_range("partial: unknown coordinate index");
  const Coordinate& c = chart.coord(coord);
  if (c.parity == Parity::even)
    return f.map([&](const RationalFunction& v) { return v.derivative(c.name); });
  SuperScalar::Mask g = SuperScalar::Mask{1} << chart.odd_bit(coord);
  SuperScalar out;
  for (const auto& [m, v] : f.terms()) {
    if (!(m & g)) continue;
    // Left derivative: bring the generator to the front, then drop it.
    SuperScalar::Mask rest = m & ~g;
    int s = monomial_product_sign(g, rest);
    out += SuperScalar::term(rest, s < 0 ? -v : v);
  }
  return out;
}

SuperScalar inverse(const SuperScalar& f) {
  RationalFunction b = f.body();
  if (b.is_zero()) throw std::domain_error("inverse: body is zero");
  RationalFunction binv = RationalFunction(1) / b;
  // f = b(1 + u) with u nilpotent.
  SuperScalar u = f.scaled(binv) - SuperScalar(RationalFunction(1));
  SuperScalar sum(RationalFunction(1)), power(RationalFunction(1));
  for (int k = 1; k <= 32; ++k) {
    power = power * u;
    if (power.is_zero()) break;
    sum += (k % 2 ? -power : power);
  }
  return sum.scaled(binv);
}

bool is_zero(const SuperScalar& f, const Assumptions& assume) {
  for (const auto& [m, c] : f.terms())
    if (!is_zero(c, assume)) return false;
  return true;
}

SuperScalar to_super(const ScalarExpr& e, const Chart& chart) {
  using Op = ScalarExpr::Op;
  const auto& k = e.children();
  auto body_of = [&](const ScalarExpr& sub) {
    SuperScalar s = to_super(sub, chart);
    if (!s.is_body())
      throw ParseError("odd coordinates inside an elementary function: " +
                       e.to_string());
    return s.body();
  };
  switch (e.op()) {
    case Op::constant:
      return SuperScalar(RationalFunction(e.value()));
    case Op::symbol: {
      int i = chart.index_of(e.name());
      if (i >= 0 && chart.parity(i) == Parity::odd)
        return SuperScalar::generator(chart.odd_bit(i));
      return SuperScalar(RationalFunction::symbol(e.name()));
    }
    case Op::function: {
      int i = chart.index_of(e.argument());
      if (i >= 0 && chart.parity(i) == Parity::odd)
        throw ParseError("function " + e.name() + " of odd coordinate " +
                         e.argument());
      return SuperScalar(RationalFunction::function(e.name(), e.argument(), e.order()));
    }
    case Op::add:
      return to_super(k[0], chart) + to_super(k[1], chart);
    case Op::sub:
      return to_super(k[0], chart) - to_super(k[1], chart);
    case Op::mul:
      return to_super(k[0], chart) * to_super(k[1], chart);
    case Op::div: {
      SuperScalar d = to_super(k[1], chart);
      if (d.parity() != Parity::even)
        throw ParseError("division by a non-even expression: " + e.to_string());
      return to_super(k[0], chart) * inverse(d);
    }
    case Op::pow: {
      SuperScalar b = to_super(k[0], chart);
      int n = e.exponent();
      if (n < 0) {
        b = inverse(b);
        n = -n;
      }
      SuperScalar r(RationalFunction(1));
      for (int i = 0; i < n; ++i) r = r * b;
      return r;
    }
    case Op::exp:
      return SuperScalar(RationalFunction::exp(body_of(k[0])));
    case Op::sin:
      return SuperScalar(RationalFunction::sin(body_of(k[0])));
    case Op::cos:
      return SuperScalar(RationalFunction::cos(body_of(k[0])));
    case Op::sqrt:
      return SuperScalar(RationalFunction::sqrt(body_of(k[0])));
  }
  return SuperScalar();
}

SuperScalar parse_super(std::string_view text, const Chart& chart) {
  return to_super(parse_expr(text), chart);
}

}  // namespace superwarp
