#pragma once

// C-infinity(M) on a single chart: even-coordinate functions tensored with
// the Grassmann algebra of the odd coordinates.

#include "superwarp/scalar_expr.hpp"
#include "superwarp/sign.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace superwarp {

struct Coordinate {
  std::string name;
  Parity parity = Parity::even;
};

class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<Coordinate> coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  int even_count() const { return dim() - odd_count(); }
  int odd_count() const { return static_cast<int>(odd_coords_.size()); }
  const Coordinate& coord(int i) const { return coords_[i]; }
  const std::vector<Coordinate>& coords() const { return coords_; }
  Parity parity(int i) const { return coords_[i].parity; }
  /// Index of a coordinate by name, or -1.
  int index_of(std::string_view name) const;
  /// Grassmann bit of an odd coordinate (declared order), or -1.
  int odd_bit(int i) const { return odd_bit_[i]; }
  int coord_of_bit(int b) const { return odd_coords_[b]; }

 private:
  std::vector<Coordinate> coords_;
  std::vector<int> odd_bit_;
  std::vector<int> odd_coords_;
};

class SuperScalar {
 public:
  using Mask = std::uint32_t;

  SuperScalar() = default;
  SuperScalar(const RationalFunction& body);
  SuperScalar(int c) : SuperScalar(RationalFunction(c)) {}

  static SuperScalar generator(int bit);
  static SuperScalar term(Mask m, const RationalFunction& c);

  const std::map<Mask, RationalFunction>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Parity if homogeneous (zero counts as even), nullopt otherwise.
  std::optional<Parity> parity() const;
  SuperScalar part(Parity p) const;
  RationalFunction body() const;
  /// True when the only term is the body.
  bool is_body() const;

  SuperScalar operator-() const;
  SuperScalar& operator+=(const SuperScalar& o);
  SuperScalar& operator-=(const SuperScalar& o);
  friend SuperScalar operator+(SuperScalar a, const SuperScalar& b) { return a += b; }
  friend SuperScalar operator-(SuperScalar a, const SuperScalar& b) { return a -= b; }
  /// Graded product; the sign comes from sorting the merged generators.
  friend SuperScalar operator*(const SuperScalar& a, const SuperScalar& b);
  SuperScalar& operator*=(const SuperScalar& o) { return *this = *this * o; }
  SuperScalar scaled(const RationalFunction& c) const;
  SuperScalar scaled(int s) const;

  friend bool operator==(const SuperScalar& a, const SuperScalar& b) {
    return a.terms_ == b.terms_;
  }

  template <class F>
  SuperScalar map(F&& f) const {
    SuperScalar out;
    for (const auto& [m, c] : terms_) {
      RationalFunction v = f(c);
      if (!v.is_zero()) out.terms_.emplace(m, std::move(v));
    }
    return out;
  }

  std::string to_string(const Chart& chart) const;

 private:
  std::map<Mask, RationalFunction> terms_;
};

/// Sign of the product of two sorted generator monomials; 0 on overlap.
int monomial_product_sign(SuperScalar::Mask a, SuperScalar::Mask b);

/// Left partial derivative along a chart coordinate.
SuperScalar partial(const SuperScalar& f, const Chart& chart, int coord);

/// Inverse of an element with invertible body.
SuperScalar inverse(const SuperScalar& f);

/// Every coefficient is zero under expr_equal.
bool is_zero(const SuperScalar& f, const Assumptions& assume = {});

/// Parses expressions where odd coordinate names act as Grassmann
/// generators and products keep their written order.
SuperScalar parse_super(std::string_view text, const Chart& chart);
SuperScalar to_super(const ScalarExpr& e, const Chart& chart);

}  // namespace superwarp
