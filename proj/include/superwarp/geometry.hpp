#pragma once

// Vector fields, graded metrics and their inverses, and the gradient.

#include "superwarp/super_scalar.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace superwarp {

/// X = sum_I X^I d_I with coefficients on the left, X(f) = sum X^I d_I f.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(int dim) : coeffs_(dim) {}
  VectorField(std::vector<SuperScalar> coeffs) : coeffs_(std::move(coeffs)) {}

  static VectorField frame(const Chart& chart, int i);

  int dim() const { return static_cast<int>(coeffs_.size()); }
  const SuperScalar& operator[](int i) const { return coeffs_[i]; }
  SuperScalar& operator[](int i) { return coeffs_[i]; }
  const std::vector<SuperScalar>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  /// Parity if homogeneous on the chart (zero counts as even).
  std::optional<Parity> parity(const Chart& chart) const;

  VectorField operator-() const;
  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  /// f X: multiplies every coefficient from the left.
  friend VectorField operator*(const SuperScalar& f, const VectorField& x);
  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.coeffs_ == b.coeffs_;
  }

  template <class F>
  VectorField map(F&& f) const {
    VectorField out(dim());
    for (int i = 0; i < dim(); ++i) out.coeffs_[i] = f(coeffs_[i]);
    return out;
  }

  std::string to_string(const Chart& chart) const;

 private:
  std::vector<SuperScalar> coeffs_;
};

/// Parity of a homogeneous field or function; DomainError otherwise.
Parity homogeneous_parity(const VectorField& x, const Chart& chart, const char* what);
Parity homogeneous_parity(const SuperScalar& f, const char* what);

/// X(f).
SuperScalar apply(const VectorField& x, const SuperScalar& f, const Chart& chart);

/// X . f = (-1)^{|X||f|} f X, the scalar written on the right.
VectorField scalar_from_right(const VectorField& x, const SuperScalar& f,
                              const Chart& chart);

/// Graded commutator [X, Y] = XY - (-1)^{|X||Y|} YX.
VectorField bracket(const VectorField& x, const VectorField& y, const Chart& chart);

bool is_zero(const VectorField& x, const Assumptions& assume = {});

using SuperMatrix = std::vector<std::vector<SuperScalar>>;

SuperMatrix identity_matrix(int n);
SuperMatrix multiply(const SuperMatrix& a, const SuperMatrix& b);

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::string invariant, std::string detail)
      : std::runtime_error(invariant + ": " + detail),
        invariant_(std::move(invariant)) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};


struct ManifoldSpec {
  std::string name;
  Chart chart;
  Parity metric_parity = Parity::even;
  SuperMatrix metric;  // g_IJ = <d_I, d_J>
  Assumptions assumptions;
  std::optional<VectorField> P;

  int dim() const { return chart.dim(); }
  int even_dim() const { return chart.even_count(); }
  int odd_dim() const { return chart.odd_count(); }
};

/// Assembles a metric from entries keyed by coordinate-name pairs. Missing
/// entries are zero; an entry given on one side only is completed by
/// g_JI = (-1)^{|I||J|} g_IJ, and when both sides are given they must agree.
ManifoldSpec build_manifold(
    std::string name, Chart chart,
    const std::map<std::pair<std::string, std::string>, std::string>& entries,
    Parity metric_parity = Parity::even, Assumptions assumptions = {});

/// Checks graded symmetry, parity homogeneity and body nondegeneracy.
/// Throws InvariantViolation naming the invariant and the indices.
void validate(const ManifoldSpec& m, std::uint64_t seed = 1);

/// Condition number of the body of the metric at one admissible point.
double body_condition_number(const ManifoldSpec& m, std::uint64_t seed = 1);

/// Two-sided inverse of a matrix with invertible body: the nilpotent
/// series sum_k (-B^{-1} N)^k B^{-1}, B^{-1} by Gaussian elimination.
SuperMatrix invert(const SuperMatrix& g);

struct InverseMetric {
  SuperMatrix entries;  // g^{IJ} with sum_K g_IK g^KJ = delta
};

InverseMetric invert_metric(const ManifoldSpec& m);

/// <X, Y> = sum_{I,J} (-1)^{|d_I||Y^J|} X^I Y^J g_IJ.
SuperScalar metric_eval(const ManifoldSpec& m, const VectorField& x,
                        const VectorField& y);

/// The field with X(f) = (-1)^{|f||g|} <X, grad f> for every X.
VectorField gradient(const ManifoldSpec& m, const SuperScalar& f);

/// Residual of the defining identity of the gradient on frame field d_I.
SuperScalar gradient_residual(const ManifoldSpec& m, const SuperScalar& f,
                              const VectorField& grad, int i);

/// Parses e.g. "d_t", "h(t)*d_y1 + xi*d_eta"; basis fields are d_<coord>.
VectorField parse_field(std::string_view text, const Chart& chart);

}  // namespace superwarp
