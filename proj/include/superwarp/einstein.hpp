#pragma once

// Einstein conditions on warped products over R^(1,0) and R^(1,2) with
// P = d_t, and the closed-form families of warping functions.

#include "superwarp/warped.hpp"

#include <optional>

namespace superwarp {

enum class BaseType { R10, R12 };
enum class FamilyTag { exponential, linear, trigonometric, constant, none };

std::string to_string(BaseType b);
std::string to_string(FamilyTag t);
BaseType parse_base_type(std::string_view s);

/// Base/connection pair not covered by any classification.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter value for which the classification is undefined.
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// lambda is the Einstein constant of the product; lambda0 = -lambda.
/// c0 is the fiber constant as the classification states it; for
/// R^(1,0) with ssnm, lambdaN = -c0.
struct EinsteinProblem {
  BaseType base = BaseType::R10;
  ConnectionKind connection = ConnectionKind::ssnm;
  int l = 1;  // q - n of the fiber
  std::optional<Rational> lambda0;
  std::optional<Rational> c0;
};

struct SolutionFamily {
  std::string id;  // e.g. "4.4(2-1)"
  FamilyTag tag = FamilyTag::none;
  std::vector<std::string> constants;  // free constants appearing in h
  std::string h;                       // h(t), or "h(t)" when only an ODE is known
  /// For implicit families: h''(t) in terms of h(t), h'(t) and constants.
  std::string second_derivative;
  std::string lambda;          // Einstein constant of the product
  std::string fiber_constant;  // Ric2 = fiber_constant * g2
  std::vector<std::string> side_conditions;
  Assumptions assumptions;  // sampling ranges for the constants

  std::string to_string() const;
};

/// The two base space-times with the positivity assumption on h.
ManifoldSpec base_manifold(BaseType b);

/// Flat fiber with q - n = l: even directions +1, odd pairs g(zeta_2i-1, zeta_2i) = -1.
ManifoldSpec flat_fiber(int l, const std::string& tag = "");

/// A fiber with q - n = l and Ric = c g: flat for c = 0, otherwise
/// +-(dy0^2 + exp(2 k y0) flat) with k^2 = -+c/(l-1); for l = 1 a product of
/// the l = 2 and l = -1 fibers with the same constant. The sign is chosen at
/// a sampled point of the assumptions.
ManifoldSpec einstein_fiber(int l, const RationalFunction& c, const Assumptions& assume,
                            const std::string& tag = "");

/// Ric_IJ - lambda g_IJ over all frame pairs.
SuperMatrix einstein_residual(const Curvature& curvature, const SuperScalar& lambda);

/// Families per the classification for the base/connection pair. Throws
/// UnsupportedError for (R10, levi_civita) and DegenerateError for l = 0 on
/// (R12, ssnm). An unset lambda0 returns every family with its condition.
std::vector<SolutionFamily> classify(const EinsteinProblem& problem);

/// Governing scalar equations in h(t), h'(t), h''(t), lambda and the
/// fiber constant C; each must vanish. Pairs of (label, expression).
std::vector<std::pair<std::string, std::string>> governing_equations(const EinsteinProblem& p);

/// Substitutes the family into the governing equations, checks that its
/// fiber constant does not depend on t, and evaluates the full Einstein
/// residual on a warped product with an Einstein test fiber.
VerificationReport residual_check(const EinsteinProblem& problem, const SolutionFamily& family);

/// The 5x5 linear system obtained by differentiating
/// b1 e^{2kt} + b2 e^{-2kt} + b3 e^{kt} + b4 e^{-kt} - b5 = 0 up to four
/// times at t = 0; `literal_row` uses 416 k^4 for the b2 entry of the last row.
struct EliminationResult {
  int rank = 0;
  double min_singular = 0;
  double solution_norm = 0;  // norm of the least-squares solution of A b = 0
  double residual = 0;       // |A b|
};
EliminationResult exponential_elimination(double k, bool literal_row = false);

/// Random positive cubic warping functions violating the base equation,
/// each checked against the full Einstein residual on R^(1,0) x flat fiber
/// with ssnm. Samples run concurrently; results are in sample order.
struct SweepSample {
  std::string h;
  bool base_equation_violated = false;
  bool residual_nonzero = false;
};
std::vector<SweepSample> random_nonsolution_sweep(int l, const Rational& lambda0, int samples,
                                                  std::uint64_t seed);

}  // namespace superwarp
