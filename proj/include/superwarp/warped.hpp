#pragma once

// Super warped products M1 x_h M2 and the block formulas for their
// Levi-Civita and ssnm connections, curvature and Ricci tensors.

#include "superwarp/curvature.hpp"
#include "superwarp/report.hpp"

#include <memory>
#include <variant>

namespace superwarp {

enum class PLocation { none, base, fiber };
std::string to_string(PLocation p);

struct WarpedSpec {
  std::string name;
  ManifoldSpec base;
  ManifoldSpec fiber;
  std::string h = "h(t)";  // expression in the base coordinates
  PLocation p_location = PLocation::none;
  std::string p;           // vector field on the factor named by p_location
};

/// A statement does not apply to a spec (e.g. P on the wrong factor).
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Block { base, fiber };

/// The assembled product with the factor-intrinsic data the closed forms
/// use. Connections and curvature are built on first use.
class WarpedProduct {
 public:
  explicit WarpedProduct(WarpedSpec spec);

  const WarpedSpec& spec() const { return spec_; }
  const ManifoldSpec& product() const { return product_; }
  const ManifoldSpec& base() const { return spec_.base; }
  const ManifoldSpec& fiber() const { return spec_.fiber; }
  const Chart& chart() const { return product_.chart; }

  /// Warping function on the base chart and lifted to the product.
  const SuperScalar& h_base() const { return h_base_; }
  const SuperScalar& h() const { return h_; }
  /// P on its factor and lifted (zero field when absent).
  const VectorField& p_factor() const { return p_factor_; }
  const VectorField& p() const { return p_; }
  PLocation p_location() const { return spec_.p_location; }

  int base_dim() const { return base().dim(); }
  int fiber_dim() const { return fiber().dim(); }
  /// Product coordinate index of the k-th coordinate of a block.
  int index(Block b, int k) const { return b == Block::base ? k : base_dim() + k; }
  int block_dim(Block b) const { return b == Block::base ? base_dim() : fiber_dim(); }

  VectorField lift(Block b, const VectorField& v) const;
  SuperScalar lift(Block b, const SuperScalar& f) const;
  /// Inverse of lift; DomainError if the field has components in the other block.
  VectorField restrict(Block b, const VectorField& v) const;

  const Connection& base_lc() const;
  const Connection& base_ssnm() const;
  const Connection& fiber_lc() const;
  const Curvature& lc() const;
  const Curvature& ssnm() const;
  const Curvature& base_lc_curv() const;
  const Curvature& base_ssnm_curv() const;
  const Curvature& fiber_lc_curv() const;

 private:
  WarpedSpec spec_;
  ManifoldSpec product_;
  SuperScalar h_base_, h_;
  VectorField p_factor_, p_;
  mutable std::mutex mu_;
  mutable std::unique_ptr<Connection> base_lc_, base_ssnm_, fiber_lc_;
  mutable std::unique_ptr<Curvature> lc_, ssnm_, base_lc_curv_, base_ssnm_curv_, fiber_lc_curv_;
};

/// g1 + h^2 g2 on the concatenated chart. Throws DomainError when h is not
/// positive at sampled admissible points or the metric parities differ.
ManifoldSpec build_warped(const WarpedSpec& spec);

using FieldOrScalar = std::variant<VectorField, SuperScalar>;

/// Statement items, e.g. "3.1(4)", "3.5(5)", "3.5(5s)" (the |g| = |P| = 0 form).
std::vector<std::string> statement_items(const std::string& statement_id);
const std::vector<std::string>& statement_ids();

/// Right-hand side of one item from factor-intrinsic data only. Arguments
/// are product fields in the statement's slots; Ricci items take frames.
FieldOrScalar closed_form(const WarpedProduct& w, const std::string& item,
                          const std::vector<VectorField>& args);

/// Left-hand side computed directly on the product.
FieldOrScalar direct_value(const WarpedProduct& w, const std::string& item,
                           const std::vector<VectorField>& args);

/// Runs every item of a statement on every frame tuple of its block pattern.
/// Throws HypothesisError if the spec does not meet the statement's hypotheses.
VerificationReport verify_statement(const std::string& statement_id, const WarpedProduct& w);

/// Whether the spec meets the hypotheses of a statement.
bool statement_applies(const std::string& statement_id, const WarpedProduct& w);

}  // namespace superwarp
