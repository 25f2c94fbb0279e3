#pragma once

// Affine connections given by Christoffel symbols on the chart frame, and
// the first-order operators built from them.

#include "superwarp/geometry.hpp"

#include <optional>

namespace superwarp {

enum class ConnectionKind { levi_civita, ssnm, custom };
std::string to_string(ConnectionKind k);

/// nabla_{d_I} d_J = sum_K gamma(I, J, K) d_K.
class Connection {
 public:
  Connection(ManifoldSpec m, ConnectionKind kind, std::vector<SuperScalar> gamma,
             std::optional<VectorField> p = {});

  const ManifoldSpec& manifold() const { return m_; }
  const Chart& chart() const { return m_.chart; }
  ConnectionKind kind() const { return kind_; }
  const std::optional<VectorField>& P() const { return p_; }
  int dim() const { return m_.dim(); }

  const SuperScalar& gamma(int i, int j, int k) const {
    return gamma_[(static_cast<std::size_t>(i) * dim() + j) * dim() + k];
  }
  const std::vector<SuperScalar>& gamma_table() const { return gamma_; }

 private:
  ManifoldSpec m_;
  ConnectionKind kind_;
  std::vector<SuperScalar> gamma_;
  std::optional<VectorField> p_;
};

/// Koszul formula on frame fields, solved with the inverse metric.
Connection levi_civita(const ManifoldSpec& m);

/// nabla^_X Y = nabla^L_X Y + X . g(Y, P). Requires |g| + |P| = 0.
Connection ssnm_connection(const ManifoldSpec& m, const VectorField& p);

/// Arbitrary symbols, e.g. perturbations for negative tests.
Connection custom_connection(const ManifoldSpec& m, std::vector<SuperScalar> gamma);

/// Extends the symbols by linearity in X and the graded Leibniz rule in Y.
VectorField covariant_derivative(const Connection& c, const VectorField& x,
                                 const VectorField& y);

/// nabla_X Y - (-1)^{|X||Y|} nabla_Y X - [X, Y].
VectorField torsion(const Connection& c, const VectorField& x, const VectorField& y);

/// X<Y,Z> - <nabla_X Y, Z> - (-1)^{|X||Y|} <Y, nabla_X Z>.
SuperScalar nonmetricity_residual(const Connection& c, const VectorField& x,
                                  const VectorField& y, const VectorField& z);

/// pi(Z) = g(Z, P).
SuperScalar pi_form(const ManifoldSpec& m, const VectorField& p, const VectorField& z);

/// Right-hand side of the torsion identity of the ssnm connection:
/// X . g(Y,P) - (-1)^{|X||Y|} Y . g(X,P).
VectorField ssnm_torsion_expected(const ManifoldSpec& m, const VectorField& p,
                                  const VectorField& x, const VectorField& y);

/// Right-hand side of the non-metricity identity of the ssnm connection:
/// -[(-1)^{|Y||X|} g(Y,P) g(X,Z) + (-1)^{|X||Y|+|Z|(|X|+|Y|)} g(Z,P) g(Y,X)].
SuperScalar ssnm_nonmetricity_expected(const ManifoldSpec& m, const VectorField& p,
                                       const VectorField& x, const VectorField& y,
                                       const VectorField& z);

/// Div X = sum_I (-1)^{|I|(|I|+|X|)} (nabla_{d_I} X)^I.
SuperScalar divergence(const Connection& c, const VectorField& x);

/// Div_L(grad f) with the Levi-Civita connection of the manifold.
SuperScalar laplacian(const ManifoldSpec& m, const SuperScalar& f);
SuperScalar laplacian(const Connection& lc, const SuperScalar& f);

/// XY(f) - (nabla_X Y)(f).
SuperScalar hessian(const Connection& c, const SuperScalar& f, const VectorField& x,
                    const VectorField& y);

}  // namespace superwarp
