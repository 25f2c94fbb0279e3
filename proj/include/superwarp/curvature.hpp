#pragma once

// Riemann and Ricci tensors of a connection, with frame components cached.

#include "superwarp/connection.hpp"

#include <memory>
#include <mutex>

namespace superwarp {

/// R(X,Y)Z = nabla_X nabla_Y Z - (-1)^{|X||Y|} nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
VectorField riemann(const Connection& c, const VectorField& x, const VectorField& y,
                    const VectorField& z);

/// Ric(X,Y) = sum_I (-1)^{|I|(|I|+|X|+|Y|)} 1/2 [R(d_I,X)Y + (-1)^{|X||Y|} R(d_I,Y)X]^I.
SuperScalar ricci(const Connection& c, const VectorField& x, const VectorField& y);

struct ComponentRow {
  std::vector<int> indices;
  std::string expression;
};

/// Frame components of R and Ric of one connection, computed on demand and
/// kept for the lifetime of the object. Safe to query from several threads.
class Curvature {
 public:
  explicit Curvature(Connection c);

  const Connection& connection() const { return conn_; }

  /// R(d_I, d_J) d_K.
  const VectorField& frame(int i, int j, int k) const;
  /// Ric(d_A, d_B).
  const SuperScalar& ricci_frame(int a, int b) const;

  /// Nonzero components as {indices, expression} rows in index order.
  std::vector<ComponentRow> riemann_rows() const;
  std::vector<ComponentRow> ricci_rows() const;

 private:
  Connection conn_;
  int n_;
  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<VectorField>> r_;
  mutable std::vector<std::unique_ptr<SuperScalar>> ric_;
};

/// R^(X,Y)Z minus the right-hand side of the curvature comparison between
/// the ssnm connection of P and the Levi-Civita connection:
///   R^L(X,Y)Z + (-1)^{(|X|+|Y|)|Z|} [g(Z, nabla^L_X P) Y - (-1)^{|X||Y|} g(Z, nabla^L_Y P) X]
///   + (-1)^{(|X|+|Y|)|Z|} pi(Z) [(-1)^{|X||Y|} pi(Y) X - pi(X) Y].
VectorField prop215_check(const ManifoldSpec& m, const VectorField& p, const VectorField& x,
                          const VectorField& y, const VectorField& z);
/// Same, reusing already built Levi-Civita and ssnm connections.
VectorField prop215_check(const Connection& lc, const Connection& hat, const VectorField& x,
                          const VectorField& y, const VectorField& z);

}  // namespace superwarp
