#pragma once

#include "prgd/problems.hpp"

namespace prgd {

/// The pullback f o Retr_x of a cost function to the tangent space at a fixed
/// base point x. Evaluations are pure.
class Pullback {
 public:
  Pullback(CostPtr problem, Point base);

  const CostFunction& problem() const noexcept { return *problem_; }
  const Point& base() const noexcept { return base_; }
  const Manifold& manifold() const noexcept { return problem_->manifold(); }

  /// f(Retr_x(s)).
  double value(const Tangent& s) const;

  /// T*_{x,s} grad f(Retr_x(s)).
  Tangent gradient(const Tangent& s) const;

  /// Orthonormal basis of T_x used for every intrinsic-coordinate view below.
  Matrix basis() const { return manifold().tangent_basis(base_); }

  /// Finite-difference Hessian at s in intrinsic coordinates of basis().
  SymMatrix hessian_at(const Tangent& s, double h = kDefaultHessianStep) const;
  SymMatrix hessian_at_zero(double h = kDefaultHessianStep) const;

  /// Intrinsic coordinates c <-> tangent vector B c.
  Tangent from_intrinsic(const Vector& c) const;
  Vector to_intrinsic(const Tangent& s) const;

 private:
  void require_based_here(const Tangent& s, const char* what) const;

  CostPtr problem_;
  Point base_;
};

}  // namespace prgd
