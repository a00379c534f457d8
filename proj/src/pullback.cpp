#include "prgd/pullback.hpp"

#include "prgd/errors.hpp"

namespace prgd {

Pullback::Pullback(CostPtr problem, Point base) : problem_(std::move(problem)), base_(std::move(base)) {
  if (!problem_) throw InvalidArgument("Pullback: null problem");
  problem_->manifold().require_member(base_);
}

void Pullback::require_based_here(const Tangent& s, const char* what) const {
  if (!(s.base() == base_)) {
    throw InvalidArgument(std::string("Pullback::") + what + ": tangent vector is not based at the pullback's point");
  }
}

double Pullback::value(const Tangent& s) const {
  require_based_here(s, "value");
  return problem_->value(manifold().retract(base_, s));
}

Tangent Pullback::gradient(const Tangent& s) const {
  require_based_here(s, "gradient");
  const Point y = manifold().retract(base_, s);
  const Tangent grad = problem_->riemannian_gradient(y);
  if (!grad.coords().allFinite()) throw NumericalFailure("Pullback::gradient: non-finite gradient");
  return manifold().retraction_adjoint(base_, s, grad);
}

Tangent Pullback::from_intrinsic(const Vector& c) const {
  if (c.size() != manifold().intrinsic_dim()) {
    throw InvalidArgument("Pullback::from_intrinsic: dimension mismatch");
  }
  return manifold().project(base_, basis() * c);
}

Vector Pullback::to_intrinsic(const Tangent& s) const {
  require_based_here(s, "to_intrinsic");
  return basis().transpose() * s.coords();
}

SymMatrix Pullback::hessian_at(const Tangent& s, double h) const {
  require_based_here(s, "hessian_at");
  const Vector shift = s.coords();
  const Matrix b = basis();
  const ScalarField phi = [this, &shift, &b](const Vector& c) {
    return value(manifold().project(base_, shift + b * c));
  };
  return fd_hessian(phi, Vector::Zero(b.cols()), h);
}

SymMatrix Pullback::hessian_at_zero(double h) const { return hessian_at(Tangent::zero(base_), h); }

}  // namespace prgd
