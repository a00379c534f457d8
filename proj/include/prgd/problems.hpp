#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <memory>

#include "prgd/manifold.hpp"

namespace prgd {

/// Smooth cost f on a manifold. Implementations supply the value and the
/// Euclidean gradient of a smooth extension; the Riemannian gradient is its
/// tangent projection.
class CostFunction {
 public:
  virtual ~CostFunction() = default;

  virtual const Manifold& manifold() const noexcept = 0;
  virtual ManifoldPtr manifold_ptr() const noexcept = 0;

  virtual double value(const Point& x) const = 0;
  virtual Vector euclidean_gradient(const Point& x) const = 0;

  /// Throws NumericalFailure if the gradient is not finite.
  Tangent riemannian_gradient(const Point& x) const {
    const Vector g = euclidean_gradient(x);
    require_finite(g, "riemannian_gradient");
    return manifold().project(x, g);
  }
};

using CostPtr = std::shared_ptr<const CostFunction>;

/// Regularity constants of a problem in the sense of the pullback Lipschitz
/// conditions. `ball` is +infinity when the bounds hold globally.
struct ProblemConstants {
  double lip_grad;
  double lip_hess;
  double ball = std::numeric_limits<double>::infinity();
};

/// Dominant eigenvector of a symmetric A, posed as minimizing
/// f(x) = -1/2 x^T A x over the unit sphere.
class PcaProblem final : public CostFunction {
 public:
  explicit PcaProblem(SymMatrix a);

  const Manifold& manifold() const noexcept override { return *sphere_; }
  ManifoldPtr manifold_ptr() const noexcept override { return sphere_; }

  double value(const Point& x) const override;
  Vector euclidean_gradient(const Point& x) const override;

  const SymMatrix& matrix() const noexcept { return a_; }
  double norm_a() const noexcept { return norm_a_; }

  /// L = 5/2 ||A||, rho = 9 ||A||, valid on the whole tangent space.
  ProblemConstants constants() const noexcept;

  /// f* = -lambda_max(A) / 2.
  double optimal_value() const;

 private:
  void require_on_sphere(const Point& x) const;

  SymMatrix a_;
  double norm_a_;
  ManifoldPtr sphere_;
};

/// f(x) = 1/2 x^T H x on R^n, with H indefinite. The origin is a strict saddle.
class QuadraticSaddle final : public CostFunction {
 public:
  explicit QuadraticSaddle(SymMatrix h);

  const Manifold& manifold() const noexcept override { return *space_; }
  ManifoldPtr manifold_ptr() const noexcept override { return space_; }

  double value(const Point& x) const override;
  Vector euclidean_gradient(const Point& x) const override;

  const SymMatrix& matrix() const noexcept { return h_; }

  /// L = ||H|| exactly; the Hessian is constant so any rho >= 0 is valid.
  /// The returned rho is the caller-chosen nominal value.
  ProblemConstants constants(double nominal_rho) const;

 private:
  SymMatrix h_;
  ManifoldPtr space_;
};

/// diag(2, 1, 1 - 1/d, ..., 1 - (d-2)/d) conjugated by a seeded random
/// rotation. Eigenvector k is column k of `rotation`.
struct SyntheticSpectrum {
  SymMatrix matrix;
  Vector eigenvalues;  // descending
  Matrix rotation;
};
SyntheticSpectrum synthetic_pca_matrix(Eigen::Index d, const RngStream& rng);

/// Matrix text format: first non-comment line is n, followed by n rows of n
/// whitespace-separated decimals. '#' starts a comment. Asymmetry up to 1e-9
/// (relative to max(1, max |m_ij|)) is symmetrized away; more is rejected.
SymMatrix read_matrix(std::istream& in);
SymMatrix load_matrix(const std::filesystem::path& path);

/// Writes with 17 significant digits so that reading back is exact.
void write_matrix(std::ostream& out, const SymMatrix& m);
void save_matrix(const std::filesystem::path& path, const SymMatrix& m);

}  // namespace prgd
