#pragma once

#include <memory>
#include <string_view>

#include "prgd/numerics.hpp"

namespace prgd {

enum class ManifoldKind { euclidean, sphere };

std::string_view to_string(ManifoldKind kind);

/// A point of R^n or of the unit sphere S^{n-1}, in ambient coordinates.
///
/// Sphere points must have unit norm to 1e-12.
class Point {
 public:
  Point(ManifoldKind kind, Vector coords);

  ManifoldKind kind() const noexcept { return kind_; }
  const Vector& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.size(); }

  friend bool operator==(const Point& a, const Point& b) {
    return a.kind_ == b.kind_ && a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

 private:
  ManifoldKind kind_;
  Vector coords_;
};

/// A tangent vector at `base`, stored in ambient coordinates.
///
/// On the sphere the coordinates satisfy |x^T s| <= 1e-10 (1 + ||s||).
class Tangent {
 public:
  Tangent(Point base, Vector coords);

  static Tangent zero(const Point& base) { return Tangent(base, Vector::Zero(base.dim())); }

  const Point& base() const noexcept { return base_; }
  const Vector& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.size(); }
  double norm() const { return coords_.norm(); }

 private:
  Point base_;
  Vector coords_;
};

/// A Riemannian submanifold of R^n with the induced metric and a retraction.
///
/// Both shipped manifolds use metric-projection retractions, which are second
/// order. The differential of the retraction is never needed in closed form;
/// only its adjoint is, for the pullback gradient.
class Manifold {
 public:
  explicit Manifold(Eigen::Index ambient_dim) : ambient_dim_(ambient_dim) {}
  virtual ~Manifold() = default;

  virtual ManifoldKind kind() const noexcept = 0;
  Eigen::Index ambient_dim() const noexcept { return ambient_dim_; }
  virtual Eigen::Index intrinsic_dim() const noexcept = 0;

  /// Validates `coords` and wraps them as a point of this manifold.
  Point point(Vector coords) const;
  /// Throws InvalidArgument unless `x` belongs to this manifold.
  void require_member(const Point& x) const;

  double inner(const Tangent& u, const Tangent& v) const;

  /// Orthogonal projection of an ambient vector onto T_x.
  virtual Tangent project(const Point& x, const Vector& v) const = 0;

  virtual Point retract(const Point& x, const Tangent& s) const = 0;

  /// Adjoint of the differential of Retr_x at s, applied to w in T_y with
  /// y = Retr_x(s). Returns a tangent vector at x.
  virtual Tangent retraction_adjoint(const Point& x, const Tangent& s, const Tangent& w) const = 0;

  /// Columns form an orthonormal basis of T_x (ambient_dim x intrinsic_dim).
  virtual Matrix tangent_basis(const Point& x) const = 0;

  /// Uniform sample from the closed ball of the given radius in T_x.
  Draw<Tangent> sample_ball(const Point& x, double radius, const RngStream& rng) const;

  /// Finite-difference estimate of ||gamma''(0)|| projected on T_x for the
  /// retraction curve gamma(t) = Retr_x(t s). Requires ||s|| = 1.
  virtual double check_second_order(const Point& x, const Tangent& s, double h) const;

  /// Random point: uniform on the sphere, standard Gaussian in R^n.
  virtual Draw<Point> random_point(const RngStream& rng) const = 0;

 protected:
  void require_tangent_at(const Point& x, const Tangent& s, const char* what) const;
  void require_based_at_retraction(const Point& x, const Tangent& s, const Tangent& w) const;
  /// Maps intrinsic coordinates u (length intrinsic_dim) into T_x.
  virtual Vector embed(const Point& x, const Vector& u) const = 0;

 private:
  Eigen::Index ambient_dim_;
};

class EuclideanSpace final : public Manifold {
 public:
  explicit EuclideanSpace(Eigen::Index dim);

  ManifoldKind kind() const noexcept override { return ManifoldKind::euclidean; }
  Eigen::Index intrinsic_dim() const noexcept override { return ambient_dim(); }

  Tangent project(const Point& x, const Vector& v) const override;
  Point retract(const Point& x, const Tangent& s) const override;
  Tangent retraction_adjoint(const Point& x, const Tangent& s, const Tangent& w) const override;
  Matrix tangent_basis(const Point& x) const override;
  double check_second_order(const Point& x, const Tangent& s, double h) const override;
  Draw<Point> random_point(const RngStream& rng) const override;

 protected:
  Vector embed(const Point& x, const Vector& u) const override;
};

/// Unit sphere S^{n-1} in R^n with Retr_x(s) = (x + s) / ||x + s||.
class Sphere final : public Manifold {
 public:
  explicit Sphere(Eigen::Index ambient_dim);

  ManifoldKind kind() const noexcept override { return ManifoldKind::sphere; }
  Eigen::Index intrinsic_dim() const noexcept override { return ambient_dim() - 1; }

  Tangent project(const Point& x, const Vector& v) const override;
  Point retract(const Point& x, const Tangent& s) const override;
  Tangent retraction_adjoint(const Point& x, const Tangent& s, const Tangent& w) const override;
  Matrix tangent_basis(const Point& x) const override;
  Draw<Point> random_point(const RngStream& rng) const override;

 protected:
  Vector embed(const Point& x, const Vector& u) const override;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

ManifoldPtr make_manifold(ManifoldKind kind, Eigen::Index ambient_dim);

}  // namespace prgd
