#include "prgd/manifold.hpp"

#include <cmath>
#include <sstream>

#include "prgd/errors.hpp"

namespace prgd {

namespace {

constexpr double kUnitNormTol = 1e-12;
constexpr double kTangencyTol = 1e-10;

std::string dim_message(const char* what, Eigen::Index want, Eigen::Index got) {
  std::ostringstream os;
  os << what << ": dimension mismatch (expected " << want << ", got " << got << ")";
  return os.str();
}

// Householder vector v with (I - 2 v v^T / v^T v) x = -sign(x_k) e_k, where k
// is the index of the largest |x_k|. Returns k through `pivot`.
Vector householder_for(const Vector& x, Eigen::Index& pivot) {
  x.cwiseAbs().maxCoeff(&pivot);
  Vector v = x;
  v(pivot) += x(pivot) >= 0.0 ? 1.0 : -1.0;
  return v;
}

}  // namespace

std::string_view to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::euclidean:
      return "euclidean";
    case ManifoldKind::sphere:
      return "sphere";
  }
  return "unknown";
}

Point::Point(ManifoldKind kind, Vector coords) : kind_(kind), coords_(std::move(coords)) {
  if (coords_.size() < 1) throw InvalidArgument("Point: empty coordinates");
  if (!coords_.allFinite()) throw InvalidArgument("Point: non-finite coordinate");
  if (kind_ == ManifoldKind::sphere) {
    const double dev = std::abs(coords_.norm() - 1.0);
    if (dev > kUnitNormTol) {
      std::ostringstream os;
      os << "Point: sphere point has | ||x|| - 1 | = " << dev;
      throw InvalidArgument(os.str());
    }
  }
}

Tangent::Tangent(Point base, Vector coords) : base_(std::move(base)), coords_(std::move(coords)) {
  if (coords_.size() != base_.dim()) {
    throw InvalidArgument(dim_message("Tangent", base_.dim(), coords_.size()));
  }
  if (!coords_.allFinite()) throw InvalidArgument("Tangent: non-finite coordinate");
  if (base_.kind() == ManifoldKind::sphere) {
    const double off = std::abs(base_.coords().dot(coords_));
    if (off > kTangencyTol * (1.0 + coords_.norm())) {
      std::ostringstream os;
      os << "Tangent: vector is not tangent to the sphere (|x^T s| = " << off << ")";
      throw InvalidArgument(os.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Manifold

Point Manifold::point(Vector coords) const {
  if (coords.size() != ambient_dim_) {
    throw InvalidArgument(dim_message("Manifold::point", ambient_dim_, coords.size()));
  }
  return Point(kind(), std::move(coords));
}

void Manifold::require_member(const Point& x) const {
  if (x.kind() != kind()) {
    throw InvalidArgument("point lives on " + std::string(to_string(x.kind())) + ", expected " +
                          std::string(to_string(kind())));
  }
  if (x.dim() != ambient_dim_) {
    throw InvalidArgument(dim_message("point", ambient_dim_, x.dim()));
  }
}

void Manifold::require_tangent_at(const Point& x, const Tangent& s, const char* what) const {
  require_member(x);
  if (!(s.base() == x)) {
    throw InvalidArgument(std::string(what) + ": tangent vector is based at a different point");
  }
}

double Manifold::inner(const Tangent& u, const Tangent& v) const {
  if (!(u.base() == v.base())) {
    throw InvalidArgument("inner: tangent vectors have different base points");
  }
  require_member(u.base());
  return u.coords().dot(v.coords());
}

Draw<Tangent> Manifold::sample_ball(const Point& x, double radius, const RngStream& rng) const {
  require_member(x);
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("sample_ball: radius must be finite and non-negative");
  }
  auto [u, next] = sample_unit_ball(intrinsic_dim(), rng);
  if (radius == 0.0) return {Tangent::zero(x), next};
  return {project(x, radius * embed(x, u)), next};
}

double Manifold::check_second_order(const Point& x, const Tangent& s, double h) const {
  require_tangent_at(x, s, "check_second_order");
  if (!(h > 0.0)) throw InvalidArgument("check_second_order: step must be positive");
  if (std::abs(s.norm() - 1.0) > 1e-10) {
    throw InvalidArgument("check_second_order: direction must have unit norm");
  }
  const Point plus = retract(x, Tangent(x, h * s.coords()));
  const Point mid = retract(x, Tangent::zero(x));
  const Point minus = retract(x, Tangent(x, (-h) * s.coords()));
  const Vector accel = ((plus.coords() - 2.0 * mid.coords()) + minus.coords()) / (h * h);
  return project(mid, accel).norm();
}

// ---------------------------------------------------------------------------
// EuclideanSpace

EuclideanSpace::EuclideanSpace(Eigen::Index dim) : Manifold(dim) {
  if (dim < 1) throw InvalidArgument("EuclideanSpace: dimension must be >= 1");
}

Tangent EuclideanSpace::project(const Point& x, const Vector& v) const {
  require_member(x);
  if (v.size() != ambient_dim()) throw InvalidArgument(dim_message("project", ambient_dim(), v.size()));
  return Tangent(x, v);
}

Point EuclideanSpace::retract(const Point& x, const Tangent& s) const {
  require_tangent_at(x, s, "retract");
  return Point(ManifoldKind::euclidean, x.coords() + s.coords());
}

void Manifold::require_based_at_retraction(const Point& x, const Tangent& s, const Tangent& w) const {
  const Vector y = retract(x, s).coords();
  if (!((w.base().coords() - y).norm() <= 1e-12 * (1.0 + y.norm()))) {
    throw InvalidArgument("retraction_adjoint: w is not based at Retr_x(s)");
  }
}

Tangent EuclideanSpace::retraction_adjoint(const Point& x, const Tangent& s, const Tangent& w) const {
  require_tangent_at(x, s, "retraction_adjoint");
  if (w.dim() != ambient_dim()) throw InvalidArgument("retraction_adjoint: dimension mismatch");
  require_based_at_retraction(x, s, w);
  return Tangent(x, w.coords());
}

Matrix EuclideanSpace::tangent_basis(const Point& x) const {
  require_member(x);
  return Matrix::Identity(ambient_dim(), ambient_dim());
}

double EuclideanSpace::check_second_order(const Point& x, const Tangent& s, double h) const {
  require_tangent_at(x, s, "check_second_order");
  // Retr_x(s) = x + s commutes with translation, so the curve through the
  // origin has the same acceleration and its second difference is free of
  // the rounding of x + t s.
  const Point origin(ManifoldKind::euclidean, Vector::Zero(ambient_dim()));
  return Manifold::check_second_order(origin, Tangent(origin, s.coords()), h);
}

Draw<Point> EuclideanSpace::random_point(const RngStream& rng) const {
  auto [g, next] = sample_gaussian(ambient_dim(), rng);
  return {Point(ManifoldKind::euclidean, std::move(g)), next};
}

Vector EuclideanSpace::embed(const Point&, const Vector& u) const { return u; }

// ---------------------------------------------------------------------------
// Sphere

Sphere::Sphere(Eigen::Index ambient_dim) : Manifold(ambient_dim) {
  if (ambient_dim < 2) throw InvalidArgument("Sphere: ambient dimension must be >= 2");
}

Tangent Sphere::project(const Point& x, const Vector& v) const {
  require_member(x);
  if (v.size() != ambient_dim()) throw InvalidArgument(dim_message("project", ambient_dim(), v.size()));
  const Vector& xc = x.coords();
  Vector s = v - xc.dot(v) * xc;
  // Second pass removes the residual normal component left by cancellation.
  s -= xc.dot(s) * xc;
  return Tangent(x, std::move(s));
}

Point Sphere::retract(const Point& x, const Tangent& s) const {
  require_tangent_at(x, s, "retract");
  Vector y = x.coords() + s.coords();
  const double norm = y.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NumericalFailure("retract: ||x + s|| is not a positive finite number");
  }
  y /= norm;
  return Point(ManifoldKind::sphere, std::move(y));
}

Tangent Sphere::retraction_adjoint(const Point& x, const Tangent& s, const Tangent& w) const {
  require_tangent_at(x, s, "retraction_adjoint");
  if (w.base().kind() != ManifoldKind::sphere || w.dim() != ambient_dim()) {
    throw InvalidArgument("retraction_adjoint: w must be tangent to the same sphere");
  }
  require_based_at_retraction(x, s, w);
  // D Retr_x(s)[u] = Proj_y(u) / ||x + s||, so its adjoint is Proj_x(w) / ||x + s||.
  const double scale = (x.coords() + s.coords()).norm();
  Tangent projected = project(x, w.coords());
  return Tangent(x, projected.coords() / scale);
}

Matrix Sphere::tangent_basis(const Point& x) const {
  require_member(x);
  const Eigen::Index n = ambient_dim();
  Eigen::Index pivot = 0;
  const Vector v = householder_for(x.coords(), pivot);
  const double scale = 2.0 / v.squaredNorm();
  Matrix basis(n, n - 1);
  for (Eigen::Index i = 0, col = 0; i < n; ++i) {
    if (i == pivot) continue;
    Vector e = -scale * v(i) * v;
    e(i) += 1.0;
    basis.col(col++) = e;
  }
  return basis;
}

Vector Sphere::embed(const Point& x, const Vector& u) const {
  const Eigen::Index n = ambient_dim();
  Eigen::Index pivot = 0;
  const Vector v = householder_for(x.coords(), pivot);
  Vector w = Vector::Zero(n);
  for (Eigen::Index i = 0, j = 0; i < n; ++i) {
    if (i != pivot) w(i) = u(j++);
  }
  return w - (2.0 * v.dot(w) / v.squaredNorm()) * v;
}

Draw<Point> Sphere::random_point(const RngStream& rng) const {
  auto [g, next] = sample_gaussian(ambient_dim(), rng);
  double norm = g.norm();
  while (norm == 0.0) {
    auto redraw = sample_gaussian(ambient_dim(), next);
    g = std::move(redraw.value);
    next = redraw.next;
    norm = g.norm();
  }
  return {Point(ManifoldKind::sphere, g / norm), next};
}

// ---------------------------------------------------------------------------

ManifoldPtr make_manifold(ManifoldKind kind, Eigen::Index ambient_dim) {
  switch (kind) {
    case ManifoldKind::euclidean:
      return std::make_shared<EuclideanSpace>(ambient_dim);
    case ManifoldKind::sphere:
      return std::make_shared<Sphere>(ambient_dim);
  }
  throw InvalidArgument("make_manifold: unknown manifold kind");
}

}  // namespace prgd
