#pragma once

#include <functional>

#include <Eigen/Dense>

#include "prgd/rng.hpp"

namespace prgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Scalar function on a coordinate vector; used by the finite-difference
/// oracles.
using ScalarField = std::function<double(const Vector&)>;

inline constexpr double kDefaultGradientStep = 1e-5;
inline constexpr double kDefaultHessianStep = 1e-4;
/// Largest dimension accepted by the dense eigensolver.
inline constexpr Eigen::Index kMaxDenseDim = 2000;

bool all_finite(const Vector& v);

/// Throws NumericalFailure naming `what` if `v` holds a NaN or infinity.
void require_finite(const Vector& v, const char* what);

/// Dense symmetric matrix.
///
/// Construction checks finiteness and symmetry (to 1e-12 relative to the
/// largest entry) and stores the exactly symmetric part (M + M^T) / 2.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix diagonal(const Vector& d);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  Vector apply(const Vector& v) const { return m_ * v; }
  double quadratic_form(const Vector& v) const { return v.dot(m_ * v); }

 private:
  Matrix m_;
};

struct EigenPair {
  double value;
  Vector vector;  // unit norm
};

/// Algebraically smallest eigenpair. The residual ||m v - lambda v|| is
/// checked against 1e-9 ||m||; a miss is reported as NumericalFailure.
EigenPair min_eigpair(const SymMatrix& m);

/// Largest |eigenvalue|, i.e. the spectral norm.
double operator_norm(const SymMatrix& m);

/// All eigenvalues in ascending order with matching unit eigenvectors as
/// columns.
struct Spectrum {
  Vector values;
  Matrix vectors;
};
Spectrum eigendecompose(const SymMatrix& m);

/// Central-difference gradient of `phi` at `s`.
Vector fd_gradient(const ScalarField& phi, const Vector& s,
                   double h = kDefaultGradientStep);

/// Central-difference Hessian of `phi` at `s`, symmetrized.
SymMatrix fd_hessian(const ScalarField& phi, const Vector& s,
                     double h = kDefaultHessianStep);

/// Vector of `d` independent standard normals.
Draw<Vector> sample_gaussian(Eigen::Index d, const RngStream& rng);

/// Uniform sample from the closed unit ball of R^d: normalized Gaussian
/// direction scaled by U^(1/d).
Draw<Vector> sample_unit_ball(Eigen::Index d, const RngStream& rng);

/// Haar-random rotation (orthogonal, det = +1) from the QR factorization of a
/// Gaussian matrix with the sign convention that makes R's diagonal positive.
Draw<Matrix> sample_rotation(Eigen::Index d, const RngStream& rng);

}  // namespace prgd
