#include "prgd/numerics.hpp"

#include <cmath>
#include <sstream>

#include "prgd/errors.hpp"

namespace prgd {

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw NumericalFailure(std::string(what) + " contains a non-finite entry");
  }
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument("SymMatrix: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", not square");
  }
  if (m.rows() < 1) throw InvalidArgument("SymMatrix: empty matrix");
  if (!m.allFinite()) throw InvalidArgument("SymMatrix: non-finite entry");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream os;
    os << "SymMatrix: not symmetric (max |m_ij - m_ji| = " << asym << ")";
    throw InvalidArgument(os.str());
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  return SymMatrix(Matrix(d.asDiagonal()));
}

Spectrum eigendecompose(const SymMatrix& m) {
  if (m.dim() > kMaxDenseDim) {
    throw InvalidArgument("eigendecompose: dimension " + std::to_string(m.dim()) +
                          " exceeds the dense limit " + std::to_string(kMaxDenseDim));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigendecompose: symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenPair min_eigpair(const SymMatrix& m) {
  Spectrum spec = eigendecompose(m);
  EigenPair pair{spec.values(0), spec.vectors.col(0)};
  pair.vector.normalize();

  const double norm = spec.values.cwiseAbs().maxCoeff();
  const double residual = (m.apply(pair.vector) - pair.value * pair.vector).norm();
  if (residual > 1e-9 * norm) {
    std::ostringstream os;
    os << "min_eigpair: residual " << residual << " exceeds 1e-9 * ||m|| = " << 1e-9 * norm;
    throw NumericalFailure(os.str());
  }
  return pair;
}

double operator_norm(const SymMatrix& m) {
  if (m.dim() > kMaxDenseDim) {
    throw InvalidArgument("operator_norm: dimension exceeds the dense limit");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("operator_norm: symmetric eigensolver did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

double eval_checked(const ScalarField& phi, const Vector& s) {
  const double v = phi(s);
  if (!std::isfinite(v)) {
    throw NumericalFailure("finite differences: function returned a non-finite value");
  }
  return v;
}

void check_step(double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite differences: step must be positive");
}

}  // namespace

Vector fd_gradient(const ScalarField& phi, const Vector& s, double h) {
  check_step(h);
  Vector g(s.size());
  Vector probe = s;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    probe(i) = s(i) + h;
    const double plus = eval_checked(phi, probe);
    probe(i) = s(i) - h;
    const double minus = eval_checked(phi, probe);
    probe(i) = s(i);
    g(i) = (plus - minus) / (2.0 * h);
  }
  return g;
}

SymMatrix fd_hessian(const ScalarField& phi, const Vector& s, double h) {
  check_step(h);
  const Eigen::Index n = s.size();
  Matrix hess(n, n);
  const double center = eval_checked(phi, s);
  Vector probe = s;
  for (Eigen::Index i = 0; i < n; ++i) {
    probe(i) = s(i) + h;
    const double plus = eval_checked(phi, probe);
    probe(i) = s(i) - h;
    const double minus = eval_checked(phi, probe);
    probe(i) = s(i);
    hess(i, i) = (plus - 2.0 * center + minus) / (h * h);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double corner[2][2];
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          probe(i) = s(i) + (a == 0 ? h : -h);
          probe(j) = s(j) + (b == 0 ? h : -h);
          corner[a][b] = eval_checked(phi, probe);
        }
      }
      probe(i) = s(i);
      probe(j) = s(j);
      const double mixed = (corner[0][0] - corner[0][1] - corner[1][0] + corner[1][1]) / (4.0 * h * h);
      hess(i, j) = mixed;
      hess(j, i) = mixed;
    }
  }
  return SymMatrix(hess);
}

Draw<Vector> sample_gaussian(Eigen::Index d, const RngStream& rng) {
  Vector g(d);
  RngStream state = rng;
  for (Eigen::Index i = 0; i < d; ++i) {
    auto draw = state.gaussian();
    g(i) = draw.value;
    state = draw.next;
  }
  return {std::move(g), state};
}

Draw<Vector> sample_unit_ball(Eigen::Index d, const RngStream& rng) {
  if (d < 1) throw InvalidArgument("sample_unit_ball: dimension must be >= 1");
  auto [direction, state] = sample_gaussian(d, rng);
  double norm = direction.norm();
  // A zero Gaussian vector has probability zero; redraw rather than divide.
  while (norm == 0.0) {
    auto redraw = sample_gaussian(d, state);
    direction = std::move(redraw.value);
    state = redraw.next;
    norm = direction.norm();
  }
  auto [u, after] = state.uniform();
  const double radius = std::pow(u, 1.0 / static_cast<double>(d));
  return {direction * (radius / norm), after};
}

Draw<Matrix> sample_rotation(Eigen::Index d, const RngStream& rng) {
  Matrix g(d, d);
  RngStream state = rng;
  for (Eigen::Index j = 0; j < d; ++j) {
    auto col = sample_gaussian(d, state);
    g.col(j) = col.value;
    state = col.next;
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return {std::move(q), state};
}

}  // namespace prgd
