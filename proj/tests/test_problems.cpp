#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "prgd/errors.hpp"
#include "prgd/problems.hpp"
#include "prgd/pullback.hpp"

namespace prgd {
namespace {

std::shared_ptr<PcaProblem> pca_diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return std::make_shared<PcaProblem>(SymMatrix::diagonal(v));
}

Point sphere_point(const Vector& v) { return Point(ManifoldKind::sphere, v.normalized()); }

TEST(Pca, Value) {
  const auto p = pca_diag({3, 1});
  EXPECT_DOUBLE_EQ(p->value(sphere_point(Vector{{1, 0}})), -1.5);
  const PcaProblem id(SymMatrix::identity(5));
  EXPECT_NEAR(id.value(sphere_point(Vector{{1, 2, 3, 4, 5}})), -0.5, 1e-15);
}

TEST(Pca, ValueMatchesDenseQuadraticForm) {
  const Matrix m = sample_gaussian(25, RngStream(1, 0)).value.reshaped(5, 5);
  const Matrix a = 0.5 * (m + m.transpose());
  const PcaProblem p{SymMatrix(a)};
  const Point x = p.manifold().random_point(RngStream(2, 0)).value;
  double q = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) q += x.coords()(i) * a(i, j) * x.coords()(j);
  EXPECT_NEAR(p.value(x), -0.5 * q, 1e-14);
}

TEST(Pca, RejectsOffSphere) {
  const auto p = pca_diag({3, 1});
  const Point e(ManifoldKind::euclidean, Vector{{1, 0}});
  EXPECT_THROW(p->value(e), InvalidArgument);
  EXPECT_THROW(p->euclidean_gradient(e), InvalidArgument);
  EXPECT_THROW(p->value(Point(ManifoldKind::sphere, Vector{{0, 0, 1}})), InvalidArgument);
}

TEST(Pca, RiemannianGradient) {
  const auto p = pca_diag({3, 1});
  EXPECT_EQ(p->riemannian_gradient(sphere_point(Vector{{0, 1}})).coords(), Vector::Zero(2));
  const Vector g = p->riemannian_gradient(sphere_point(Vector{{1, 1}})).coords();
  EXPECT_LE((g - Vector{{-1, 1}} / std::sqrt(2.0)).norm(), 1e-15);
}

TEST(Pca, GradientMatchesFiniteDifferences) {
  const SyntheticSpectrum syn = synthetic_pca_matrix(6, RngStream(3, 0));
  const auto p = std::make_shared<PcaProblem>(syn.matrix);
  const Point x = p->manifold().random_point(RngStream(4, 0)).value;
  const Pullback pb(p, x);
  const Vector fd = fd_gradient([&](const Vector& c) { return pb.value(pb.from_intrinsic(c)); }, Vector::Zero(5));
  const Vector g = pb.to_intrinsic(p->riemannian_gradient(x));
  EXPECT_LE((fd - g).norm(), 1e-6 * std::max(1.0, g.norm()));
}

TEST(Pca, GradientOrthogonalToPoint) {
  const SyntheticSpectrum syn = synthetic_pca_matrix(10, RngStream(5, 0));
  const PcaProblem p(syn.matrix);
  RngStream rng(6, 0);
  for (int i = 0; i < 100; ++i) {
    auto d = p.manifold().random_point(rng);
    rng = d.next;
    EXPECT_LE(std::abs(d.value.coords().dot(p.riemannian_gradient(d.value).coords())), 1e-12);
  }
}

TEST(Pca, CriticalPointsAreEigenvectors) {
  const SyntheticSpectrum syn = synthetic_pca_matrix(8, RngStream(7, 0));
  const PcaProblem p(syn.matrix);
  for (Eigen::Index k = 0; k < 8; ++k) {
    const Point v = sphere_point(syn.rotation.col(k));
    EXPECT_LE(p.riemannian_gradient(v).norm(), 1e-13) << "eigenvector " << k;
  }
  RngStream rng(8, 0);
  for (int i = 0; i < 100; ++i) {
    auto d = p.manifold().random_point(rng);
    rng = d.next;
    EXPECT_GT(p.riemannian_gradient(d.value).norm(), 0.0);
  }
}

TEST(Pca, Constants) {
  const auto two = pca_diag({2, 1, -1});
  EXPECT_DOUBLE_EQ(two->constants().lip_grad, 5.0);
  EXPECT_DOUBLE_EQ(two->constants().lip_hess, 18.0);
  EXPECT_TRUE(std::isinf(two->constants().ball));
  const auto three = pca_diag({3, 1});
  EXPECT_DOUBLE_EQ(three->constants().lip_grad, 7.5);
  EXPECT_DOUBLE_EQ(three->constants().lip_hess, 27.0);
  const PcaProblem zero(SymMatrix::zero(3));
  EXPECT_EQ(zero.constants().lip_grad, 0.0);
  EXPECT_EQ(zero.constants().lip_hess, 0.0);
  EXPECT_DOUBLE_EQ(three->optimal_value(), -1.5);
}

TEST(QuadraticSaddleProblem, ValueAndGradient) {
  const QuadraticSaddle q(SymMatrix::diagonal(Vector{{-1, 1}}));
  const Point origin(ManifoldKind::euclidean, Vector::Zero(2));
  EXPECT_EQ(q.value(origin), 0.0);
  EXPECT_EQ(q.euclidean_gradient(origin), Vector::Zero(2));
  const Point ones(ManifoldKind::euclidean, Vector{{1, 1}});
  EXPECT_EQ(q.value(ones), 0.0);
  EXPECT_EQ(q.euclidean_gradient(ones), (Vector{{-1, 1}}));
  const EigenPair e = min_eigpair(q.matrix());
  EXPECT_DOUBLE_EQ(e.value, -1.0);
  EXPECT_NEAR(std::abs(e.vector(0)), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(q.constants(0.5).lip_grad, 1.0);
  EXPECT_DOUBLE_EQ(q.constants(0.5).lip_hess, 0.5);
}

TEST(SyntheticSpectrum, EigenpairsAsDocumented) {
  const int d = 12;
  const SyntheticSpectrum syn = synthetic_pca_matrix(d, RngStream(9, 0));
  EXPECT_DOUBLE_EQ(syn.eigenvalues(0), 2.0);
  EXPECT_DOUBLE_EQ(syn.eigenvalues(1), 1.0);
  EXPECT_DOUBLE_EQ(syn.eigenvalues(d - 1), 1.0 - (d - 2.0) / d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Vector v = syn.rotation.col(k);
    EXPECT_LE((syn.matrix.apply(v) - syn.eigenvalues(k) * v).norm(), 1e-13);
  }
  EXPECT_NEAR(operator_norm(syn.matrix), 2.0, 1e-13);
}

TEST(MatrixIo, ParsesExamples) {
  std::istringstream a("2\n3 0\n0 1\n");
  EXPECT_EQ(read_matrix(a).matrix(), SymMatrix::diagonal(Vector{{3, 1}}).matrix());
  std::istringstream b("# scalar\n1\n5   # five\n");
  EXPECT_EQ(read_matrix(b).matrix(), Matrix::Constant(1, 1, 5.0));
}

TEST(MatrixIo, SymmetrizesTinyAsymmetry) {
  std::istringstream in("2\n1 0.5\n0.5000000000001 1\n");
  const SymMatrix m = read_matrix(in);
  EXPECT_EQ(m(0, 1), m(1, 0));
}

TEST(MatrixIo, RejectsWithLineNumbers) {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_matrix(in);
    } catch (const InvalidInput& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("2\n1 2\n3 1\n"), 3);
  EXPECT_EQ(line_of("2\n1 x\n0 1\n"), 2);
  EXPECT_EQ(line_of("2\n1 0 0\n0 1\n"), 2);
  EXPECT_NE(line_of("2\n1 0\n"), -1);
  EXPECT_NE(line_of(""), -1);
  EXPECT_NE(line_of("2\n1 0\n0 1\n7\n"), -1);
}

TEST(MatrixIo, RoundTripIsExact) {
  const Matrix g = sample_gaussian(36, RngStream(10, 0)).value.reshaped(6, 6);
  const SymMatrix m(0.5 * (g + g.transpose()));
  std::stringstream io;
  write_matrix(io, m);
  EXPECT_EQ(read_matrix(io).matrix(), m.matrix());
}

}  // namespace
}  // namespace prgd
