#include <gtest/gtest.h>

#include <cmath>

#include "prgd/errors.hpp"
#include "prgd/pullback.hpp"

namespace prgd {
namespace {

CostPtr pca31() { return std::make_shared<PcaProblem>(SymMatrix::diagonal(Vector{{3, 1}})); }

Point sphere(const Vector& v) { return Point(ManifoldKind::sphere, v.normalized()); }

TEST(PullbackValue, Examples) {
  const Pullback pb(pca31(), sphere(Vector{{0, 1}}));
  EXPECT_DOUBLE_EQ(pb.value(Tangent::zero(pb.base())), -0.5);
  EXPECT_NEAR(pb.value(Tangent(pb.base(), Vector{{1, 0}})), -1.0, 1e-15);
  for (double t : {0.2, 0.7, 2.0}) {
    EXPECT_NEAR(pb.value(Tangent(pb.base(), Vector{{t, 0}})), -0.5 * (3 * t * t + 1) / (1 + t * t), 1e-15);
  }
}

TEST(PullbackValue, BaseMismatchThrows) {
  const Pullback pb(pca31(), sphere(Vector{{0, 1}}));
  const Point other = sphere(Vector{{1, 0}});
  EXPECT_THROW(pb.value(Tangent(other, Vector{{0, 1}})), InvalidArgument);
  EXPECT_THROW(pb.gradient(Tangent(other, Vector{{0, 1}})), InvalidArgument);
}

TEST(PullbackGradient, AtZeroIsRiemannianGradient) {
  const SyntheticSpectrum syn = synthetic_pca_matrix(7, RngStream(1, 0));
  const auto p = std::make_shared<PcaProblem>(syn.matrix);
  const Point x = p->manifold().random_point(RngStream(2, 0)).value;
  const Pullback pb(p, x);
  EXPECT_LE((pb.gradient(Tangent::zero(x)).coords() - p->riemannian_gradient(x).coords()).norm(), 1e-15);
}

TEST(PullbackGradient, PcaClosedForm) {
  const SyntheticSpectrum syn = synthetic_pca_matrix(9, RngStream(3, 0));
  const auto p = std::make_shared<PcaProblem>(syn.matrix);
  const Matrix& a = syn.matrix.matrix();
  RngStream rng(4, 0);
  for (int i = 0; i < 100; ++i) {
    auto px = p->manifold().random_point(rng);
    auto ps = p->manifold().sample_ball(px.value, 3.0, px.next);
    rng = ps.next;
    const Vector& x = px.value.coords();
    const Vector& s = ps.value.coords();
    const Pullback pb(p, px.value);
    const double fhat = pb.value(ps.value);
    const Vector ax = a * (x + s);
    const Vector proj = ax - x.dot(ax) * x;
    const Vector closed = (-proj - 2.0 * fhat * s) / (1.0 + s.squaredNorm());
    const Vector g = pb.gradient(ps.value).coords();
    EXPECT_LE((g - closed).norm(), 1e-10 * std::max(closed.norm(), 1e-300)) << i;
  }
}

void check_against_fd(const CostPtr& p, std::uint64_t seed) {
  RngStream rng(seed, 0);
  for (int i = 0; i < 100; ++i) {
    auto px = p->manifold().random_point(rng);
    auto ps = p->manifold().sample_ball(px.value, 0.5, px.next);
    rng = ps.next;
    const Pullback pb(p, px.value);
    const Vector c = pb.to_intrinsic(ps.value);
    const Vector fd = fd_gradient([&](const Vector& u) { return pb.value(pb.from_intrinsic(u)); }, c);
    const Vector g = pb.to_intrinsic(pb.gradient(ps.value));
    EXPECT_LE((fd - g).norm(), 1e-6 * g.norm()) << i;
  }
}

TEST(PullbackGradient, MatchesFiniteDifferencesPca) {
  check_against_fd(std::make_shared<PcaProblem>(synthetic_pca_matrix(6, RngStream(5, 0)).matrix), 6);
}

TEST(PullbackGradient, MatchesFiniteDifferencesSaddle) {
  Vector d = Vector::LinSpaced(5, -1.0, 2.0);
  check_against_fd(std::make_shared<QuadraticSaddle>(SymMatrix::diagonal(d)), 7);
}

TEST(PullbackHessian, EuclideanQuadratic) {
  const Matrix h{{-1.0, 0.5, 0.0}, {0.5, 2.0, 0.3}, {0.0, 0.3, 1.0}};
  const auto q = std::make_shared<QuadraticSaddle>(SymMatrix(h));
  const Pullback pb(q, Point(ManifoldKind::euclidean, Vector{{1, -2, 0.5}}));
  EXPECT_LE((pb.hessian_at_zero().matrix() - h).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(PullbackHessian, PcaDominantAndSaddle) {
  const Pullback dom(pca31(), sphere(Vector{{1, 0}}));
  const SymMatrix hd = dom.hessian_at_zero();
  ASSERT_EQ(hd.dim(), 1);
  EXPECT_NEAR(hd(0, 0), 2.0, 1e-5);
  const Pullback sad(pca31(), sphere(Vector{{0, 1}}));
  EXPECT_NEAR(sad.hessian_at_zero()(0, 0), -2.0, 1e-5);
}

TEST(PullbackHessian, MatchesAnalyticPcaHessian) {
  const SyntheticSpectrum syn = synthetic_pca_matrix(6, RngStream(8, 0));
  const auto p = std::make_shared<PcaProblem>(syn.matrix);
  const Point x = p->manifold().random_point(RngStream(9, 0)).value;
  const Pullback pb(p, x);
  const Matrix b = pb.basis();
  const Matrix& a = syn.matrix.matrix();
  const Vector& xc = x.coords();
  // Hess fhat(0)[v] = -Proj_x(A v) + (x^T A x) v in the tangent basis.
  const Matrix analytic = -b.transpose() * a * b + xc.dot(a * xc) * Matrix::Identity(5, 5);
  EXPECT_LE((pb.hessian_at_zero().matrix() - analytic).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(PullbackHessian, MinEigenvalueMatchesSpectralGap) {
  const Vector lambdas{{4.0, 2.5, 1.0, -0.5}};
  const auto p = std::make_shared<PcaProblem>(SymMatrix::diagonal(lambdas));
  for (Eigen::Index k = 0; k < 4; ++k) {
    const Pullback pb(p, sphere(Vector::Unit(4, k)));
    const double expected = lambdas(k) - lambdas(0 == k ? 1 : 0);
    EXPECT_NEAR(min_eigpair(pb.hessian_at_zero()).value, expected, 1e-5) << k;
    EXPECT_LE((pb.hessian_at_zero().matrix() - pb.hessian_at_zero().matrix().transpose()).norm(), 0.0);
  }
}

TEST(PullbackIntrinsic, RoundTrip) {
  const auto p = std::make_shared<PcaProblem>(synthetic_pca_matrix(5, RngStream(10, 0)).matrix);
  const Point x = p->manifold().random_point(RngStream(11, 0)).value;
  const Pullback pb(p, x);
  const Vector c{{0.1, -0.2, 0.3, 0.4}};
  EXPECT_LE((pb.to_intrinsic(pb.from_intrinsic(c)) - c).norm(), 1e-15);
}

}  // namespace
}  // namespace prgd
