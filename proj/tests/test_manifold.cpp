#include <gtest/gtest.h>

#include <cmath>

#include "prgd/errors.hpp"
#include "prgd/manifold.hpp"

namespace prgd {
namespace {

Vector unit(Eigen::Index n, Eigen::Index i) { return Vector::Unit(n, i); }

TEST(Point, SphereRequiresUnitNorm) {
  EXPECT_NO_THROW(Point(ManifoldKind::sphere, unit(3, 0)));
  EXPECT_THROW(Point(ManifoldKind::sphere, 2.0 * unit(3, 0)), InvalidArgument);
  EXPECT_NO_THROW(Point(ManifoldKind::euclidean, 2.0 * unit(3, 0)));
  EXPECT_THROW(Point(ManifoldKind::euclidean, Vector{{NAN}}), InvalidArgument);
}

TEST(Tangent, SphereRequiresTangency) {
  const Point x(ManifoldKind::sphere, unit(3, 0));
  EXPECT_NO_THROW(Tangent(x, unit(3, 1)));
  EXPECT_THROW(Tangent(x, unit(3, 0)), InvalidArgument);
  EXPECT_THROW(Tangent(x, Vector::Zero(2)), InvalidArgument);
}

TEST(Inner, Examples) {
  const Sphere s2(3);
  const Point x = s2.point(unit(3, 0));
  EXPECT_DOUBLE_EQ(s2.inner(Tangent(x, Vector{{0, 1, 2}}), Tangent(x, Vector{{0, 3, -1}})), 1.0);
  EXPECT_DOUBLE_EQ(s2.inner(Tangent(x, unit(3, 1)), Tangent(x, unit(3, 1))), 1.0);
  EXPECT_DOUBLE_EQ(s2.inner(Tangent(x, unit(3, 1)), Tangent(x, unit(3, 2))), 0.0);
  const Point y = s2.point(unit(3, 1));
  EXPECT_THROW(s2.inner(Tangent(x, unit(3, 1)), Tangent(y, unit(3, 0))), InvalidArgument);
}

TEST(Project, Examples) {
  const Sphere s2(3);
  const Point x = s2.point(unit(3, 0));
  EXPECT_EQ(s2.project(x, unit(3, 0)).coords(), Vector::Zero(3));
  EXPECT_EQ(s2.project(x, unit(3, 1)).coords(), unit(3, 1));
  const EuclideanSpace r2(2);
  const Point p = r2.point(Vector{{1, 2}});
  EXPECT_EQ(r2.project(p, Vector{{3, -7}}).coords(), (Vector{{3, -7}}));
}

TEST(Retract, Examples) {
  const Sphere s1(2);
  const Point x = s1.point(Vector{{1, 0}});
  const Point y = s1.retract(x, Tangent(x, Vector{{0, 1}}));
  EXPECT_NEAR(y.coords()(0), 1 / std::sqrt(2.0), 1e-16);
  EXPECT_NEAR(y.coords()(1), 1 / std::sqrt(2.0), 1e-16);
  EXPECT_EQ(s1.retract(x, Tangent::zero(x)).coords(), x.coords());

  const EuclideanSpace r2(2);
  const Point p = r2.point(Vector{{1, 2}});
  EXPECT_EQ(r2.retract(p, Tangent(p, Vector{{3, -1}})).coords(), (Vector{{4, 1}}));
  EXPECT_EQ(r2.retract(p, Tangent::zero(p)), p);
}

TEST(Retract, ZeroIsIdentityOnRandomSpherePoints) {
  const Sphere s(7);
  RngStream rng(1, 0);
  for (int i = 0; i < 50; ++i) {
    auto d = s.random_point(rng);
    rng = d.next;
    EXPECT_LE((s.retract(d.value, Tangent::zero(d.value)).coords() - d.value.coords()).norm(), 1e-15);
  }
}

TEST(RetractionAdjoint, Examples) {
  const Sphere s2(3);
  const Point x = s2.point(unit(3, 0));
  const Tangent s(x, unit(3, 1));
  const Point y = s2.retract(x, s);
  const Tangent w(y, Vector{{1, -1, 0}} / std::sqrt(2.0));
  const Tangent out = s2.retraction_adjoint(x, s, w);
  EXPECT_LE((out.coords() - Vector{{0, -0.5, 0}}).norm(), 1e-15);

  const Tangent w0(x, Vector{{0, 0.3, -2}});
  EXPECT_EQ(s2.retraction_adjoint(x, Tangent::zero(x), w0).coords(), w0.coords());

  const EuclideanSpace r3(3);
  const Point p = r3.point(Vector{{1, 2, 3}});
  const Tangent sp(p, Vector{{1, 1, 1}});
  const Tangent wp(r3.retract(p, sp), Vector{{4, 5, 6}});
  EXPECT_EQ(r3.retraction_adjoint(p, sp, wp).coords(), wp.coords());
  EXPECT_THROW(s2.retraction_adjoint(x, s, w0), InvalidArgument);
}

// <T_{x,s}[sdot], w> = <sdot, T*_{x,s}[w]> with the differential from a
// five-point stencil on the retraction.
void check_adjoint_identity(const Manifold& m, std::uint64_t seed) {
  RngStream rng(seed, 0);
  for (int i = 0; i < 100; ++i) {
    auto px = m.random_point(rng);
    auto ps = m.sample_ball(px.value, 1.0, px.next);
    auto psd = m.sample_ball(px.value, 1.0, ps.next);
    const Point& x = px.value;
    const Tangent& s = ps.value;
    const Tangent& sdot = psd.value;
    const Point y = m.retract(x, s);
    auto pw = m.sample_ball(y, 1.0, psd.next);
    rng = pw.next;
    const Tangent& w = pw.value;

    const double h = 1e-3;
    auto at = [&](double t) { return m.retract(x, m.project(x, s.coords() + t * sdot.coords())).coords(); };
    const Vector diff = (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
    const double lhs = diff.dot(w.coords());
    const double rhs = sdot.coords().dot(m.retraction_adjoint(x, s, w).coords());
    EXPECT_NEAR(lhs, rhs, 1e-12) << "sample " << i;
  }
}

TEST(RetractionAdjoint, AdjointIdentitySphere) { check_adjoint_identity(Sphere(5), 3); }
TEST(RetractionAdjoint, AdjointIdentityEuclidean) { check_adjoint_identity(EuclideanSpace(5), 4); }

TEST(TangentBasis, OrthonormalAndTangent) {
  const Sphere s(6);
  RngStream rng(2, 0);
  for (int i = 0; i < 20; ++i) {
    auto d = s.random_point(rng);
    rng = d.next;
    const Matrix b = s.tangent_basis(d.value);
    ASSERT_EQ(b.cols(), 5);
    EXPECT_LE((b.transpose() * b - Matrix::Identity(5, 5)).norm(), 1e-13);
    EXPECT_LE((b.transpose() * d.value.coords()).norm(), 1e-13);
  }
  EXPECT_EQ(EuclideanSpace(3).tangent_basis(Point(ManifoldKind::euclidean, Vector::Zero(3))), Matrix::Identity(3, 3));
}

TEST(SampleBall, RadiusZeroGivesZero) {
  const Sphere s(4);
  const Point x = s.point(unit(4, 2));
  EXPECT_EQ(s.sample_ball(x, 0.0, RngStream(1, 1)).value.coords(), Vector::Zero(4));
}

TEST(SampleBall, InsideBallAndTangent) {
  const Sphere s(5);
  RngStream rng(5, 5);
  for (int i = 0; i < 1000; ++i) {
    auto px = s.random_point(rng);
    auto d = s.sample_ball(px.value, 0.3, px.next);
    rng = d.next;
    ASSERT_LE(d.value.norm(), 0.3);
    ASSERT_LE(std::abs(px.value.coords().dot(d.value.coords())), 1e-10);
  }
}

TEST(SampleBall, RadialLawUsesIntrinsicDimension) {
  const Sphere s(4);  // intrinsic dimension 3
  const Point x = s.point(Vector{{0.5, 0.5, 0.5, 0.5}});
  const int n = 100000;
  std::vector<double> u(n);
  RngStream rng(8, 1);
  for (int i = 0; i < n; ++i) {
    auto d = s.sample_ball(x, 2.0, rng);
    rng = d.next;
    u[i] = std::pow(d.value.norm() / 2.0, 3);
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    ks = std::max({ks, std::abs(u[i] - static_cast<double>(i) / n), std::abs(u[i] - static_cast<double>(i + 1) / n)});
  }
  EXPECT_LE(ks, 0.01);
}

TEST(SecondOrder, EuclideanIsExactlyZero) {
  const EuclideanSpace r(4);
  const Point x = r.point(Vector{{1e3, -7, 0.1, 3}});
  EXPECT_EQ(r.check_second_order(x, Tangent(x, unit(4, 1)), 1e-4), 0.0);
}

TEST(SecondOrder, SphereBelowTolerance) {
  const Sphere s(3);
  const Point x = s.point(unit(3, 0));
  EXPECT_LE(s.check_second_order(x, Tangent(x, unit(3, 1)), 1e-4), 1e-6);
  RngStream rng(10, 0);
  for (int i = 0; i < 100; ++i) {
    auto px = s.random_point(rng);
    auto pv = s.sample_ball(px.value, 1.0, px.next);
    rng = pv.next;
    const Tangent dir(px.value, pv.value.coords() / pv.value.norm());
    EXPECT_LE(s.check_second_order(px.value, dir, 1e-4), 1e-6);
  }
}

TEST(SecondOrder, RequiresUnitDirection) {
  const Sphere s(3);
  const Point x = s.point(unit(3, 0));
  EXPECT_THROW(s.check_second_order(x, Tangent(x, 2.0 * unit(3, 1)), 1e-4), InvalidArgument);
}

TEST(Tangency, PreservedByOperations) {
  const Sphere s(8);
  RngStream rng(12, 0);
  for (int i = 0; i < 100; ++i) {
    auto px = s.random_point(rng);
    auto pg = sample_gaussian(8, px.next);
    rng = pg.next;
    const Tangent t = s.project(px.value, 10.0 * pg.value);
    EXPECT_LE(std::abs(px.value.coords().dot(t.coords())), 1e-10);
    const Point y = s.retract(px.value, t);
    EXPECT_NEAR(y.coords().norm(), 1.0, 1e-15);
    const Tangent w = s.project(y, pg.value);
    EXPECT_LE(std::abs(px.value.coords().dot(s.retraction_adjoint(px.value, t, w).coords())), 1e-10);
  }
}

}  // namespace
}  // namespace prgd
