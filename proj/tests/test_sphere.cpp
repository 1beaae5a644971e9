#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rvtail/sphere.hpp"
#include "test_util.hpp"

using namespace rvtail;

using rvtail::testing::kind_of;

TEST(Polar, AxisPoints) {
  const std::vector<double> p{3.0, 0.0};
  const Polar a = polar(p);
  EXPECT_EQ(a.norm, 3.0);
  EXPECT_EQ(angle_of(a.dir).radians(), 0.0);

  const std::vector<double> q{0.0, -5.0};
  const Polar b = polar(q);
  EXPECT_EQ(b.norm, 5.0);
  EXPECT_NEAR(angle_of(b.dir).radians(), 3.0 * kPi / 2.0, 1e-15);
}

TEST(Polar, ThreeDimensional) {
  const std::vector<double> p{1.0, 1.0, std::sqrt(2.0)};
  const Polar a = polar(p);
  EXPECT_NEAR(a.norm, 2.0, 1e-15);
  EXPECT_NEAR(a.dir[0], 0.5, 1e-15);
  EXPECT_NEAR(a.dir[1], 0.5, 1e-15);
  EXPECT_NEAR(a.dir[2], std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(Polar, ZeroVectorIsDegenerate) {
  const std::vector<double> z{0.0, 0.0};
  EXPECT_EQ(kind_of([&] { (void)polar(z); }), ErrorKind::DegeneratePoint);
  EXPECT_EQ(kind_of([&] { (void)Direction::normalize(z); }), ErrorKind::DegeneratePoint);
}

TEST(Polar, RecomposeRandomPoints) {
  std::mt19937_64 eng(11);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> scale(-30.0, 30.0);
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 4);
    std::vector<double> p(d);
    const double s = std::exp(scale(eng));
    for (double& x : p) x = s * gauss(eng);
    const Polar pd = polar(p);
    double err = 0.0;
    for (std::size_t j = 0; j < d; ++j) err += (pd.norm * pd.dir[j] - p[j]) * (pd.norm * pd.dir[j] - p[j]);
    worst = std::max(worst, std::sqrt(err) / pd.norm);
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Direction, RejectsNonUnit) {
  EXPECT_EQ(kind_of([] { (void)Direction::from_unit({1.0, 1.0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { (void)Direction::from_unit({1.0}); }), ErrorKind::DimensionMismatch);
}

TEST(Direction, AngularDistance) {
  const Direction a = direction_of(0.0);
  const Direction b = direction_of(kPi / 2.0);
  EXPECT_NEAR(a.angular_distance(b), kPi / 2.0, 1e-15);
  EXPECT_NEAR(a.angular_distance(direction_of(1e-9)), 1e-9, 1e-20);
}

TEST(Angle, CanonicalChart) {
  EXPECT_EQ(Angle(0.0).radians(), 0.0);
  EXPECT_NEAR(Angle(-kPi / 2.0).radians(), 3.0 * kPi / 2.0, 1e-15);
  EXPECT_EQ(Angle(kTwoPi).radians(), 0.0);
  EXPECT_LT(Angle(std::nextafter(kTwoPi, 0.0)).radians(), kTwoPi);
}

TEST(Angle, OfDirection) {
  EXPECT_NEAR(angle_of(Direction::from_unit({0.0, 1.0})).radians(), kPi / 2.0, 1e-15);
  EXPECT_NEAR(angle_of(Direction::from_unit({-1.0, 0.0})).radians(), kPi, 1e-15);
  const Direction d = direction_of(7.0 * kPi / 4.0);
  EXPECT_NEAR(d[0], std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(d[1], -std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(Angle, OfDirectionNeedsPlane) {
  const Direction d = Direction::from_unit({0.0, 0.0, 1.0});
  EXPECT_EQ(kind_of([&] { (void)angle_of(d); }), ErrorKind::DimensionMismatch);
}

TEST(Angle, RoundTripGrid) {
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = kTwoPi * i / 10000.0;
    worst = std::max(worst, circular_distance(angle_of(direction_of(t)).radians(), t));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(ArcSet, HalfOpenMembership) {
  const ArcSet upper({{0.0, kPi}});
  EXPECT_TRUE(upper.contains(Angle(kPi / 2.0)));
  EXPECT_TRUE(upper.contains(Angle(0.0)));
  EXPECT_FALSE(upper.contains(Angle(kPi)));
}

TEST(ArcSet, Wraparound) {
  const ArcSet w({{3.0 * kPi / 2.0, kTwoPi}, {0.0, kPi / 4.0}});
  EXPECT_TRUE(w.contains(Angle(0.1)));
  EXPECT_TRUE(w.contains(Angle(-0.1)));
  EXPECT_FALSE(w.contains(Angle(kPi)));
  const ArcSet b = ArcSet::between(3.0 * kPi / 2.0, kPi / 4.0);
  ASSERT_EQ(b.arcs().size(), 2u);
  EXPECT_NEAR(b.length(), 3.0 * kPi / 4.0, 1e-15);
}

TEST(ArcSet, RejectsOverlapAndBadEndpoints) {
  EXPECT_EQ(kind_of([] { (void)ArcSet({{0.0, 2.0}, {1.0, 3.0}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { (void)ArcSet({{1.0, 1.0}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { (void)ArcSet({{0.0, 7.0}}); }), ErrorKind::InvalidArgument);
}

TEST(ArcSet, DisjointArcsPartition) {
  const ArcSet a({{0.0, 1.0}, {2.0, 3.0}});
  const ArcSet b({{1.0, 2.0}, {3.0, kTwoPi}});
  for (int i = 0; i < 10000; ++i) {
    const Angle t(kTwoPi * i / 10000.0);
    EXPECT_NE(a.contains(t), b.contains(t)) << t.radians();
  }
}

TEST(CapSet, Membership) {
  const Direction north = Direction::from_unit({0.0, 0.0, 1.0});
  const CapSet caps({{north, std::cos(0.5)}});
  EXPECT_TRUE(caps.contains(north));
  EXPECT_TRUE(caps.contains(Direction::normalize(std::vector<double>{std::sin(0.4), 0.0, std::cos(0.4)})));
  EXPECT_FALSE(caps.contains(Direction::from_unit({1.0, 0.0, 0.0})));
  const EvalSet set = caps;
  EXPECT_TRUE(contains(set, north));
  EXPECT_EQ(kind_of([&] { (void)CapSet({{north, 1.5}}); }), ErrorKind::InvalidArgument);
}
