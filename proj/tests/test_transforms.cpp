#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rvtail/models.hpp"
#include "rvtail/transforms.hpp"
#include "test_util.hpp"

using namespace rvtail;
using rvtail::testing::kind_of;

namespace {

SampleBatch uniform_batch(std::size_t n, std::uint64_t seed) {
  return polar_independent(SpectralMeasure::uniform_circle(), 1.5, RadialLaw::pareto(1.5))->sample(n, seed);
}

const SpectralMeasure kHalfHalf = SpectralMeasure::from_angles({{0.0, 0.5}, {kPi, 0.5}});

}  // namespace

TEST(SphericalMap, Examples) {
  const SampleBatch b = uniform_batch(1000, 1);
  const SampleBatch id = spherical_map_apply(b, SphereMap::identity());
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(id.norm(i), b.norm(i));
    EXPECT_NEAR(id.column(0)[i], b.column(0)[i], 1e-12 * b.norm(i));
  }
  const SampleBatch c = spherical_map_apply(b, SphereMap::constant(Angle(1.0)));
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(c.norm(i), b.norm(i));
    EXPECT_NEAR(c.angle(i), 1.0, 1e-15);
  }
  const SampleBatch p = SampleBatch::from_points({{3.0, 4.0}}, 2);
  const SampleBatch q = spherical_map_apply(p, SphereMap::quadrant_snap());
  EXPECT_EQ(q.norm(0), 5.0);
  EXPECT_NEAR(q.column(0)[0], 5.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(q.column(1)[0], 5.0 / std::sqrt(2.0), 1e-14);
}

TEST(RadialScale, Examples) {
  const SampleBatch b = uniform_batch(1000, 2);
  const SampleBatch one = radial_scale_apply(b, RadialGain::constant(1.0));
  EXPECT_EQ(one.columns(), b.columns());
  const SampleBatch two = radial_scale_apply(b, RadialGain::constant(2.0));
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_DOUBLE_EQ(two.norm(i), 2.0 * b.norm(i));
    EXPECT_EQ(two.angle(i), b.angle(i));
  }
}

TEST(RadialScale, PuncturedGainRemovesAxisPoints) {
  const Example3Model m(1.0);
  const SampleBatch b = m.sample(20000, 4);
  std::size_t on_axis = 0;
  for (std::size_t i = 0; i < b.size(); ++i) on_axis += b.column(1)[i] == 0.0;
  const SampleBatch y = radial_scale_apply(b, RadialGain::punctured(0.0));
  EXPECT_EQ(y.zero_count(), on_axis);
  EXPECT_EQ(y.size() + y.zero_count(), b.size());
  EXPECT_EQ(y.generated(), b.size());
}

TEST(RadialScale, DirectionsPreserved) {
  const SampleBatch b = uniform_batch(5000, 5);
  const SampleBatch y = radial_scale_apply(b, RadialGain::step({kPi / 2.0, kPi}, {2.0, 0.0, 0.5}));
  std::size_t j = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.angle(i) >= kPi / 2.0 && b.angle(i) < kPi) continue;
    EXPECT_EQ(y.direction_column(0)[j], b.direction_column(0)[i]);
    EXPECT_EQ(y.direction_column(1)[j], b.direction_column(1)[i]);
    ++j;
  }
  EXPECT_EQ(j, y.size());
}

TEST(RandomizedScale, Examples) {
  const SampleBatch b = uniform_batch(100000, 6);
  const RadialGain h = RadialGain::cosine(1.0, 0.5);
  const SampleBatch det = randomized_scale_apply(b, RandomGainProcess::deterministic(h), 1);
  EXPECT_EQ(det.columns(), radial_scale_apply(b, h).columns());

  const SampleBatch none = randomized_scale_apply(b, RandomGainProcess::zero(), 1);
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(none.zero_count(), b.size());

  const RandomGainProcess u = RandomGainProcess::uniform(1.0, 3.0);
  const SampleBatch y = randomized_scale_apply(b, u, 77);
  EXPECT_EQ(y.columns(), randomized_scale_apply(b, u, 77, 4).columns());
  double ratio = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) ratio += y.norm(i) / b.norm(i);
  EXPECT_NEAR(ratio / static_cast<double>(b.size()), 2.0, 0.02);
}

TEST(LimitMeasure, SphericalPushforward) {
  const LimitMeasure q(1.0, SpectralMeasure::uniform_circle());
  const LimitMeasure id = limit_pushforward_spherical(LimitMeasure(1.0, kHalfHalf), SphereMap::identity());
  EXPECT_EQ(id.eval(3.0, ArcSet({{0.0, 1.0}})), 0.5 / 3.0);

  const LimitMeasure c = limit_pushforward_spherical(q, SphereMap::constant(Angle(2.0)));
  EXPECT_EQ(c.alpha(), 1.0);
  EXPECT_NEAR(c.eval(4.0, ArcSet({{1.9, 2.1}})), 0.25, 1e-12);

  const LimitMeasure s = limit_pushforward_spherical(q, SphereMap::quadrant_snap());
  EXPECT_NEAR(s.eval(2.0, ArcSet({{0.7, 0.9}})), 0.125, 1e-12);
}

TEST(LimitMeasure, RadialPushforward) {
  const LimitMeasure q(1.0, SpectralMeasure::uniform_circle());
  EXPECT_NEAR(limit_pushforward_radial(q, RadialGain::constant(1.0)).eval(2.0, ArcSet::full()), 0.5, 1e-12);
  EXPECT_NEAR(limit_pushforward_radial(q, RadialGain::constant(2.0)).eval(5.0, ArcSet::full()), 0.4, 1e-12);

  const LimitMeasure two(2.0, kHalfHalf);
  const LimitMeasure r = limit_pushforward_radial(two, RadialGain::step({kPi / 2.0}, {1.0, 3.0}));
  EXPECT_EQ(r.alpha(), 2.0);
  EXPECT_NEAR(r.eval(10.0, ArcSet({{3.0, 3.2}})), 0.045, 1e-15);

  EXPECT_EQ(kind_of([&] { (void)limit_pushforward_radial(q, RadialGain::power_cusp(kPi, 0.2)); }), ErrorKind::UnboundedGain);
  EXPECT_EQ(kind_of([&] { (void)limit_pushforward_radial(q, RadialGain::example2(1.2)); }), ErrorKind::UnboundedGain);
}

TEST(MomentCondition, ConstantGain) {
  EXPECT_NEAR(moment_condition(kHalfHalf, RadialGain::constant(3.0), 1.0, 0.5), std::pow(3.0, 1.5), 1e-12);
  EXPECT_NEAR(moment_condition(SpectralMeasure::uniform_circle(), RadialGain::constant(3.0), 1.0, 0.5), std::pow(3.0, 1.5),
              1e-9);
}

TEST(MomentCondition, PowerCusp) {
  const SpectralMeasure u = SpectralMeasure::uniform_circle();
  const double v = moment_condition(u, RadialGain::power_cusp(kPi, 0.2), 1.0, 0.5);
  EXPECT_NEAR(v, 1.013344228178244, 1e-6);
  EXPECT_NEAR(v, std::pow(kPi, 0.7) / (0.7 * kPi), 1e-6);
  EXPECT_EQ(kind_of([&] { (void)moment_condition(u, RadialGain::power_cusp(kPi, 0.8), 1.0, 0.5); }),
            ErrorKind::MomentDivergence);
  // An atom on the pole is an infinite term.
  EXPECT_EQ(kind_of([] { (void)moment_condition(kHalfHalf, RadialGain::power_cusp(kPi, 0.1), 1.0, 0.5); }),
            ErrorKind::MomentDivergence);
}

TEST(MomentCondition, Example2Series) {
  EXPECT_NEAR(example2_moment_condition(1.0, 0.5, 1.2, 0.05), 3.909046247530365, 1e-9);
  EXPECT_EQ(kind_of([] { (void)example2_moment_condition(1.0, 0.5, 1.2, 0.3); }), ErrorKind::MomentDivergence);
  EXPECT_EQ(kind_of([] { (void)moment_condition(kHalfHalf, RadialGain::constant(1.0), 1.0, 0.0); }),
            ErrorKind::InvalidArgument);
}
