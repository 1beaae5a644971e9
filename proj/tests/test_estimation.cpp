#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rvtail/estimation.hpp"
#include "test_util.hpp"

using namespace rvtail;
using rvtail::testing::kind_of;

namespace {

SampleBatch from_norms(const std::vector<double>& norms, double angle = 0.3) {
  std::vector<std::vector<double>> pts;
  for (double r : norms) pts.push_back({r * std::cos(angle), r * std::sin(angle)});
  return SampleBatch::from_points(pts, 2);
}

ModelPtr uniform_pareto(double alpha) {
  return polar_independent(SpectralMeasure::uniform_circle(), alpha, RadialLaw::pareto(alpha));
}

}  // namespace

TEST(EmpiricalSpectral, Examples) {
  const SampleBatch b = SampleBatch::from_points({{3.0, 0.0}, {0.0, 5.0}, {-2.0, 0.0}}, 2);
  const SpectralMeasure m = empirical_spectral(b, 2);
  EXPECT_EQ(m.kind(), MeasureKind::Empirical);
  ASSERT_EQ(m.atoms().size(), 2u);
  EXPECT_EQ(m.atom_angles()[0], 0.0);
  EXPECT_NEAR(m.atom_angles()[1], kPi / 2.0, 1e-15);
  EXPECT_EQ(m.atoms()[0].weight, 0.5);

  const SpectralMeasure all = empirical_spectral(b, 3);
  EXPECT_EQ(all.atoms().size(), 3u);
  EXPECT_EQ(all.total_mass(), 1.0);

  const SpectralMeasure ray = empirical_spectral(from_norms({1.0, 2.0, 7.0, 3.0}, 1.1), 3);
  ASSERT_EQ(ray.atoms().size(), 1u);
  EXPECT_NEAR(ray.atom_angles()[0], 1.1, 1e-15);
  EXPECT_EQ(ray.atoms()[0].weight, 1.0);

  EXPECT_EQ(kind_of([] { (void)empirical_spectral(SampleBatch(), 1); }), ErrorKind::EmptyInput);
}

TEST(EmpiricalSpectral, WeightsSumToOneAndNest) {
  const SampleBatch b = uniform_pareto(1.5)->sample(20000, 3);
  for (std::size_t k : {7u, 100u, 333u, 1999u}) EXPECT_EQ(empirical_spectral(b, k).total_mass(), 1.0);
  const auto top = top_indices(b.norms(), 500);
  const SpectralMeasure small = empirical_spectral(b, 50);
  std::vector<std::pair<double, double>> first;
  for (std::size_t i = 0; i < 50; ++i) first.emplace_back(b.angle(top[i]), 1.0 / 50.0);
  EXPECT_NEAR(distance_tv(small, normalize(SpectralMeasure::from_angles(first))), 0.0, 1e-15);
}

TEST(TopIndices, TiesKeepSampleOrder) {
  const std::vector<double> norms{1.0, 2.0, 2.0, 3.0, 2.0};
  const auto top = top_indices(norms, 3);
  EXPECT_EQ(top, (std::vector<std::size_t>{3, 1, 2}));
}

TEST(Hill, Oracle) {
  EXPECT_NEAR(hill_estimator(std::vector<double>{16.0, 8.0, 4.0, 2.0, 1.0}, 4), 0.5770780163555853, 1e-15);
  EXPECT_NEAR(hill_estimator(std::vector<double>{1.0, 4.0, 16.0, 2.0, 8.0}, 4), 1.0 / (2.5 * std::log(2.0)), 1e-15);
}

TEST(Hill, ParetoQuantileGrid) {
  double previous = 1.0;
  for (std::size_t n : {1000u, 10000u, 100000u, 1000000u}) {
    std::vector<double> norms(n);
    for (std::size_t i = 1; i <= n; ++i) norms[i - 1] = static_cast<double>(n) / static_cast<double>(i);
    const double err = std::abs(hill_estimator(norms, n / 2) - 1.0);
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 1e-4);
}

TEST(Hill, ScaleInvariance) {
  const SampleBatch b = uniform_pareto(1.5)->sample(10000, 4);
  std::vector<double> norms(b.norms().begin(), b.norms().end());
  const double a = hill_estimator(norms, 200);
  for (double c : {0.25, 8.0, 1024.0}) {
    std::vector<double> s = norms;
    for (double& x : s) x *= c;
    EXPECT_EQ(hill_estimator(s, 200), a) << c;
  }
  std::vector<double> s = norms;
  for (double& x : s) x *= 3.7;
  EXPECT_NEAR(hill_estimator(s, 200), a, 1e-12 * a);
}

TEST(Hill, Errors) {
  EXPECT_EQ(kind_of([] { (void)hill_estimator(std::vector<double>{2.0, 2.0, 2.0, 1.0}, 2); }), ErrorKind::DegenerateTail);
  EXPECT_EQ(kind_of([] { (void)hill_estimator(std::vector<double>{2.0, 1.0}, 2); }), ErrorKind::InvalidArgument);
}

TEST(Bootstrap, SeededAndWorkerIndependent) {
  const SampleBatch b = uniform_pareto(1.5)->sample(20000, 5);
  const Interval a = hill_bootstrap_ci(b.norms(), 200, 42, 1);
  const Interval c = hill_bootstrap_ci(b.norms(), 200, 42, 4);
  EXPECT_EQ(a.lo, c.lo);
  EXPECT_EQ(a.hi, c.hi);
  EXPECT_LT(a.lo, hill_estimator(b, 200));
  EXPECT_GT(a.hi, hill_estimator(b, 200));
}

TEST(QnMeasure, MeanOverReplicates) {
  const ModelPtr m = uniform_pareto(1.0);
  constexpr int reps = 100;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int s = 0; s < reps; ++s) {
    const double q = qn_measure(m->sample(10000, 1000 + s), 1.0, 2.0, ArcSet::full());
    sum += q;
    sum2 += q * q;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / (reps - 1));
  EXPECT_NEAR(mean, 0.5, 3.0 * se);
}

TEST(QnMeasure, ConsistencyAndEmptySupport) {
  const ModelPtr m = polar_independent(SpectralMeasure::dirac(0.5), 1.5, RadialLaw::pareto(1.5));
  const SampleBatch b = m->sample(50000, 6);
  EXPECT_EQ(qn_measure(b, 1.5, 0.1, ArcSet({{2.0, 4.0}})), 0.0);
  const double level = 0.1 * normalizing_sequence(1.5, 50000.0);
  std::size_t count = 0;
  for (double r : b.norms()) count += r > level;
  EXPECT_EQ(qn_measure(b, 1.5, 0.1, ArcSet::full()), static_cast<double>(count));
}

TEST(QnMeasure, ApproachesLimit) {
  const ModelPtr m = polar_independent(SpectralMeasure::cosine_bump(0.5), 1.5, RadialLaw::pareto(1.5));
  const SampleBatch b = m->sample(1000000, 7);
  const ArcSet upper({{0.0, kPi}});
  const double limit = std::pow(0.5, -1.5) * SpectralMeasure::cosine_bump(0.5).measure_of(upper);
  EXPECT_NEAR(qn_measure(b, 1.5, 0.5, upper), limit, 4.0 * std::sqrt(limit));
}

TEST(TailScan, PolarIndependentIsFlat) {
  const ModelPtr m = polar_independent(SpectralMeasure::cosine_bump(0.5), 2.0, RadialLaw::pareto(2.0));
  const std::vector<ArcSet> arcs{ArcSet({{0.0, 1.0}}), ArcSet::full()};
  const TailScan s = tail_scan(*m, 2.0, arcs, {1.0, 10.0, 100.0, 1000.0});
  EXPECT_EQ(s.mode, "exact");
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    for (double v : s.values[a]) EXPECT_NEAR(v, m->spectral()->measure_of(arcs[a]), 1e-9);
    EXPECT_TRUE(s.is_bounded[a]);
    EXPECT_LT(s.oscillation_range[a], 1e-9);
  }
}

TEST(TailScan, Example2TransformedDiverges) {
  const Example2Model m(1.0, 0.5, 1.2);
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(std::pow(10.0, 1.0 + 3.0 * i / 30.0));
  const TailScan t = tail_scan(m, 1.0, {ArcSet::full()}, grid, RadialGain::example2(1.2));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) {
      EXPECT_GT(t.values[0][i], t.values[0][i - 1]);
    }
    EXPECT_GE(t.values[0][i], example2_lower_bound(1.0, 1.2, grid[i]));
  }
  EXPECT_GE(t.values[0][20], 3.152);

  const TailScan u = tail_scan(m, 1.0, {ArcSet::full(), ArcSet({{1.0, 3.0}})}, grid);
  EXPECT_LE(u.full_range[0], 1e-9);
  EXPECT_LE(u.full_range[1], 1e-9);
}

TEST(TailScan, Example1SideOscillates) {
  const Example1Model m(1.0, 0.5);
  std::vector<double> grid;
  for (int j = 0; j <= 64; ++j) grid.push_back(std::exp(kTwoPi * j / 64.0));
  const TailScan s = tail_scan([&](double r, const ArcSet&) { return m.side_tail(r, +1); }, 1.0, {ArcSet::full()}, grid,
                               "exact");
  EXPECT_NEAR(s.full_range[0], 1.0, 0.01);
  EXPECT_GT(s.oscillation_range[0], 0.0);
}

TEST(TailScan, EmpiricalMode) {
  const SampleBatch b = uniform_pareto(1.0)->sample(200000, 8);
  const TailScan s = tail_scan(b, 1.0, {ArcSet::full()}, {1.0, 2.0, 4.0, 8.0});
  EXPECT_EQ(s.mode, "empirical");
  for (double v : s.values[0]) EXPECT_NEAR(v, 1.0, 0.05);
  EXPECT_EQ(kind_of([] { (void)tail_scan(uniform_pareto(1.0)->sample(500, 1), 1.0, {ArcSet::full()}, {1.0}); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { (void)tail_scan(b, 1.0, {ArcSet::full()}, {2.0, 1.0}); }), ErrorKind::InvalidArgument);
}

TEST(Estimate, ParetoAlpha) {
  const SampleBatch b = uniform_pareto(1.5)->sample(100000, 42);
  const EstimationReport r = estimate(b, 1000, std::nullopt, 42);
  EXPECT_GE(r.alpha_hat, 1.35);
  EXPECT_LE(r.alpha_hat, 1.65);
  EXPECT_LE(r.alpha_ci.lo, r.alpha_hat);
  EXPECT_GE(r.alpha_ci.hi, r.alpha_hat);
  EXPECT_EQ(r.k_used, 1000u);
  EXPECT_TRUE(r.distances.empty());
}

TEST(Estimate, TargetDistances) {
  const SpectralMeasure target = SpectralMeasure::from_angles({{1.0, 0.4}, {4.0, 0.6}});
  const SampleBatch b = polar_independent(target, 1.5, RadialLaw::pareto(1.5))->sample(50000, 9);
  const EstimationReport r = estimate(b, 500, target);
  EXPECT_LE(r.distances.at("tv"), 0.05);
  EXPECT_LE(r.distances.at("ks"), 0.05);
  const json j = report_to_json(r);
  EXPECT_EQ(j.at("k_used"), 500);
  EXPECT_EQ(j.at("alpha_ci").size(), 2u);
  EXPECT_TRUE(j.at("distances").contains("tv"));

  const EstimationReport d = estimate(uniform_pareto(1.5)->sample(50000, 9), 500, SpectralMeasure::uniform_circle());
  EXPECT_EQ(d.distances.count("tv"), 0u);
  EXPECT_LE(d.distances.at("ks"), 0.06);
}

TEST(ResolveTop, FractionOrCount) {
  EXPECT_EQ(resolve_top(0.01, 200000), 2000u);
  EXPECT_EQ(resolve_top(0.001, 100), 1u);
  EXPECT_EQ(resolve_top(150.0, 200000), 150u);
  EXPECT_EQ(kind_of([] { (void)resolve_top(2.5, 100); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { (void)resolve_top(0.0, 100); }), ErrorKind::InvalidArgument);
}
