#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "rvtail/models.hpp"
#include "test_util.hpp"

using namespace rvtail;
using rvtail::testing::kind_of;

namespace {

struct Probe {
  double r;
  ArcSet arcs;
};

// Exceedance frequency of {norm > r, angle in arcs}; `by_x` indexes the tail
// by the first coordinate instead of the norm.
double frequency(const SampleBatch& b, const Probe& p, bool by_x = false) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double size = by_x ? b.column(0)[i] : b.norm(i);
    if (size > p.r && p.arcs.contains(Angle(b.angle(i)))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(b.size());
}

void expect_matches_exact(const RegVarModel& m, const std::vector<Probe>& probes, bool by_x = false) {
  constexpr std::size_t n = 1000000;
  const SampleBatch b = m.sample(n, 20240601, 2);
  for (const Probe& p : probes) {
    const double exact = *m.exact_tail(p.r, p.arcs);
    const double sd = std::sqrt(exact * (1.0 - exact) / n);
    EXPECT_NEAR(frequency(b, p, by_x), exact, 4.0 * sd + 1e-12) << m.kind() << " r=" << p.r;
  }
}

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
  return r;
}

const SpectralMeasure kQuadrants = SpectralMeasure::from_angles(
    {{kPi / 4.0, 0.25}, {3.0 * kPi / 4.0, 0.25}, {5.0 * kPi / 4.0, 0.25}, {7.0 * kPi / 4.0, 0.25}});

}  // namespace

TEST(RadialLaw, Tails) {
  const RadialLaw p = RadialLaw::pareto(2.0);
  EXPECT_EQ(p.tail(0.5), 1.0);
  EXPECT_DOUBLE_EQ(p.tail(10.0), 0.01);
  const RadialLaw a = RadialLaw::atom_plus_pareto(1.0, 0.25);
  EXPECT_DOUBLE_EQ(a.tail(4.0), 0.0625);
  const RadialLaw o = RadialLaw::oscillating(1.0, 0.5, +1);
  const double r = std::exp(kPi / 2.0);
  EXPECT_NEAR(r * o.tail(r), 1.5, 1e-14);
  double prev = 1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double t = o.tail(std::exp(12.0 * i / 10000.0));
    EXPECT_LE(t, prev);
    prev = t;
  }
}

TEST(RadialLaw, OscillatingNeedsMonotoneTail) {
  EXPECT_EQ(kind_of([] { (void)RadialLaw::oscillating(1.0, 0.9, +1); }), ErrorKind::InvalidConstruction);
  EXPECT_EQ(kind_of([] { (void)RadialLaw::oscillating(1.0, 1.5, -1); }), ErrorKind::InvalidConstruction);
}

TEST(PolarIndependent, ExactTailExamples) {
  const ModelPtr u = polar_independent(SpectralMeasure::uniform_circle(), 1.0, RadialLaw::pareto(1.0));
  EXPECT_NEAR(*u->exact_tail(2.0, ArcSet::full()), 0.5, 1e-12);
  const ModelPtr d = polar_independent(SpectralMeasure::dirac(0.0), 1.0, RadialLaw::pareto(1.0));
  EXPECT_EQ(*d->exact_tail(3.0, ArcSet({{1.0, 2.0}})), 0.0);
  const ModelPtr q = polar_independent(kQuadrants, 2.0, RadialLaw::pareto(2.0));
  EXPECT_NEAR(*q->exact_tail(10.0, ArcSet({{0.0, kPi / 2.0}})), 0.0025, 1e-15);
}

TEST(PolarIndependent, Preconditions) {
  EXPECT_EQ(kind_of([] { (void)polar_independent(SpectralMeasure::dirac(0.0, 2.0), 1.0, RadialLaw::pareto(1.0)); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { (void)polar_independent(SpectralMeasure::dirac(0.0), 1.0, RadialLaw::pareto(2.0)); }),
            ErrorKind::InvalidArgument);
}

TEST(PolarIndependent, ExactTailUnderGain) {
  const ModelPtr u = polar_independent(SpectralMeasure::uniform_circle(), 1.0, RadialLaw::pareto(1.0));
  // ∫ (1 + ½cos θ) dθ / 2π = 1, and R·h > r needs r/h >= 1.
  EXPECT_NEAR(*u->exact_tail_under_gain(10.0, ArcSet::full(), RadialGain::cosine(1.0, 0.5)), 0.1, 1e-12);
  const ModelPtr q = polar_independent(kQuadrants, 2.0, RadialLaw::pareto(2.0));
  const RadialGain h = RadialGain::step({kPi / 2.0}, {3.0, 1.0});
  EXPECT_NEAR(*q->exact_tail_under_gain(10.0, ArcSet::full(), h), 0.25 * (9.0 + 3.0) / 100.0, 1e-15);
}

TEST(NormalizingSequence, Examples) {
  EXPECT_DOUBLE_EQ(normalizing_sequence(2.0, 100.0), 10.0);
  EXPECT_DOUBLE_EQ(normalizing_sequence(1.0, 1000.0), 1000.0);
  EXPECT_DOUBLE_EQ(normalizing_sequence(0.5, 100.0), 10000.0);
  for (double n = 1.0; n < 1e6; n *= 3.0) EXPECT_LT(normalizing_sequence(1.5, n), normalizing_sequence(1.5, n + 1.0));
}

TEST(ExactTail, EmpiricalFrequenciesAgree) {
  const std::vector<Probe> circle{{1.5, ArcSet({{0.0, kPi / 2.0}})}, {4.0, ArcSet({{1.0, 4.0}})}, {20.0, ArcSet::full()}};
  expect_matches_exact(*polar_independent(SpectralMeasure::uniform_circle(), 1.5, RadialLaw::pareto(1.5)), circle);
  expect_matches_exact(*polar_independent(kQuadrants, 2.0, RadialLaw::pareto(2.0)), circle);
  expect_matches_exact(*polar_independent(SpectralMeasure::cosine_bump(0.8), 1.0, RadialLaw::oscillating(1.0, 0.5, -1)),
                       circle);

  const Example1Model ex1(1.0, 0.5);
  expect_matches_exact(ex1, {{1.5, ArcSet({{0.0, 1.2}})},
                             {3.0, ArcSet({{0.0, 0.4}})},
                             {10.0, ArcSet({{kPi, kTwoPi}})},
                             {2.5, ArcSet({{0.45, 0.55}})}});

  const Example2Model ex2(1.0, 0.5, 1.2);
  expect_matches_exact(ex2, {{0.5, ArcSet({{0.0, 0.1}})},
                             {2.0, ArcSet::full()},
                             {5.0, ArcSet({{1.5, 3.0}})},
                             {1.0, ArcSet({{3.0, kPi + 0.1}})}});

  const Example3Model ex3(1.0);
  expect_matches_exact(ex3, {{2.0, ArcSet({{0.0, 0.01}})},
                             {1.5, ArcSet({{0.1, kPi}})},
                             {3.0, ArcSet({{0.01, 0.2}})},
                             {10.0, ArcSet::full()}},
                       true);
}

TEST(Sampling, DeterministicAcrossWorkers) {
  const Example1Model ex1(1.0, 0.5);
  const SampleBatch a = ex1.sample(100000, 7, 1);
  const SampleBatch b = ex1.sample(100000, 7, 4);
  EXPECT_EQ(a.columns(), b.columns());
  EXPECT_EQ(a.columns(), ex1.sample(100000, 7, 1).columns());
  EXPECT_NE(a.columns(), ex1.sample(100000, 8, 1).columns());
  for (double r : a.norms()) ASSERT_GT(r, 0.0);
}

TEST(PolarIndependent, RankIndependence) {
  const ModelPtr m = polar_independent(SpectralMeasure::cosine_bump(0.5), 1.5, RadialLaw::pareto(1.5));
  const SampleBatch b = m->sample(100000, 99);
  const std::vector<double> ra = ranks(b.angles());
  const std::vector<double> rn = ranks(b.norms());
  const double n = static_cast<double>(b.size());
  const double mean = (n - 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    sxy += (ra[i] - mean) * (rn[i] - mean);
    sxx += (ra[i] - mean) * (ra[i] - mean);
  }
  EXPECT_LT(std::abs(sxy / sxx), 0.01);
}

TEST(Example1, MixtureIsExactPareto) {
  const Example1Model m(1.0, 0.5);
  for (double r = 1.0; r < 1e6; r *= 1.37) EXPECT_NEAR(r * m.mixture_tail(r), 1.0, 1e-12) << r;
}

TEST(Example1, SideTailsOscillate) {
  const Example1Model m(1.0, 0.5);
  double lo = 10.0;
  double hi = -10.0;
  for (int j = 0; j <= 4000; ++j) {
    const double r = std::exp(kTwoPi * j / 4000.0);
    const double v = r * m.side_tail(r, +1);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_NEAR(lo, 0.5, 1e-6);
  EXPECT_NEAR(hi, 1.5, 1e-6);
  const double peak = std::exp(kPi / 2.0);
  EXPECT_NEAR(peak * m.side_tail(peak, +1), 1.5, 1e-14);
}

TEST(Example1, SpectralIsDiracAtZero) {
  const Example1Model m(1.0, 0.5);
  const ArcSet away({{kPi / 4.0, kPi}});
  for (double r : {2.0, 5.0, 100.0}) EXPECT_EQ(*m.exact_tail(r, away), 0.0) << r;
  // Points with norm in [1, 2) sit at angle ±1, inside the arc.
  EXPECT_GT(*m.exact_tail(1.5, away), 0.0);
  EXPECT_EQ(m.spectral()->atom_angles().front(), 0.0);
  EXPECT_NEAR(Example1Model::ray_angle(-1, 4.0), kTwoPi - 0.25, 1e-15);
}

TEST(Example1, Preconditions) {
  EXPECT_EQ(kind_of([] { Example1Model(1.0, 0.95); }), ErrorKind::InvalidConstruction);
}

TEST(Example2, SpectralMassOracle) {
  const Example2Model m(1.0, 0.5, 1.2);
  EXPECT_NEAR(m.spectral()->total_mass(), 0.752350269464298, 1e-12);
  for (double r : {1.5, 10.0, 1e3, 1e6}) EXPECT_NEAR(r * *m.exact_tail(r, ArcSet::full()), 0.752350269464298, 1e-12);
  EXPECT_DOUBLE_EQ(Example2Model::q(1), 0.5);
  EXPECT_EQ(Example2Model::atom_angle(1), 0.0);
  EXPECT_EQ(Example2Model::atom_angle(2), kPi / 2.0);
}

TEST(Example2, FirstAtomHasHalfTheMass) {
  const Example2Model m(1.0, 0.5, 1.2);
  constexpr std::size_t n = 1000000;
  const SampleBatch b = m.sample(n, 3);
  std::size_t at_zero = 0;
  for (double t : b.angles()) at_zero += t == 0.0;
  EXPECT_NEAR(static_cast<double>(at_zero) / n, 0.5, 4.0 * 0.5 / std::sqrt(n));
}

TEST(Example2, TransformedTailOracle) {
  const double rs[] = {10.0, 100.0, 1000.0, 10000.0};
  const double values[] = {2.6973735804664712, 4.1864588709687397, 5.6695448245609317, 7.4142227029766071};
  const double bounds[] = {1.2799310777667878, 2.1089977117186387, 3.1523091832602119, 4.6394353984588035};
  double prev = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double v = example2_transformed_tail(1.0, 0.5, 1.2, rs[i]);
    EXPECT_NEAR(v, values[i], 1e-9 * values[i]) << rs[i];
    EXPECT_NEAR(example2_lower_bound(1.0, 1.2, rs[i]), bounds[i], 1e-13);
    EXPECT_GE(v, bounds[i]);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Example2, GainConstraint) {
  EXPECT_EQ(kind_of([] { Example2Model(1.0, 0.5, 0.9); }), ErrorKind::InvalidConstruction);
  EXPECT_EQ(kind_of([] { Example2Model(1.0, 0.5, 1.6); }), ErrorKind::InvalidConstruction);
}

TEST(Example3, StaircaseAndAngles) {
  EXPECT_EQ(Example3Model::staircase(1.0), 1.0);
  EXPECT_EQ(Example3Model::staircase(1.5), 0.5);
  EXPECT_EQ(Example3Model::staircase(4.0), 0.125);
  const Example3Model m(1.0);
  const SampleBatch b = m.sample(100000, 5);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.column(0)[i] > 4.0) {
      ASSERT_LT(b.angle(i), 0.0625 / 4.0);
    }
  }
}

TEST(Example3, ExactTailExamples) {
  const Example3Model m(1.0);
  const double a = 0.1;
  for (double r : {5.0, 20.0, 1e4}) {
    EXPECT_EQ(*m.exact_tail(r, ArcSet({{a, kTwoPi}})), 0.0);
    EXPECT_NEAR(r * *m.exact_tail(r, ArcSet({{0.0, a}})), 1.0, 1e-12);
  }
  EXPECT_NEAR(*m.exact_tail_under_gain(1000.0, ArcSet::full(), RadialGain::punctured(0.0)), 0.5e-3, 1e-15);
}

TEST(Example3, GraphLabelsMatchSampler) {
  const Example3Model m(1.0);
  const SampleBatch b = m.sample(50000, 13, 3);
  const std::vector<bool> on_graph = m.graph_labels(50000, 13, 1);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.column(1)[i] > 0.0) {
      ASSERT_TRUE(on_graph[i]);
    }
  }
}

TEST(ModelJson, RoundTrip) {
  const json specs[] = {
      json{{"kind", "polar_independent"}, {"alpha", 1.5}, {"sigma", measure_to_json(kQuadrants)}},
      json{{"kind", "example1"}, {"alpha", 1.0}, {"amplitude", 0.5}},
      json{{"kind", "example2"}, {"alpha", 1.0}, {"nu", 0.5}, {"beta", 1.2}},
      json{{"kind", "example3"}, {"alpha", 2.0}},
  };
  for (const json& s : specs) {
    const ModelPtr m = model_from_json(s);
    EXPECT_EQ(m->kind(), s.at("kind").get<std::string>());
    EXPECT_EQ(model_from_json(m->spec())->spec(), m->spec());
  }
  EXPECT_EQ(kind_of([] { (void)model_from_json(json{{"kind", "example9"}, {"alpha", 1.0}}); }), ErrorKind::InvalidSpec);
  EXPECT_EQ(kind_of([] { (void)model_from_json(json{{"kind", "example1"}}); }), ErrorKind::InvalidSpec);
}
