// Simulating a heavy-tailed vector with a prescribed spectral measure: draw
// directions uniformly, then push them through the quantile map of the
// target. The estimated spectral measure of the top exceedances should
// recover the target.

#include <cstdio>
#include <cstdlib>

#include "rvtail/rvtail.hpp"

int main(int argc, char** argv) {
  using namespace rvtail;
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;

  const SpectralMeasure target = SpectralMeasure::from_angles({{kPi / 6.0, 0.5}, {kPi, 0.2}, {5.0 * kPi / 3.0, 0.3}});
  const ModelPtr model = polar_independent(SpectralMeasure::uniform_circle(), 1.5, RadialLaw::pareto(1.5));
  const SphereMap g = quantile_transform_map(target);

  const SampleBatch y = spherical_map_apply(model->sample(n, 7), g).rederived();
  const std::size_t k = resolve_top(0.01, y.size());
  const EstimationReport rep = estimate(y, k, target, 7);

  std::printf("n = %zu, k = %zu\n", n, k);
  std::printf("alpha_hat = %.4f  [%.4f, %.4f]\n", rep.alpha_hat, rep.alpha_ci.lo, rep.alpha_ci.hi);
  for (std::size_t i = 0; i < rep.spectral_hat.atoms().size(); ++i)
    std::printf("  atom at %.6f  weight %.4f\n", rep.spectral_hat.atom_angles()[i], rep.spectral_hat.atoms()[i].weight);
  for (const auto& [name, d] : rep.distances) std::printf("%s distance to target: %.4f\n", name.c_str(), d);
  return 0;
}
