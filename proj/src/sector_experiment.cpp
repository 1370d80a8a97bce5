#include "hypermux/sector_experiment.hpp"

#include <stdexcept>

#include "hypermux/graph.hpp"
#include "hypermux/parallel.hpp"
#include "hypermux/rhg.hpp"

namespace hypermux {

SectorOrderingResult sector_ordering_experiment(const DiskParams& params,
                                                const std::array<double, 3>& sector_angles,
                                                int trials, uint64_t seed) {
  const double total = sector_angles[0] + sector_angles[1] + sector_angles[2];
  if (sector_angles[0] <= 0.0 || sector_angles[1] <= 0.0 || sector_angles[2] <= 0.0 ||
      total > kTwoPi + 1e-12)
    throw std::invalid_argument(
        "sector_ordering_experiment: sector angles must be positive and sum to <= 2*pi");

  struct TrialOutcome {
    uint8_t success = 0;
    int resamples = 0;
  };

  const auto outcomes = map_trials<TrialOutcome>(trials, [&](int t) {
    TrialOutcome outcome;
    const uint64_t trial_seed = derive_seed(seed, static_cast<uint64_t>(t));
    for (int attempt = 0;; ++attempt) {
      const RhgSample sample = generate(params, derive_seed(trial_seed, static_cast<uint64_t>(attempt)));
      const int n = sample.params.n;
      NodeSet a(n), b(n), c(n);
      for (int u = 0; u < n; ++u) {
        const double theta = sample.coords[static_cast<size_t>(u)].theta;
        if (theta < sector_angles[0])
          a.add(u);
        else if (theta < sector_angles[0] + sector_angles[1])
          b.add(u);
        else if (theta < total)
          c.add(u);
      }
      const int64_t va = volume(sample.graph, a);
      const int64_t vb = volume(sample.graph, b);
      const int64_t vc = volume(sample.graph, c);
      if (va == 0 || vb == 0 || vc == 0) {
        ++outcome.resamples;
        if (attempt >= 100)
          throw std::runtime_error(
              "sector_ordering_experiment: could not draw a nondegenerate sample");
        continue;
      }
      const double r_ab = relative_conductance(sample.graph, a, b);
      const double r_ac = relative_conductance(sample.graph, a, c);
      outcome.success = r_ab > r_ac ? 1 : 0;  // ties fail
      return outcome;
    }
  });

  SectorOrderingResult out;
  out.trials = trials;
  for (const auto& o : outcomes) {
    out.successes += o.success;
    out.resampled += o.resamples;
  }
  out.success_fraction = trials > 0 ? static_cast<double>(out.successes) / trials : 0.0;
  return out;
}

}  // namespace hypermux
