#pragma once
#include <vector>

namespace hypermux {

// Maximum-likelihood power-law tail fit of a degree sequence with the
// usual half-integer shift for discrete data; the tail start k_min is
// chosen by minimizing the KS distance between the empirical tail and the
// fitted model.
struct PowerLawFit {
  double beta = 0.0;   // exponent of p(k) ~ k^-beta
  int k_min = 0;       // fitted tail start
  int tail_size = 0;   // observations with k >= k_min
  double ks = 0.0;     // KS distance at the chosen k_min
};

PowerLawFit fit_power_law(const std::vector<int>& degrees);

// alpha implied by the degree exponent (beta = 2 alpha + 1), clamped to
// [0.55, 0.95] for use as an embedding parameter on real graphs.
double alpha_from_degrees(const std::vector<int>& degrees);

}  // namespace hypermux
