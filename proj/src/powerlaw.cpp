#include "hypermux/powerlaw.hpp"

#include <algorithm>
#include <cmath>

namespace hypermux {

PowerLawFit fit_power_law(const std::vector<int>& degrees) {
  std::vector<int> ks;
  ks.reserve(degrees.size());
  for (int k : degrees)
    if (k >= 1) ks.push_back(k);
  std::sort(ks.begin(), ks.end());

  PowerLawFit best;
  if (ks.empty()) return best;

  std::vector<int> candidates(ks.begin(), ks.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const size_t min_tail = 25;  // below this the MLE is too noisy to rank
  bool found = false;
  for (int kmin : candidates) {
    if (kmin < 2) continue;
    const auto first = std::lower_bound(ks.begin(), ks.end(), kmin);
    const size_t nt = static_cast<size_t>(ks.end() - first);
    if (nt < min_tail) break;

    const double shift = kmin - 0.5;
    double log_sum = 0.0;
    for (auto it = first; it != ks.end(); ++it) log_sum += std::log(*it / shift);
    if (log_sum <= 0.0) continue;
    const double beta = 1.0 + static_cast<double>(nt) / log_sum;

    // KS distance of the empirical tail against the fitted CDF
    // F(k) = 1 - (k / (kmin - 1/2))^(1 - beta).
    double d = 0.0;
    size_t i = 0;
    for (auto it = first; it != ks.end(); ++it, ++i) {
      const double model = 1.0 - std::pow(*it / shift, 1.0 - beta);
      const double lo = static_cast<double>(i) / static_cast<double>(nt);
      const double hi = static_cast<double>(i + 1) / static_cast<double>(nt);
      d = std::max(d, std::max(std::abs(model - lo), std::abs(model - hi)));
    }
    if (!found || d < best.ks) {
      best.beta = beta;
      best.k_min = kmin;
      best.tail_size = static_cast<int>(nt);
      best.ks = d;
      found = true;
    }
  }
  if (!found) {
    // Degenerate sequence: fall back to the full-sample MLE at k_min = 1.
    double log_sum = 0.0;
    for (int k : ks) log_sum += std::log(k / 0.5);
    best.beta = log_sum > 0.0 ? 1.0 + static_cast<double>(ks.size()) / log_sum : 0.0;
    best.k_min = 1;
    best.tail_size = static_cast<int>(ks.size());
    best.ks = 1.0;
  }
  return best;
}

double alpha_from_degrees(const std::vector<int>& degrees) {
  const PowerLawFit fit = fit_power_law(degrees);
  const double alpha = (fit.beta - 1.0) / 2.0;
  return std::clamp(alpha, 0.55, 0.95);
}

}  // namespace hypermux
