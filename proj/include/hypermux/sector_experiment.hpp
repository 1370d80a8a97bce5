#pragma once
#include <array>
#include <cstdint>

#include "hypermux/geometry.hpp"

namespace hypermux {

// Empirical test of the sector-ordering inequality R(A,B) > R(A,C) for
// three consecutive angular sectors A, B, C of fresh disk samples. Nodes
// fall into sectors by ground-truth angle (A starts at 0); nodes outside
// the three sectors belong to none. Ties count as failures; a trial where
// any sector has zero volume is resampled (counted). Trials run in
// parallel with per-trial seeds.
struct SectorOrderingResult {
  int trials = 0;
  int successes = 0;
  int resampled = 0;          // degenerate trials that were redrawn
  double success_fraction = 0.0;
};

SectorOrderingResult sector_ordering_experiment(const DiskParams& params,
                                                const std::array<double, 3>& sector_angles,
                                                int trials, uint64_t seed);

}  // namespace hypermux
