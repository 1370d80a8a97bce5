#pragma once
#include <stdexcept>
#include <string>

namespace hypermux {

// Thrown by the angular metric rescale when r is too close to the disk
// origin (the 1/sinh^2(r) factor diverges).
struct RadialSingularity : std::domain_error {
  explicit RadialSingularity(const std::string& msg) : std::domain_error(msg) {}
};

// edges_between / relative_conductance require disjoint node sets.
struct OverlappingSets : std::invalid_argument {
  explicit OverlappingSets(const std::string& msg) : std::invalid_argument(msg) {}
};

// Conductance of a set whose volume (or complement volume) is zero.
struct DegenerateSet : std::invalid_argument {
  explicit DegenerateSet(const std::string& msg) : std::invalid_argument(msg) {}
};

// violation_ratio needs at least two nodes common to >= 2 layers.
struct NoComparablePairs : std::invalid_argument {
  explicit NoComparablePairs(const std::string& msg) : std::invalid_argument(msg) {}
};

// Link prediction cannot sample the requested number of distinct non-edges.
struct NonEdgePoolExhausted : std::runtime_error {
  explicit NonEdgePoolExhausted(const std::string& msg) : std::runtime_error(msg) {}
};

// Stationary distribution of the supra walk did not converge.
struct PowerIterationDivergence : std::runtime_error {
  PowerIterationDivergence(const std::string& msg, double residual_, int iters_)
      : std::runtime_error(msg), residual(residual_), iters(iters_) {}
  double residual;
  int iters;
};

// Unreadable, malformed, or semantically empty input data (CLI exit code 2).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hypermux
