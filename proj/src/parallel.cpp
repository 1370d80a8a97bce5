#include "hypermux/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hypermux {

int max_threads() {
  static const int cached = [] {
#ifdef _OPENMP
    int limit = omp_get_max_threads();
#else
    int limit = 1;
#endif
    if (const char* env = std::getenv("HYPERMUX_THREADS")) {
      try {
        const int requested = std::stoi(env);
        if (requested >= 1 && requested < limit) limit = requested;
        if (requested >= 1 && limit < 1) limit = requested;
      } catch (...) {
        // unparsable cap: keep the OpenMP default
      }
    }
    return limit < 1 ? 1 : limit;
  }();
  return cached;
}

}  // namespace hypermux
