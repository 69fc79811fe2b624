#include "bentbook/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#include <omp.h>

namespace bentbook::parallel {

int configure_from_env() {
  if (const char* env = std::getenv("BENTBOOK_THREADS")) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
    if (ec == std::errc{} && value > 0) omp_set_num_threads(value);
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace bentbook::parallel
