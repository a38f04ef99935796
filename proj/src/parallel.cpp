#include "tacshade/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace tacshade {

int set_thread_count(int n) {
  if (n <= 0) {
    if (const char* env = std::getenv("TACSHADE_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        n = 0;
      }
    }
  }
  if (n > 0) omp_set_num_threads(n);
  return thread_count();
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace tacshade
