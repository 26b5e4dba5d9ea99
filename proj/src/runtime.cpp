#include "eit/types.hpp"

#include <Eigen/Core>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eit {

namespace {
int g_threads = 1;
}

void set_num_threads(int n) {
  if (n < 1) n = 1;
  g_threads = n;
  Eigen::setNbThreads(n);
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

int num_threads() { return g_threads; }

}  // namespace eit
