#include "infheat/parallel.hpp"

#ifdef INFHEAT_HAVE_OPENMP
#include <omp.h>
#endif

namespace infheat {

void set_thread_count(int n) {
#ifdef INFHEAT_HAVE_OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int thread_count() {
#ifdef INFHEAT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace infheat
