#include "geoextremal/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>

namespace geoextremal {

int configured_threads() {
    const int available = std::max(1, omp_get_max_threads());
    if (const char* env = std::getenv("GEO_EXTREMAL_THREADS")) {
        char* end = nullptr;
        const long requested = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && requested > 0) {
            return static_cast<int>(std::min<long>(requested, available));
        }
    }
    return available;
}

}  // namespace geoextremal
