#pragma once

namespace geoextremal {

// Thread count for the OpenMP kernels: GEO_EXTREMAL_THREADS when set to a
// positive integer (capped at the OpenMP maximum), otherwise the OpenMP maximum.
int configured_threads();

}  // namespace geoextremal
