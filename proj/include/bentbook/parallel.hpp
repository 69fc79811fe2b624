#pragma once

namespace bentbook::parallel {

// Applies BENTBOOK_THREADS (if set to a positive integer) as the OpenMP
// thread cap. Returns the effective maximum thread count.
int configure_from_env();

int max_threads();

}  // namespace bentbook::parallel
