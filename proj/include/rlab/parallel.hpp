#pragma once

namespace rlab {

/// Initialise OpenMP / FFTW threading once. Thread count is taken from
/// RESOLVENT_LAB_THREADS when set, otherwise the OpenMP default. Safe to
/// call repeatedly.
void init_threads();

/// Thread count currently in effect.
int thread_count();

}  // namespace rlab
