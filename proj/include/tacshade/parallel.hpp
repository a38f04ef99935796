#pragma once

namespace tacshade {

/// Sets the OpenMP thread count. n <= 0 falls back to TACSHADE_THREADS, then
/// to the OpenMP default. Returns the count now in effect.
int set_thread_count(int n);

int thread_count();

}  // namespace tacshade
