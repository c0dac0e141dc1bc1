#pragma once

namespace cmk {

/// Reads CMK_THREADS and caps Eigen / OpenMP threads accordingly.
/// Returns the thread count in effect; leaves library defaults alone when
/// the variable is unset. Throws PreconditionError on a malformed value.
int configure_threads_from_env();

/// Caps compute threads explicitly (n >= 1).
void set_compute_threads(int n);

}  // namespace cmk
