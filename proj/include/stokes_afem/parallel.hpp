#pragma once

#include <functional>

namespace stokes_afem {

/// Thread count from an explicit request, falling back to the
/// STOKES_AFEM_THREADS environment variable, then to 1.
int resolve_threads(int requested);

/// Run body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend only on n and the thread count, so per-index outputs are identical
/// for any thread count.
void parallel_for(int n, int threads, const std::function<void(int, int)>& body);

}  // namespace stokes_afem
