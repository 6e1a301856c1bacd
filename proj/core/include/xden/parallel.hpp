// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace xden {

// Worker-count control. 0 restores the default: the XDEN_THREADS environment
// variable if set, otherwise the hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs fn(chunk_index) for chunk_index in [0, chunk_count), possibly
// concurrently. Chunk boundaries never depend on the worker count, so code
// that writes to per-chunk slots is deterministic under any thread setting.
void parallel_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& fn);

inline std::size_t chunk_count_for(std::size_t n, std::size_t grain) {
  return grain == 0 ? 0 : (n + grain - 1) / grain;
}

// Splits [0, n) into fixed chunks of `grain` elements and runs
// fn(begin, end) per chunk.
inline void parallel_for(std::size_t n, std::size_t grain,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t chunks = chunk_count_for(n, grain);
  parallel_chunks(chunks, [&](std::size_t c) {
    const std::size_t begin = c * grain;
    const std::size_t end = begin + grain < n ? begin + grain : n;
    fn(begin, end);
  });
}

// Deterministic reduction: per-chunk partials are combined with a pairwise
// tree in chunk order, so the result is bit-stable for any worker count.
template <class T, class PerChunk, class Combine>
T parallel_reduce(std::size_t n, std::size_t grain, T identity, PerChunk per_chunk,
                  Combine combine) {
  const std::size_t chunks = chunk_count_for(n, grain);
  if (chunks == 0) return identity;
  std::vector<T> partials(chunks, identity);
  parallel_chunks(chunks, [&](std::size_t c) {
    const std::size_t begin = c * grain;
    const std::size_t end = begin + grain < n ? begin + grain : n;
    partials[c] = per_chunk(begin, end);
  });
  for (std::size_t width = 1; width < chunks; width *= 2) {
    for (std::size_t i = 0; i + width < chunks; i += 2 * width) {
      partials[i] = combine(partials[i], partials[i + width]);
    }
  }
  return partials[0];
}

}  // namespace xden
