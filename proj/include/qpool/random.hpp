// Copyright 2026 The qpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random streams and a chunked Monte-Carlo reducer.
//
// Sub-seed scheme: stream k of top-level seed s is seeded with
// splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15). Monte-Carlo loops are cut
// into fixed-size chunks; chunk c always draws from stream c and partial
// results are summed in chunk order, so output depends only on the seed and
// never on the number of worker threads.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace qpool {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

inline constexpr std::size_t kChunkSize = 8192;

/// Runs `body(rng, begin, end, partial)` over [0, n) in fixed chunks and sums
/// the per-chunk partials in chunk order. `T` must support `+=` and be
/// copy-constructible from `zero`.
template <class T, class Body>
T chunked_reduce(std::size_t n, std::uint64_t seed, const T& zero, Body body, unsigned workers = 0) {
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<T> partial(chunks, zero);
  auto run = [&](std::size_t c) {
    Rng rng = make_stream(seed, c);
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(n, begin + kChunkSize);
    body(rng, begin, end, partial[c]);
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(chunks, 1)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  T total = zero;
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace qpool
