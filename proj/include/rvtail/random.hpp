#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace rvtail {

using Engine = std::mt19937_64;

// Stream tags keep independent randomness sources apart under one seed.
enum class Stream : std::uint32_t {
  Sampling = 0,
  Gain = 1,
  Bootstrap = 2,
  Moment = 3,
};

/// Engine for chunk `index` of stream `stream` under `seed`. Derivation is a
/// pure function of its arguments, so output never depends on which worker
/// consumes the chunk.
inline Engine substream(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Engine(seq);
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

/// Uniform on (0, 1].
inline double uniform01_open_closed(Engine& eng) { return 1.0 - uniform01(eng); }

inline double exponential(Engine& eng, double mean) { return -mean * std::log(uniform01_open_closed(eng)); }

inline constexpr std::size_t kChunkSize = 8192;

inline std::size_t chunk_count(std::size_t n) { return (n + kChunkSize - 1) / kChunkSize; }

/// Runs body(i) for i in [0, count) with items handed out round-robin to
/// `workers` threads. The first exception thrown is rethrown after joining.
inline void for_each_index(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  threads.reserve(used);
  for (unsigned w = 0; w < used; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += used) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

/// Runs body(chunk, begin, end) for every chunk of [0, n). Chunks are handed
/// out round-robin to `workers` threads; the body must only write to the
/// index range it is given.
inline void for_each_chunk(std::size_t n, unsigned workers,
                           const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  for_each_index(chunk_count(n), workers, [&](std::size_t chunk) {
    const std::size_t begin = chunk * kChunkSize;
    body(chunk, begin, std::min(n, begin + kChunkSize));
  });
}

}  // namespace rvtail
