#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace psq {

// Raised when two supposedly-equal evaluation routes disagree (e.g. direct vs
// multiplicative local factors).  Maps to process exit code 2 in the CLI.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Locale-free decimal formatting with 17 significant digits ("%.17g"
// semantics: enough to round-trip any double).  Non-finite values format as
// "nan"/"inf"; report writers map them to null/empty instead.
std::string format_double(double v);

// splitmix64: tiny, well-distributed generator used to derive independent
// per-block streams from one seed.  Advances the state and returns the mix.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Worker count: explicit argument > PSQ_WORKERS env > hardware concurrency.
int resolve_workers(int requested = 0);

// Runs fn(block) for block = 0..n_blocks-1 on up to `workers` threads.
// Blocks are claimed dynamically; callers own per-block result slots and
// reduce them in block order, so results never depend on the worker count.
void parallel_for_blocks(std::int64_t n_blocks, int workers,
                         const std::function<void(std::int64_t)>& fn);

}  // namespace psq
