#include "psq/common.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>

namespace psq {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PSQ_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_blocks(std::int64_t n_blocks, int workers,
                         const std::function<void(std::int64_t)>& fn) {
  if (n_blocks <= 0) return;
  workers = resolve_workers(workers);
  if (workers > n_blocks) workers = static_cast<int>(n_blocks);
  if (workers <= 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto run = [&] {
    for (;;) {
      std::int64_t b = next.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      try {
        fn(b);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace psq
