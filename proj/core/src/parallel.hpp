#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace surrocae::detail {

/// Calls fn(worker, begin, end) over contiguous index blocks. A single block
/// runs on the calling thread. Every block is nonempty, and exceptions
/// surface in worker order so failures are deterministic.
template <typename Fn>
void run_blocks(std::size_t n, int threads, Fn&& fn) {
  if (n == 0) return;
  std::size_t t = threads < 1 ? 1 : static_cast<std::size_t>(threads);
  if (t > n) t = n;
  if (t == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(t);
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t base = n / t;
  const std::size_t extra = n % t;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t end = begin + base + (w < extra ? 1 : 0);
    pool.emplace_back([&fn, &errors, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace surrocae::detail
