#ifndef CHAOTIC_EXTREMES_PARALLEL_HPP
#define CHAOTIC_EXTREMES_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace chaotic_extremes {

/// Number of workers to use when the caller passes 0.
inline unsigned default_thread_count() noexcept {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

/// Splits [0, count) into chunks of fixed size `chunk` and evaluates
/// `fn(begin, end)` for each chunk on up to `threads` workers. The chunk
/// layout never depends on `threads`, and results come back in chunk order,
/// so any reduction over them is independent of scheduling.
template <class Fn>
auto parallel_chunks(std::size_t count, unsigned threads, Fn&& fn, std::size_t chunk = 1024)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t, std::size_t>;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t n_chunks = (count + chunk - 1) / chunk;
  std::vector<Result> results(n_chunks);
  if (n_chunks == 0) return results;

  if (threads == 0) threads = default_thread_count();
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n_chunks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        const std::size_t begin = c * chunk;
        results[c] = fn(begin, std::min(count, begin + chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Evaluates `fn(i)` for every index and stores the values in index order.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using Value = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Value> out(count);
  parallel_chunks(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
    return 0;
  });
  return out;
}

}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_PARALLEL_HPP
