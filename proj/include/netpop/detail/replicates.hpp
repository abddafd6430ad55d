#pragma once

#include <atomic>
#include <mutex>
#include <optional>
#include <thread>

namespace netpop {

template <typename Result>
std::vector<Result> run_replicates(int count, const std::function<Result(int)>& task, int workers) {
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(std::max(count, 0)));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int k = next++; k < count; k = next++) {
      try {
        slots[k].emplace(task(k));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const int threads = std::max(1, std::min(workers, count));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace netpop
