#pragma once

#include <atomic>
#include <cstdint>

namespace qas {

// Counts quantum-circuit cost evaluations — the hardware-agnostic runtime
// metric. One increment per circuit simulated, from any thread.
class EvalCounter {
  public:
    void increment() noexcept { count_.fetch_add(1, std::memory_order_relaxed); }
    long long total() const noexcept { return count_.load(std::memory_order_relaxed); }

  private:
    std::atomic<long long> count_{0};
};

} // namespace qas
