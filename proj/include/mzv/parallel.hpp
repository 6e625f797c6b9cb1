#ifndef MZV_PARALLEL_HPP
#define MZV_PARALLEL_HPP

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mzv {

// Apply fn(i) for i in [0, n) on a small worker pool; results are written by
// index so the output order is deterministic regardless of scheduling.
inline void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn,
                               unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace mzv

#endif  // MZV_PARALLEL_HPP
