#pragma once

// Replicate-indexed parallel loop. Worker w handles indices congruent to w
// modulo the worker count and writes into caller-owned slots, so the result
// of a run never depends on how many workers executed it.

#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace suslab {

template <class Fn>
inline void parallel_replicates(std::int64_t reps, int workers, Fn&& fn) {
    if (reps < 0) throw std::invalid_argument("replicate count must be nonnegative");
    if (workers <= 1) {
        for (std::int64_t r = 0; r < reps; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::int64_t r = w; r < reps; r += workers) fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace suslab
