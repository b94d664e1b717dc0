#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace coxkl {

// Runs fn(begin, end) over a partition of [0, n) across `workers` threads.
// The partition is deterministic; results must be merged by the caller in
// index order if ordering matters. The first worker exception is rethrown.
template <typename Fn>
void parallel_for(size_t n, int workers, Fn&& fn) {
    if (workers <= 1 || n < 4096) {
        fn((size_t)0, n);
        return;
    }
    const size_t parts = std::min<size_t>((size_t)workers, n);
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    for (size_t t = 0; t < parts; ++t) {
        const size_t begin = n * t / parts;
        const size_t end = n * (t + 1) / parts;
        pool.emplace_back([&, begin, end]() {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace coxkl
