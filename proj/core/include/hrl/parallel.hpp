#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace hrl {

/// Worker count used when a call passes threads = 0: the value set by
/// set_default_threads, else HRL_THREADS, else the hardware concurrency.
std::size_t default_threads();
void set_default_threads(std::size_t n);

/// Evaluates f(0..n-1) on up to `threads` workers. Results are stored by
/// index, so the output does not depend on scheduling. If any call throws,
/// the exception of the lowest failing index is rethrown.
template <class F>
auto parallel_map(std::size_t n, F&& f, std::size_t threads = 0) {
    using R = std::decay_t<decltype(f(std::size_t{0}))>;
    std::vector<R> out(n);
    if (threads == 0) threads = default_threads();
    threads = std::max<std::size_t>(1, std::min(threads, n));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace hrl
