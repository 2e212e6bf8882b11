// parallel.hpp - Deterministic work distribution over index ranges

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ramanup {

// Runs fn(i) for i in [0, count). Each index writes only its own output slot,
// so results are identical for any thread count; reductions over the slots
// must be done by the caller in fixed index order.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Pairwise tree reduction with a fixed association order. The result depends
// only on the slot contents, never on evaluation schedule, so parallel and
// serial runs agree bitwise.
template <typename T>
T tree_reduce(std::vector<T> values)
{
    if (values.empty()) return T{};
    std::size_t n = values.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i)
            values[i] = values[2 * i] + values[2 * i + 1];
        if (n % 2 == 1) {
            values[half] = values[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return values[0];
}

}  // namespace ramanup
