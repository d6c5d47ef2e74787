#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rdc {

/// Worker count: explicit request, else RDC_THREADS, else hardware
/// concurrency. Always at least 1.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RDC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn(chunk_begin, chunk_end) over a static partition of [begin, end).
/// Chunks are contiguous and disjoint, so workers writing only to their own
/// index range need no synchronization and the result is schedule
/// independent.
template <typename Fn>
void parallel_chunks(std::int64_t begin, std::int64_t end, unsigned threads,
                     Fn&& fn) {
    const std::int64_t n = end - begin;
    if (n <= 0) return;
    unsigned t = resolve_threads(threads);
    if (t > static_cast<std::uint64_t>(n)) t = static_cast<unsigned>(n);
    if (t <= 1) {
        fn(begin, end);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(t);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::int64_t base = n / t;
    const std::int64_t rem = n % t;
    std::int64_t lo = begin;
    for (unsigned i = 0; i < t; ++i) {
        const std::int64_t hi = lo + base + (i < static_cast<unsigned>(rem) ? 1 : 0);
        workers.emplace_back([&fn, &first_error, &error_mutex, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        lo = hi;
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rdc
