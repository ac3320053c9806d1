#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace aloha {

// Worker cap: min(hardware threads, ALOHA_THREADS). Re-read on every call
// so tests can vary it.
inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("ALOHA_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned long>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

// Runs fn(begin, end, chunk_index) over fixed-size chunks of [0, n).
// Chunk boundaries depend only on n and chunk_size, never on the worker
// count, so callers that store per-chunk partials and merge them in chunk
// order get bit-identical results at any parallelism level. The first
// exception a worker throws is rethrown on the calling thread.
inline void parallel_chunks(std::uint64_t n, std::uint64_t chunk_size,
                            const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::uint64_t n_chunks = (n + chunk_size - 1) / chunk_size;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), n_chunks));

    if (workers <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c)
            fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), static_cast<std::size_t>(c));
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&] {
        try {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= n_chunks || failed.load(std::memory_order_relaxed)) return;
                fn(c * chunk_size, std::min(n, (c + 1) * chunk_size),
                   static_cast<std::size_t>(c));
            }
        } catch (...) {
            const std::scoped_lock lock(error_mu);
            if (!error) error = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::uint64_t chunk_count(std::uint64_t n, std::uint64_t chunk_size) {
    return chunk_size == 0 ? n : (n + chunk_size - 1) / chunk_size;
}

}  // namespace aloha
