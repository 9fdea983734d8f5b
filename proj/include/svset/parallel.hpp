#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace svset {

// Worker cap: SVSET_THREADS when set, hardware concurrency otherwise.
inline int max_workers() {
    if (const char* env = std::getenv("SVSET_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(chunk_index, begin, end) over fixed-size chunks of [0, total).
// Chunk boundaries depend only on (total, chunk_size), never on the worker
// count, so callers that reduce per-chunk results in chunk order obtain
// bit-identical output for any thread count.
template <class F>
inline void parallel_chunks(std::int64_t total, std::int64_t chunk_size, F&& body) {
    if (total <= 0) return;
    if (chunk_size <= 0) chunk_size = 1;
    const std::int64_t nchunks = (total + chunk_size - 1) / chunk_size;
    const int workers = std::min<std::int64_t>(max_workers(), nchunks);
    if (workers <= 1) {
        for (std::int64_t c = 0; c < nchunks; ++c)
            body(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto run = [&] {
        for (;;) {
            std::int64_t c = next.fetch_add(1);
            if (c >= nchunks) break;
            body(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

inline constexpr std::int64_t kDefaultChunk = 1024;

}  // namespace svset
