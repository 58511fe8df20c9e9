#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace perc {

// Worker count: PERC_THREADS overrides hardware concurrency. Results never
// depend on it (fixed merge tree below).
inline int worker_count() {
    if (const char* env = std::getenv("PERC_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

constexpr std::int64_t kDefaultBlock = 1024;

// Deterministic block-parallel map-reduce over item indices [0, count).
// Each block [first, last) is processed sequentially into its own Acc by
// `body(first, last, acc)`; block results are folded left-to-right in block
// order, so the result is identical for any worker count.
template <typename Acc, typename Body>
Acc run_blocks(std::int64_t count, std::int64_t block, Body&& body, int workers = 0) {
    if (block <= 0) block = kDefaultBlock;
    const std::int64_t nblocks = count <= 0 ? 0 : (count + block - 1) / block;
    std::vector<Acc> partial(static_cast<std::size_t>(nblocks));
    if (workers <= 0) workers = worker_count();
    if (workers == 1 || nblocks <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b) {
            std::int64_t first = b * block;
            std::int64_t last = std::min(count, first + block);
            body(first, last, partial[std::size_t(b)]);
        }
    } else {
        std::atomic<std::int64_t> next{0};
        auto work = [&]() {
            for (;;) {
                std::int64_t b = next.fetch_add(1);
                if (b >= nblocks) return;
                std::int64_t first = b * block;
                std::int64_t last = std::min(count, first + block);
                body(first, last, partial[std::size_t(b)]);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    Acc total{};
    for (auto& p : partial) total.merge(p);
    return total;
}

} // namespace perc
