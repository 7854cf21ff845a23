#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace cl3q::detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Contiguous split of [0,n) into chunks, one worker per chunk. Callers size
// their per-chunk accumulators with plan.chunks and merge in chunk order, so
// results stay deterministic for any thread count.
struct ChunkPlan {
    long long n = 0;
    long long chunk = 0;
    int chunks = 0;
};

inline ChunkPlan plan_chunks(long long n, int requested_threads) {
    ChunkPlan p;
    p.n = n;
    int t = std::max(1, resolve_threads(requested_threads));
    p.chunk = std::max<long long>(1, (n + t - 1) / t);
    p.chunks = static_cast<int>((n + p.chunk - 1) / p.chunk);
    if (n == 0) p.chunks = 0;
    return p;
}

template <typename Fn> // Fn(begin, end, chunk_index)
void run_chunks(const ChunkPlan& p, Fn&& fn) {
    if (p.chunks <= 1) {
        if (p.n > 0) fn(0LL, p.n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(p.chunks);
    for (int i = 0; i < p.chunks; ++i) {
        long long b = i * p.chunk, e = std::min(p.n, b + p.chunk);
        pool.emplace_back([&fn, b, e, i] { fn(b, e, i); });
    }
    for (auto& th : pool) th.join();
}

} // namespace cl3q::detail
