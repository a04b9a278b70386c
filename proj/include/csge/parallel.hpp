#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace csge {

// Runs body(begin, end) over contiguous chunks of [0, count) on up to
// `threads` threads. Chunk boundaries depend only on count and threads.
template <typename Body>
void parallel_chunks(long count, int threads, Body&& body) {
    const long workers = std::clamp<long>(threads, 1, std::max<long>(1, count));
    if (workers == 1) {
        body(0L, count);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const long chunk = (count + workers - 1) / workers;
    for (long w = 0; w < workers; ++w) {
        const long begin = w * chunk;
        const long end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
}

// CSGE_THREADS when set and positive, otherwise the hardware concurrency.
int default_thread_count();

}  // namespace csge
