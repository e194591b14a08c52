#pragma once

#include <exception>
#include <thread>
#include <vector>

namespace grouplaw {

inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Split [0, n) into contiguous chunks, run `chunk(lo, hi)` on worker threads,
// and fold the partial results left-to-right in chunk order. Results are
// bitwise independent of the thread count as long as the fold is associative
// over the chunk boundaries (integer sums in practice).
template <class T, class Chunk>
T parallel_chunks(long long n, int threads, T init, Chunk chunk) {
    int k = effective_threads(threads);
    if (n <= 0) return init;
    if (k > n) k = static_cast<int>(n);
    if (k <= 1) {
        T only = chunk(0, n);
        init += only;
        return init;
    }
    std::vector<T> partial(static_cast<std::size_t>(k), init);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
    std::vector<std::thread> pool;
    pool.reserve(k);
    for (int t = 0; t < k; ++t) {
        long long lo = n * t / k;
        long long hi = n * (t + 1) / k;
        pool.emplace_back([&, t, lo, hi]() {
            try {
                partial[static_cast<std::size_t>(t)] = chunk(lo, hi);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    T out = init;
    for (auto& p : partial) out += p;
    return out;
}

// Count trials satisfying a predicate, in parallel.
template <class Pred>
long long parallel_count(long long trials, int threads, Pred pred) {
    return parallel_chunks<long long>(trials, threads, 0,
                                      [&](long long lo, long long hi) {
                                          long long c = 0;
                                          for (long long t = lo; t < hi; ++t)
                                              if (pred(t)) ++c;
                                          return c;
                                      });
}

}  // namespace grouplaw
