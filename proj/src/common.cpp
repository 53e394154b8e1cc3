#include "denjoy/common.hpp"

#include <cstdlib>

namespace denjoy {

unsigned thread_count() {
    static unsigned n = [] {
        const char* env = std::getenv("DENJOY_THREADS");
        if (env == nullptr) return 1u;
        long v = std::strtol(env, nullptr, 10);
        if (v < 1) return 1u;
        unsigned hw = std::thread::hardware_concurrency();
        return static_cast<unsigned>(std::min<long>(v, hw > 0 ? hw : 1));
    }();
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = thread_count();
    if (workers <= 1 || n < 2048) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace denjoy
