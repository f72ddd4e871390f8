#include "landau/reduce.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace landau {

int worker_count() {
    if (const char* env = std::getenv("LF_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v <= 256) return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

double tol_scale() {
    if (const char* env = std::getenv("LF_TOL_SCALE")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0.0 && v < 1e6) return v;
    }
    return 1.0;
}

double pairwise_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n <= 16) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

void parallel_blocks(std::size_t nblocks, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(worker_count(), nblocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= nblocks) return;
                fn(b);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace landau
