#include "tactilemap/threading.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

extern "C" void openblas_set_num_threads(int);

namespace tactilemap {

static int resolve_worker_count() {
    int hw = int(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int n = hw;
    if (const char* env = std::getenv("TACTILEMAP_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    openblas_set_num_threads(n);
    return n;
}

int worker_count() {
    static int n = resolve_worker_count();
    return n;
}

void parallel_for(size_t n, const std::function<void(size_t, size_t)>& body) {
    size_t workers = std::min<size_t>(worker_count(), n);
    if (workers <= 1) {
        if (n > 0) body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        size_t begin = w * chunk;
        size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace tactilemap
