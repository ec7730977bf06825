#include "moblab/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace moblab {

namespace {
std::atomic<int> g_threads{0};
thread_local bool t_in_parallel = false;  // nested loops run serially
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
    int n = g_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for_index(i64 n, const std::function<void(i64)>& fn) {
    if (n <= 0) return;
    int workers = std::min<i64>(thread_count(), n);
    if (workers <= 1 || t_in_parallel) {
        for (i64 i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<i64> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        t_in_parallel = true;
        for (;;) {
            i64 i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace moblab
