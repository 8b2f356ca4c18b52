#pragma once

// Deterministic fan-out over independent work items.  Results are stored
// by index, so the output order never depends on scheduling.  The
// K3LAT_THREADS environment variable caps the worker count.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace k3lat {

inline unsigned thread_cap() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("K3LAT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < static_cast<long>(hw)) return static_cast<unsigned>(v);
        if (v >= static_cast<long>(hw)) return hw;
        return 1;
    }
    return hw;
}

template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, Fn fn)
    -> std::vector<decltype(fn(items.front()))> {
    using Out = decltype(fn(items.front()));
    std::vector<Out> results(items.size());
    unsigned workers = std::min<unsigned>(thread_cap(), static_cast<unsigned>(items.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
        return results;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            try {
                results[i] = fn(items[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace k3lat
