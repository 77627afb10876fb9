#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace mvfsgl {

/// Worker-thread cap. Controlled by the MVFSGL_THREADS environment variable
/// (>= 1); defaults to the hardware concurrency.
inline int max_threads() {
    if (const char* env = std::getenv("MVFSGL_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count). Work items must touch disjoint state.
/// If several items throw, the exception with the lowest index is rethrown.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    if (count <= 0) return;
    const int workers = std::min(count, max_threads());
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
    std::atomic<int> next{0};
    auto body = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<size_t>(i)] = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();

    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace mvfsgl
