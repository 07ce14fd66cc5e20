#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace otoc::core {

/// Worker count: OTOC_THREADS if set (>=1), else hardware concurrency.
inline unsigned thread_count() {
    if (const char* env = std::getenv("OTOC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs f(i) for i in [0, n). Each index writes only its own slot in the
/// caller's output, so results do not depend on the partition.
template <class F>
void parallel_for_index(std::size_t n, F&& f) {
    const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (unsigned w = 0; w < nt; ++w) {
        workers.emplace_back([&, w] {
            const std::size_t lo = static_cast<std::size_t>(w) * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            try {
                for (std::size_t i = lo; i < hi; ++i) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace otoc::core
