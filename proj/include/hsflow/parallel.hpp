#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hsflow {

/// Worker count: explicit override if set, else HSF_WORKERS, else 1.
int worker_count();
void set_worker_count(int n);

/// Runs f(begin, end) over contiguous chunks of [0, n). Chunks never overlap,
/// so point-local writes need no synchronisation. An exception from the
/// lowest-indexed failing chunk is rethrown after all workers finish.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    const auto workers = static_cast<std::size_t>(std::max(1, worker_count()));
    if (workers == 1 || n < 2 * workers) {
        f(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(n, b + chunk);
            if (b >= e) break;
            pool.emplace_back([&f, &errors, w, b, e] {
                try {
                    f(b, e);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        try {
            f(std::size_t{0}, std::min(n, chunk));
        } catch (...) {
            errors[0] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace hsflow
