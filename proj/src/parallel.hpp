#ifndef PGBAND_SRC_PARALLEL_HPP
#define PGBAND_SRC_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace pgband::detail {

/// 0 means: THREADS from the environment if set, else hardware concurrency.
inline unsigned resolve_threads(unsigned requested)
{
    if (requested > 0) return requested;
    if (const char* env = std::getenv("THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n). Work items must write to disjoint outputs.
/// When several items throw, the exception of the smallest index wins.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_index(workers, n);
    auto body = [&](std::size_t w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
                error_index[w] = i;
                return;
            }
        }
    };
    if (workers <= 1) {
        body(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
    }
    std::size_t first = workers;
    for (std::size_t w = 0; w < workers; ++w)
        if (errors[w] && (first == workers || error_index[w] < error_index[first])) first = w;
    if (first < workers) std::rethrow_exception(errors[first]);
}

}  // namespace pgband::detail

#endif  // PGBAND_SRC_PARALLEL_HPP
