#ifndef BILINEARFQ_PARALLEL_HPP
#define BILINEARFQ_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bfq::parallel {

namespace detail {
inline std::atomic<unsigned>& worker_setting() {
    static std::atomic<unsigned> workers{1};
    return workers;
}
}  // namespace detail

/// Worker count used by the counting loops. 0 selects hardware concurrency.
inline void set_workers(unsigned n) {
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    detail::worker_setting().store(n);
}

inline unsigned workers() { return detail::worker_setting().load(); }

/// Splits [0, n) into contiguous chunks, runs `body(chunk_index, begin, end)`
/// on each, and returns the per-chunk results in chunk order. Callers combine
/// them with an order-independent (integer or set) reduction, so results do
/// not depend on the worker count.
template <typename Result, typename Body>
std::vector<Result> map_chunks(std::size_t n, Body&& body) {
    const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(workers(), n));
    std::vector<Result> out(w);
    if (w == 1) {
        out[0] = body(std::size_t{0}, std::size_t{0}, n);
        return out;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(w);
    threads.reserve(w);
    for (std::size_t c = 0; c < w; ++c) {
        const std::size_t begin = n * c / w;
        const std::size_t end = n * (c + 1) / w;
        threads.emplace_back([&, c, begin, end] {
            try {
                out[c] = body(c, begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

template <typename Body>
void for_each_index(std::size_t n, Body&& body) {
    map_chunks<char>(n, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return char{0};
    });
}

}  // namespace bfq::parallel

#endif  // BILINEARFQ_PARALLEL_HPP
