#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cep {

namespace detail {
inline std::atomic<unsigned>& jobs_setting()
{
    static std::atomic<unsigned> jobs{1};
    return jobs;
}
} // namespace detail

/// Worker count used by the closure and containment explorations. Results
/// never depend on it.
inline unsigned default_jobs() { return detail::jobs_setting().load(); }
inline void set_default_jobs(unsigned k) { detail::jobs_setting().store(std::max(1u, k)); }

namespace detail {

/// out[i] = fn(i) for i < n, computed by up to `jobs` threads. Each slot is
/// written by exactly one worker, so the result is order independent.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, unsigned jobs = default_jobs())
{
    std::vector<T> out(n);
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    const unsigned k = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    std::vector<std::thread> threads;
    threads.reserve(k);
    for (unsigned t = 0; t < k; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

} // namespace detail
} // namespace cep
