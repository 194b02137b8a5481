#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fracount {

// Blocked parallel map over [0, n). Work is partitioned statically so
// results depend only on the index, never on scheduling.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const unsigned t = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += t) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// Deterministic float formatting for CSV output.
inline std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace fracount
