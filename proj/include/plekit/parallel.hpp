#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace plekit {

// Run fn(0..n-1) on up to `threads` workers with a static index split.
// Items must be independent and write only to their own slots; every item
// runs even if some throw, and the exception with the smallest index is
// rethrown, so the observable outcome does not depend on the thread count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    int t = std::clamp(threads, 1, n);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    if (t == 1) {
        for (int i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(t);
        for (int w = 0; w < t; ++w) {
            pool.emplace_back([&, w] {
                for (int i = w; i < n; i += t) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (int i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
    }
}

} // namespace plekit
