#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace extlab {

// Violation of a truncation guard: the requested computation needs objects or
// tuples outside the finite skeleton.  Never silent; the CLI maps this to
// exit code 2.
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Chunked parallel loop over [0, n); results must be written to per-index
// slots by the body.  jobs <= 1 runs inline.
inline void parallel_for(size_t n, unsigned jobs, const std::function<void(size_t)>& body) {
    if (jobs <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= n) break;
                body(i);
            }
        });
    for (auto& t : pool) t.join();
}

}  // namespace extlab
