#include "hrl/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hrl {

namespace {
std::atomic<std::size_t> g_threads{0};
}

std::size_t default_threads() {
    if (const std::size_t n = g_threads.load(); n > 0) return n;
    if (const char* env = std::getenv("HRL_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void set_default_threads(std::size_t n) { g_threads.store(n); }

}  // namespace hrl
