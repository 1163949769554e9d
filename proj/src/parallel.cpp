#include "hsflow/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace hsflow {

namespace {
std::atomic<int> g_override{0};
}

int worker_count() {
    if (const int o = g_override.load(); o > 0) return o;
    if (const char* env = std::getenv("HSF_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    return 1;
}

void set_worker_count(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace hsflow
