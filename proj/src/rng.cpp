#include "ranwire/rng.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace ranwire {

int max_threads() {
    if (const char* env = std::getenv("RANWIRE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::max(1, static_cast<int>(std::min(hw, 8u)));
}

}  // namespace ranwire
