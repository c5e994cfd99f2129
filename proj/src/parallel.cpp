#include "liouspec/parallel.hpp"

#include <cstdlib>
#include <string>

namespace liouspec {

int default_workers() {
    const char* env = std::getenv("LIOUSPEC_WORKERS");
    if (!env) return 1;
    try {
        const int n = std::stoi(env);
        return n > 0 ? n : 1;
    } catch (...) {
        return 1;
    }
}

} // namespace liouspec
