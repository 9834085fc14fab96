#include "amp/parallel.hpp"

#include <cstdlib>
#include <string>

namespace amp {

int worker_count() {
  if (const char* env = std::getenv("AMP_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace amp
