#include "rpz/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rpz {

int default_workers() {
  if (const char* env = std::getenv("RPZ_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace rpz
