#include "pilotwave/batch.hpp"

#include <cstdlib>
#include <string>

namespace pilotwave {

unsigned default_workers() {
  if (const char* env = std::getenv("PILOTWAVE_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

} // namespace pilotwave
