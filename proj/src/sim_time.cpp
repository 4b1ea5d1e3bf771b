#include "afsim/sim_time.hpp"

#include <cstdio>

namespace afsim {

std::string SimTime::to_string() const {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9fs", seconds());
  return buf;
}

}  // namespace afsim
