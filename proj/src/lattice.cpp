#include "offload/lattice.hpp"

namespace offload {

ValueTable::ValueTable(int horizon, int steps, int locations)
    : horizon_(horizon), steps_(steps), locations_(locations),
      data_(static_cast<std::size_t>(horizon + 1) * (steps + 1) * locations, 0.0) {}

Policy::Policy(int horizon, int steps, int locations)
    : horizon_(horizon), steps_(steps), locations_(locations),
      data_(static_cast<std::size_t>(horizon) * (steps + 1) * locations, Action::Idle) {}

}  // namespace offload
