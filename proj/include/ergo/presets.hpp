#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ergo/dynamics.hpp"
#include "ergo/involution.hpp"
#include "ergo/potential.hpp"

namespace ergo {

/// Named example: system, potential and its involution kernel (A* = A for
/// every preset). V_closed, when set, is the calibrated subaction in closed
/// form, normalized to vanish on the maximizing support.
struct Preset {
  std::string name;
  std::string description;
  System system;
  Potential A;
  Kernel W;
  std::function<double(double)> V_closed;
  int max_period = 12;
};

std::vector<std::string> preset_names();
/// Throws std::invalid_argument for an unknown name.
Preset preset(const std::string& name);

/// "poly:c0,c1,...", "log:s" (s log x), "const:k", "zero", or a preset name.
Potential parse_potential(const std::string& literal);

}  // namespace ergo
