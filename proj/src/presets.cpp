#include "ergo/presets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ergo/kernels.hpp"

namespace ergo {

std::vector<std::string> preset_names() {
  return {"quad-dirac", "quad-period2", "quad-convex", "gauss-golden", "linear"};
}

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "quad-dirac") {
    p.description = "A = -(x-1)^2 on T(x) = -2x mod 1; maximizing measure at the fixed point 2/3";
    p.system = System::minus_doubling();
    p.A = Potential::polynomial({-1.0, 2.0, -1.0});
    p.W = Kernel::closed_quadratic(0.0, 2.0, -1.0);
    p.V_closed = [](double x) { return -x * x / 3.0 + 2.0 * x / 9.0; };
  } else if (name == "quad-period2") {
    p.description = "A = -(x-1/2)^2 on T(x) = -2x mod 1; maximizing measures on {1/3, 2/3}";
    p.system = System::minus_doubling();
    p.A = Potential::polynomial({-0.25, 1.0, -1.0});
    p.W = Kernel::closed_quadratic(0.0, 1.0, -1.0);
    p.V_closed = [](double x) {
      const double v1 = -x * x / 3.0 + x / 9.0;
      const double v2 = -x * x / 3.0 + 5.0 * x / 9.0 - 2.0 / 9.0;
      return std::max(v1, v2);
    };
  } else if (name == "quad-convex") {
    p.description = "A = (x-1/2)^2 on T(x) = -2x mod 1; twist kernel";
    p.system = System::minus_doubling();
    p.A = Potential::polynomial({0.25, -1.0, 1.0});
    p.W = Kernel::closed_quadratic(0.0, -1.0, 1.0);
  } else if (name == "gauss-golden") {
    p.description = "A = 2 log x on the Gauss map; maximizing measure at the golden mean";
    p.system = System::gauss();
    p.A = Potential::log_gauss(2.0);
    p.W = Kernel::gauss_log();
    const double b = kernels::golden();
    p.V_closed = [b](double x) { return -2.0 * std::log1p(x * b) + 2.0 * std::log1p(b * b); };
    p.max_period = 4;
  } else if (name == "linear") {
    p.description = "A = x on T(x) = -2x mod 1";
    p.system = System::minus_doubling();
    p.A = Potential::polynomial({0.0, 1.0});
    p.W = Kernel::closed_quadratic(0.0, 1.0, 0.0);
    p.V_closed = [](double x) { return -x / 3.0 + 2.0 / 9.0; };
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return p;
}

Potential parse_potential(const std::string& literal) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("bad number '" + s + "' in potential '" + literal + "'");
    return v;
  };
  if (literal == "zero") return Potential::zero();
  const auto colon = literal.find(':');
  if (colon == std::string::npos) return preset(literal).A;
  const std::string kind = literal.substr(0, colon), body = literal.substr(colon + 1);
  if (kind == "poly") {
    std::vector<double> c;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) c.push_back(number(item));
    if (c.empty()) throw std::invalid_argument("empty polynomial in '" + literal + "'");
    return Potential::polynomial(c);
  }
  if (kind == "log") return Potential::log_gauss(number(body));
  if (kind == "const") return Potential::constant(number(body));
  throw std::invalid_argument("unknown potential form '" + kind + "'");
}

}  // namespace ergo
