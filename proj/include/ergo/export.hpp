#pragma once

#include <string>

#include <json.hpp>

#include "ergo/ergopt.hpp"
#include "ergo/grid.hpp"
#include "ergo/involution.hpp"
#include "ergo/transport.hpp"

namespace ergo {

using Json = nlohmann::ordered_json;

/// 17 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_real(double x);

/// Writes bytes verbatim (LF line endings), creating parent directories.
void write_file(const std::string& path, const std::string& content);

std::string grid_csv(const GridFunction& g);
/// `x,y,W` rows on the nodes i/n, j/n.
std::string kernel_csv(const Kernel& W, int n);

Json to_json(const PeriodicOrbit& orbit);
Json to_json(const SubactionResult& r);
Json to_json(const TwistReport& r);
Json to_json(const TransportPlan& plan);
Json to_json(const DualityReport& r);
Json to_json(const MonotonicityReport& r);
Json to_json(const GraphReport& r);

/// Non-finite reals become the strings "inf", "-inf", "nan".
Json real_json(double x);

}  // namespace ergo
