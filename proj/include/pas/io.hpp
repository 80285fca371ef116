#pragma once

#include <string>

#include "pas/channel.hpp"

namespace pas {

/// {"nin": .., "nout": .., "w": [row-major], "input_points": [..]}
std::string dmc_to_json(const Dmc& dmc);
Dmc dmc_from_json(const std::string& text);

}  // namespace pas
