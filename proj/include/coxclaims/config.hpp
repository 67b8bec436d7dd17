#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "coxclaims/delay.hpp"
#include "coxclaims/intensity.hpp"

namespace coxclaims {

// Everything a CLI run needs, read from one JSON document:
//
//   {"g": 2, "gamma": [[0.9, 0.1], [0.2, 0.8]], "pi1": [0.5, 0.5],
//    "shapes": [1, 3], "theta": 0.5, "grid": [0, 1, 2, 3],
//    "exposures": [1, 1, 1],
//    "delay": {"family": "exponential", "params": {"rate": 1}},
//    "valuation": 3, "seed": 42}
//
// `gamma` may also be a flat row-major array. `valuation` defaults to the last
// grid point; `delay` defaults to no delay (degenerate at 0).
struct RunConfig {
  ModelSpec model;
  DelayModel delay;
  double valuation;
  std::optional<std::uint64_t> seed;
};

// Throws ValidationError naming the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace coxclaims
