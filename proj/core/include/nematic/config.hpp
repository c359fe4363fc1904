#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nematic/coefficients.hpp"
#include "nematic/grid.hpp"
#include "nematic/solver.hpp"
#include "nematic/state.hpp"

namespace nematic {

struct RunConfig {
  GridPtr grid;
  CoefficientSet coefficients;
  SimState initial;
  SolverConfig solver;
  std::string initial_description;  // preset name or "modes"
  std::vector<std::string> warnings;
  std::string text;  // the parsed source, verbatim
};

/// Parses sections [grid], [coefficients], [initial-data] and [solver].
/// Unknown keys, malformed values and failed ellipticity are errors carrying
/// source:line; an inadmissible dissipation at theta_ref is a warning.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<string>",
                            std::optional<std::uint64_t> seed_override = std::nullopt);
RunConfig parse_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace nematic
