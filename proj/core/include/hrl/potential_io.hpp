#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "hrl/potentials.hpp"

namespace hrl {

/// Parses {"kind": ..., "support": [lo, hi], "params": {...}}.
///
/// kinds and params:
///   step                {"height"}
///   bump                {"amplitude"=1, "sharpness"=1}
///   gaussian-truncated  {"amplitude", "center", "width"}
///   piecewise-linear    {"knots": [[x, v], ...]}
///   tabulated           top-level "samples": [[x, v], ...]
///   composite           {"components": [<potential>, ...]}
/// Optional top-level "factor" and "xscale" apply V -> factor * V(xscale x).
Potential potential_from_json(const nlohmann::json& j);
nlohmann::json potential_to_json(const Potential& v);
Potential load_potential(const std::filesystem::path& path);

}  // namespace hrl
