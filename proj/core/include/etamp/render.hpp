#ifndef ETAMP_RENDER_HPP
#define ETAMP_RENDER_HPP

#include <string>
#include <vector>

#include "etamp/world.hpp"

namespace etamp {

struct RenderOptions {
  double scale = 60.0;  // px per meter
  double margin_m = 0.5;
};

// Deterministic SVG bytes: fixed %.3f formatting, stable element order,
// no timestamps or generated ids.
std::string render_svg(const WorldState& w,
                       const std::vector<std::vector<Config>>& paths = {},
                       const RenderOptions& opts = {});

}  // namespace etamp

#endif
