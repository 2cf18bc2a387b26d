#pragma once

#include <string>

#include "lienard/cycles.hpp"

namespace lienard {

struct PortraitOptions {
  double x_min = -4, x_max = 4, y_min = -4, y_max = 4;
  /// Pixel width; the height follows the aspect ratio of the box.
  int width = 640;
  int sample_orbits = 8;
  double orbit_time = 30.0;
};

/// Static SVG: axes, the positive y-axis section, every cycle, and sample
/// orbits started on the section. Output is deterministic.
std::string phase_portrait_svg(const LienardField& field, const CycleSet& cycles, const PortraitOptions& options,
                               const FlowSettings& settings = {});

}  // namespace lienard
