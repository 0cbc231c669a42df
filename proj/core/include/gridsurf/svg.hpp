#pragma once

#include <string>

#include "gridsurf/divcode.hpp"
#include "gridsurf/link.hpp"
#include "gridsurf/mirror.hpp"
#include "gridsurf/surface.hpp"

namespace gridsurf {

struct SvgStyle {
  int cell = 28;       // grid cell size in px
  int margin = 24;
  bool draw_dividing = true;  // plus curves green, minus curves red
};

/// Grid square drawn as a cut torus; rectangles hatched; the boundary drawn
/// with vertical edges passing over horizontal ones.
std::string render_svg(const SurfaceDiagram& pi, const SvgStyle& style = {});

std::string render_svg(const LinkDiagram& R, const SvgStyle& style = {});

/// Mirrors drawn as dashes slanted at +-45 degrees.
std::string render_svg(const EnhancedMirrorDiagram& em, const SvgStyle& style = {});

}  // namespace gridsurf
