#ifndef PEELKIT_SVG_RENDER_HPP
#define PEELKIT_SVG_RENDER_HPP

#include <string>

#include "peelkit/peeling.hpp"

namespace peelkit {

/// SVG rendering of a decomposition whose hull is 2-dimensional: one closed
/// path per piece with a stage-graded fill, cut hyperplanes as dashed
/// segments. Deterministic bytes for a fixed input. Throws when the hull
/// dimension is not 2.
std::string render_decomposition_svg(const PeelDecomposition& dec, int width = 800,
                                     int height = 800, double stroke_scale = 1.0);

/// Dimension-independent summary (piece counts, radii, stage histogram) as
/// canonical JSON; the rendering fallback for hull dimensions other than 2.
std::string decomposition_summary_json(const PeelDecomposition& dec);

} // namespace peelkit

#endif
