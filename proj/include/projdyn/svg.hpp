#pragma once

// Small SVG emitters: the arrangement's real slice with labeled q-points.
// The polygon diagram emitter lives with the block machinery in frances.hpp.

#include <string>

#include "projdyn/arrangements.hpp"

namespace projdyn {

// Real slice of the affine arrangement l0..l3 for a (real-part) parameter,
// with the intersection points q_{i,j} labeled.
std::string arrangement_svg(double zeta1, double zeta2);

}  // namespace projdyn
