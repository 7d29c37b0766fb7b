#pragma once

#include "horoforge/core/bifunctional.hpp"

namespace horoforge::geometry {

/// I(x + iy, t) = log(y + (t + x)^2 / y) on the upper half-plane x R.
///
/// The witness t stands for the boundary point -t. Oracle: hyperbolic distance.
/// Group data [a, b, c, d] is a real matrix of determinant 1; see minsky_action.
Bifunctional minsky_half_plane();

/// Mobius action on the half-plane; on witnesses t -> -g(-t).
///
/// Only translations preserve I exactly. A general element shifts I(., t) by a
/// constant depending on t alone, so horofunctions and distances are invariant.
/// Throws InvalidPointError when the determinant differs from 1 by more than 1e-9.
GroupElement minsky_action(double a, double b, double c, double d);

} // namespace horoforge::geometry
