#pragma once

namespace lcm {

/// Area of the disc of radius t centred at the origin intersected with the
/// rectangle [-half_width, half_width] x [-half_height, half_height].
double disc_rectangle_area(double t, double half_width, double half_height);

}  // namespace lcm
