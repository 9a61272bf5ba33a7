#pragma once

namespace symstable {

/// Principal branch W0 of the Lambert W function: the w >= -1 solving
/// w e^w = x. Throws Errc::domain for x < -1/e.
double lambert_w0(double x);

}  // namespace symstable
