#pragma once

#include "nilact/affine.hpp"
#include "nilact/spectral.hpp"

namespace nilact::instances {

// Arnold cat map, the standard Sp(2,Z) = SL(2,Z) hyperbolic element.
IntMat cat_map();

// Sp(4,Z), char poly t^4 - 7t^3 + 13t^2 - 7t + 1, irreducible, totally real
// hyperbolic (r1 = 4): the block form [[0, I], [-I, S]] with S = [[3,1],[1,4]].
IntMat symplectic4_real();

// Sp(4,Z), char poly t^4 - 5t^3 + 9t^2 - 5t + 1, irreducible, hyperbolic
// with two complex pairs off the unit circle (r1 = 0, r2 = 2).
IntMat symplectic4_complex();

// Sp(6,Z), char poly t^6 - 13t^5 + 55t^4 - 89t^3 + 55t^2 - 13t + 1,
// irreducible, totally real hyperbolic: [[0, I], [-I, S]],
// S = [[3,1,0],[1,4,1],[0,1,6]].
IntMat symplectic6_real();

// Lehmer's degree-10 polynomial t^10+t^9-t^7-t^6-t^5-t^4-t^3+t+1.
IntPoly lehmer_polynomial();

// Rank-2 torus action by two multiplicatively independent units of a totally
// real quartic order: C = companion of t^4-7t^3+13t^2-7t+1 and C - I.
ActionSpec quartic_units_action();

// Rank-2 block action diag(cat, I), diag(I, cat) on T^4; has a rank-1 factor.
ActionSpec block_action();

ActionSpec cat_action(); // k = 1

} // namespace nilact::instances
