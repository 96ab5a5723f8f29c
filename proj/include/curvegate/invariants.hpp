#pragma once

// Makhlin local invariants of two-qubit gates.

#include "curvegate/qmat.hpp"

namespace curvegate {

struct MakhlinPair {
  cplx g1;
  double g2 = 0.0;
};

// Throws InputError if ||U^dagger U - I||_F > 1e-8 or |Im G2| > 1e-8.
MakhlinPair makhlin(const Mat4& u);

// Closed forms for exp(-i (J/4) Z (x) (R . sigma)): (cos^2(J|R|/2), 2 + cos(J|R|)).
MakhlinPair predicted_invariants(double j, double r_final);

struct RotationAngle {
  double theta = 0.0;     // in [0, pi/2]
  double residual = 0.0;  // |G2 - 2 - cos(2 theta)|
};

// Conditional X-rotation angle from G1; G2 serves as a consistency check.
// Throws InputError when the pair is farther than 0.05 from the family.
RotationAngle conditional_rotation_angle(const MakhlinPair& pair);

// |G1|^2 + |G2 - 1|^2; zero exactly for gates locally equivalent to CNOT.
double makhlin_cost(const Mat4& u);
double makhlin_cost(const MakhlinPair& pair);

// The Bell-basis change of frame used by the invariants.
const Mat4& magic_basis();

}  // namespace curvegate
