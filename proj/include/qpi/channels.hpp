#pragma once

#include <vector>

#include "qpi/qmath.hpp"

namespace qpi {

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
};

// Single-qubit CPTP map as a list of 2x2 operation elements.
struct KrausChannel {
  std::vector<cmat> ops;

  // Throws std::invalid_argument unless sum E_k^dag E_k = I.
  void validate(double tol = kTol.elementwise) const;
  // sum E_k E_k^dag = I.
  bool is_unital(double tol = kTol.elementwise) const;
};

KrausChannel identity_channel();

// Scales all three Bell-diagonal correlations by (1 - 2q). Valid for
// q in [0, 1/2]; throws std::domain_error otherwise.
KrausChannel depolarizing(double q);

// Unitary rotation in the (x,z)-plane of the Bloch sphere:
// U|0> = cos(t/2)|0> - sin(t/2)|1>, U|1> = sin(t/2)|0> + cos(t/2)|1>.
KrausChannel rotation_channel(double theta);

// f after e: ops {F_j E_k}.
KrausChannel compose(const KrausChannel& f, const KrausChannel& e);

// sum_k E_k rho E_k^dag on a validated qubit state.
cmat apply_channel(const KrausChannel& ch, const cmat& rho);

// (1 x ch) on a two-qubit state, acting on the second qubit.
cmat apply_to_bob(const KrausChannel& ch, const cmat& rho_ab);

// Adjoint map, elements {E_k^dag}. Satisfies
// Tr[rho * dual(ch)(M)] = Tr[apply(ch, rho) * M].
KrausChannel dual(const KrausChannel& ch);

// Constructive unital map sending A0 = sigma_z and a companion source
// operator A1 onto target operators s0z*sigma_z and s1x*sigma_x +
// s1z*sigma_z. Inputs are in the frame with the first target along z and
// the second in the (x,z)-plane, s1x >= 0, and must satisfy
// s0z^2 >= s1x^2 + s1z^2 (throws std::domain_error otherwise; the
// boundary degenerates to a pure rotation with theta = 0, and s1x = 0
// takes the theta = pi branch).
struct UnitalMapConstruction {
  KrausChannel map;   // unital by construction
  cmat source_a0;     // sigma_z
  cmat source_a1;
  cmat target_a0;     // s0z * sigma_z
  cmat target_a1;     // s1x * sigma_x + s1z * sigma_z
  double theta;       // rotation angle of the dephasing element
};

UnitalMapConstruction construct_unital_map(double s0z, double s1x, double s1z);

// Rotates two arbitrary Bloch vectors (|s0| >= |s1|) into the construction
// frame: s0 along +z, s1 in the (x,z)-plane with nonnegative x component.
// Returns (s0z, s1x, s1z) and the SO(3) rotation used.
struct FrameAlignment {
  double s0z, s1x, s1z;
  Eigen::Matrix3d rotation;
};

FrameAlignment frame_align(const BlochVector& s0, const BlochVector& s1);

}  // namespace qpi
