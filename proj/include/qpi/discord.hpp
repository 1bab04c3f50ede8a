#pragma once

#include <array>

#include "qpi/channels.hpp"
#include "qpi/states.hpp"

namespace qpi {

// Two-outcome qubit measurement with elements
//   B_b = ((1 + (-1)^b c) I + (-1)^b t.sigma) / 2.
// Positivity requires |c| <= 1 - |t|; the elements sum to the identity by
// construction.
struct PovmPair {
  BlochVector bloch;
  double bias = 0.0;

  void validate() const;
  cmat element(int b) const;
  // The +/-1-valued operator B_0 - B_1 = c I + t.sigma.
  cmat observable() const;
  bool is_projective(double tol = kTol.elementwise) const;

  static PovmPair projective(const BlochVector& direction);
};

// Centered correlators Q_xy = <A_x B_y> - <A_x><B_y>.
struct WitnessTable {
  std::array<std::array<double, 2>, 2> q{};
};

WitnessTable correlators_eb(const cmat& rho_ab, const PovmPair& a0,
                            const PovmPair& a1, const PovmPair& b0,
                            const PovmPair& b1);

// Determinant of the correlator table.
double witness(const WitnessTable& w);

// Prepare-and-measure witness from the table p[x][a][y] of b = 0
// probabilities: determinant of (p(x0y) - p(x1y)).
double witness_pm(const std::array<std::array<std::array<double, 2>, 2>, 2>& p);

// |tz * tx| of a canonical state. Throws std::invalid_argument on
// non-canonical input.
double witness_max(const BellDiagonal& canonical);

// Closed-form discord of a canonical Bell-diagonal state:
//   1 - (l1+l2) h(l2/(l1+l2)) - (l3+l4) h(l4/(l3+l4)),
// empty groups contributing zero.
double discord_closed_form(const BellDiagonal& canonical);

// Grid + pattern-search minimization of
//   sum_b p_b S(rho_A|b) + S(rho_B) - S(rho_AB)
// over projective measurements on B. Deterministic: grid minimum takes the
// lexicographically smallest (phi, theta) index on ties, refinement is a
// fixed 40-step pattern search with shrink factor 1/2.
struct BruteForceOptions {
  int phi_points = 181;
  int theta_points = 91;
  int refine_iterations = 40;
};

double discord_brute_force(const cmat& rho_ab,
                           const BruteForceOptions& opt = {});

// H(B0|E) = H(A B0) - H(AB) for the purification, with B0 the projective
// measurement along `direction` on Bob's qubit.
double conditional_entropy_b0(const BellDiagonal& s,
                              const BlochVector& direction);

// Minimum of conditional_entropy_b0 over measurement directions (same grid
// and refinement machinery as the brute-force discord).
double min_conditional_entropy_b0(const BellDiagonal& s,
                                  const BruteForceOptions& opt = {});

// 1 - h((1 - |w|)/2); throws std::domain_error for |w| > 1.
double discord_lower_bound(double w);

}  // namespace qpi
