#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qpi/qmath.hpp"

namespace qpi {

// Two-qubit Bell-diagonal state. Stored as the four Bell-basis eigenvalues
// (weights of Phi+, Phi-, Psi+, Psi-); the correlation triple (tx, ty, tz)
// is derived. Conversions:
//   tz = l1 + l2 - l3 - l4
//   tx = l1 - l2 + l3 - l4
//   ty = -l1 + l2 + l3 - l4
class BellDiagonal {
 public:
  static BellDiagonal from_lambdas(double l1, double l2, double l3, double l4);
  static BellDiagonal from_correlations(double tx, double ty, double tz);

  const std::array<double, 4>& lambdas() const { return lam_; }
  double tx() const { return lam_[0] - lam_[1] + lam_[2] - lam_[3]; }
  double ty() const { return -lam_[0] + lam_[1] + lam_[2] - lam_[3]; }
  double tz() const { return lam_[0] + lam_[1] - lam_[2] - lam_[3]; }

  // tz >= tx >= |ty|, equivalently l1 >= l2 >= l3 >= l4.
  bool is_canonical(double tol = kTol.elementwise) const;

 private:
  explicit BellDiagonal(std::array<double, 4> lam) : lam_(lam) {}
  std::array<double, 4> lam_;
};

// The four Bell basis vectors as columns of a 4x4 matrix, in the order
// Phi+, Phi-, Psi+, Psi-.
const cmat& bell_basis();

cmat to_density_matrix(const BellDiagonal& s);

// Local unitaries used by the canonicalization procedure.
enum class FrameOpName : uint8_t { Hzx, Hyz, Hxy, SigmaX, SigmaY, SigmaZ };
enum class FrameSide : uint8_t { Both, Bob };

struct FrameOp {
  FrameOpName name;
  FrameSide side;
};

std::string to_string(const FrameOp& op);

// 2x2 unitary for a frame operation.
cmat frame_unitary(FrameOpName name);

struct LocalFrameRecord {
  std::vector<FrameOp> ops;
  bool empty() const { return ops.empty(); }
};

// Replays a frame record on a 4x4 two-qubit state (test oracle for the
// symbolic procedure).
cmat replay_frame_record(const LocalFrameRecord& rec, const cmat& rho);

// Reorders and sign-fixes the correlation triple so that tz >= tx >= |ty|,
// recording the local unitaries applied. Ties never trigger an operation,
// which makes the procedure idempotent.
std::pair<BellDiagonal, LocalFrameRecord> canonicalize(const BellDiagonal& s);

// |Psi>_ABE on C2 x C2 x C4 purifying a Bell-diagonal state; amplitude
// index is (a<<3) | (b<<2) | e.
struct TripartitePurification {
  cvec amplitudes;  // dimension 16
  cmat projector() const { return amplitudes * amplitudes.adjoint(); }
};

TripartitePurification purify(const BellDiagonal& s);

// Uniform sample from the probability simplex over the four Bell weights
// (sorted-uniform spacings), guaranteeing a valid state.
BellDiagonal random_bell_diagonal(std::mt19937_64& rng);

}  // namespace qpi
