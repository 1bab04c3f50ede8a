#include "qpi/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpi {

namespace {

constexpr double kSimplexTol = 1e-12;

std::array<double, 4> lambdas_from_t(double tx, double ty, double tz) {
  return {(1 + tx - ty + tz) / 4.0, (1 - tx + ty + tz) / 4.0,
          (1 + tx + ty - tz) / 4.0, (1 - tx - ty - tz) / 4.0};
}

}  // namespace

BellDiagonal BellDiagonal::from_lambdas(double l1, double l2, double l3,
                                        double l4) {
  std::array<double, 4> lam{l1, l2, l3, l4};
  double sum = 0.0;
  for (double& l : lam) {
    if (l < 0.0) {
      if (l < -kSimplexTol)
        throw std::invalid_argument("BellDiagonal: negative eigenvalue");
      l = 0.0;
    }
    sum += l;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw std::invalid_argument("BellDiagonal: eigenvalues must sum to 1");
  return BellDiagonal(lam);
}

BellDiagonal BellDiagonal::from_correlations(double tx, double ty, double tz) {
  auto lam = lambdas_from_t(tx, ty, tz);
  return from_lambdas(lam[0], lam[1], lam[2], lam[3]);
}

bool BellDiagonal::is_canonical(double tol) const {
  return tz() >= tx() - tol && tx() >= std::abs(ty()) - tol;
}

const cmat& bell_basis() {
  static const cmat b = [] {
    const double s = 1.0 / std::sqrt(2.0);
    cmat m(4, 4);
    m.col(0) << s, 0, 0, s;    // Phi+
    m.col(1) << s, 0, 0, -s;   // Phi-
    m.col(2) << 0, s, s, 0;    // Psi+
    m.col(3) << 0, s, -s, 0;   // Psi-
    return m;
  }();
  return b;
}

cmat to_density_matrix(const BellDiagonal& s) {
  const cmat& b = bell_basis();
  cmat rho = cmat::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    rho += s.lambdas()[i] * (b.col(i) * b.col(i).adjoint());
  return rho;
}

std::string to_string(const FrameOp& op) {
  std::string n;
  switch (op.name) {
    case FrameOpName::Hzx: n = "H_zx"; break;
    case FrameOpName::Hyz: n = "H_yz"; break;
    case FrameOpName::Hxy: n = "H_xy"; break;
    case FrameOpName::SigmaX: n = "sigma_x"; break;
    case FrameOpName::SigmaY: n = "sigma_y"; break;
    case FrameOpName::SigmaZ: n = "sigma_z"; break;
  }
  return n + (op.side == FrameSide::Both ? " both" : " Bob");
}

cmat frame_unitary(FrameOpName name) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (name) {
    case FrameOpName::Hzx: return s * (pauli_z() + pauli_x());
    case FrameOpName::Hyz: return s * (pauli_y() + pauli_z());
    case FrameOpName::Hxy: return s * (pauli_x() + pauli_y());
    case FrameOpName::SigmaX: return pauli_x();
    case FrameOpName::SigmaY: return pauli_y();
    case FrameOpName::SigmaZ: return pauli_z();
  }
  throw std::logic_error("frame_unitary: unreachable");
}

cmat replay_frame_record(const LocalFrameRecord& rec, const cmat& rho) {
  cmat out = rho;
  for (const FrameOp& op : rec.ops) {
    cmat u2 = frame_unitary(op.name);
    cmat u = op.side == FrameSide::Both ? tensor(u2, u2)
                                        : tensor(identity(2), u2);
    out = u * out * u.adjoint();
  }
  return out;
}

std::pair<BellDiagonal, LocalFrameRecord> canonicalize(const BellDiagonal& s) {
  double tx = s.tx(), ty = s.ty(), tz = s.tz();
  LocalFrameRecord rec;

  auto emit = [&rec](FrameOpName name, FrameSide side) {
    rec.ops.push_back({name, side});
  };

  // Magnitude ordering. Strict comparisons keep ties as no-ops so the
  // procedure is idempotent.
  if (std::abs(tz) < std::abs(tx)) {
    std::swap(tz, tx);
    emit(FrameOpName::Hzx, FrameSide::Both);
  }
  if (std::abs(tz) < std::abs(ty)) {
    std::swap(tz, ty);
    emit(FrameOpName::Hyz, FrameSide::Both);
  }
  if (std::abs(tx) < std::abs(ty)) {
    std::swap(tx, ty);
    emit(FrameOpName::Hxy, FrameSide::Both);
  }

  // Sign fixing on Bob's side: each Pauli flips the other two correlations.
  if (tz >= 0.0 && tx >= 0.0) {
    // nothing
  } else if (tz >= 0.0 && tx < 0.0) {
    tx = -tx;
    ty = -ty;
    emit(FrameOpName::SigmaZ, FrameSide::Bob);
  } else if (tz < 0.0 && tx >= 0.0) {
    ty = -ty;
    tz = -tz;
    emit(FrameOpName::SigmaX, FrameSide::Bob);
  } else {
    tx = -tx;
    tz = -tz;
    emit(FrameOpName::SigmaY, FrameSide::Bob);
  }

  return {BellDiagonal::from_correlations(tx, ty, tz), rec};
}

TripartitePurification purify(const BellDiagonal& s) {
  const cmat& b = bell_basis();
  cvec amps = cvec::Zero(16);
  for (int i = 0; i < 4; ++i) {
    double w = std::sqrt(s.lambdas()[i]);
    if (w == 0.0) continue;
    for (int a = 0; a < 2; ++a)
      for (int bq = 0; bq < 2; ++bq)
        amps[(a << 3) | (bq << 2) | i] += w * b(2 * a + bq, i);
  }
  return {amps};
}

BellDiagonal random_bell_diagonal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 3> cuts{u(rng), u(rng), u(rng)};
  std::sort(cuts.begin(), cuts.end());
  return BellDiagonal::from_lambdas(cuts[0], cuts[1] - cuts[0],
                                    cuts[2] - cuts[1], 1.0 - cuts[2]);
}

}  // namespace qpi
