#include "qpi/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qpi {

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

void KrausChannel::validate(double tol) const {
  if (ops.empty())
    throw std::invalid_argument("KrausChannel: no operation elements");
  cmat sum = cmat::Zero(2, 2);
  for (const cmat& e : ops) {
    if (e.rows() != 2 || e.cols() != 2)
      throw std::invalid_argument("KrausChannel: elements must be 2x2");
    sum += e.adjoint() * e;
  }
  if ((sum - identity(2)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("KrausChannel: completeness violated");
}

bool KrausChannel::is_unital(double tol) const {
  cmat sum = cmat::Zero(2, 2);
  for (const cmat& e : ops) sum += e * e.adjoint();
  return (sum - identity(2)).cwiseAbs().maxCoeff() <= tol;
}

KrausChannel identity_channel() { return {{identity(2)}}; }

KrausChannel depolarizing(double q) {
  if (!(q >= 0.0 && q <= 0.5))
    throw std::domain_error("depolarizing: q must lie in [0, 1/2], got " +
                            std::to_string(q));
  // Pauli mixture with weight 2q spread over the three Paulis scales every
  // Bloch component by 1 - 2q.
  KrausChannel ch;
  ch.ops.push_back(std::sqrt(1.0 - 1.5 * q) * identity(2));
  double w = std::sqrt(q / 2.0);
  if (w > 0.0) {
    ch.ops.push_back(w * pauli_x());
    ch.ops.push_back(w * pauli_y());
    ch.ops.push_back(w * pauli_z());
  }
  return ch;
}

KrausChannel rotation_channel(double theta) {
  double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  cmat u(2, 2);
  u << c, s, -s, c;
  return {{u}};
}

KrausChannel compose(const KrausChannel& f, const KrausChannel& e) {
  KrausChannel out;
  for (const cmat& fj : f.ops)
    for (const cmat& ek : e.ops) out.ops.push_back(fj * ek);
  return out;
}

cmat apply_channel(const KrausChannel& ch, const cmat& rho) {
  ch.validate();
  if (rho.rows() != 2 || rho.cols() != 2)
    throw std::invalid_argument("apply_channel: state must be 2x2");
  cmat out = cmat::Zero(2, 2);
  for (const cmat& e : ch.ops) out += e * rho * e.adjoint();
  return out;
}

cmat apply_to_bob(const KrausChannel& ch, const cmat& rho_ab) {
  ch.validate();
  if (rho_ab.rows() != 4 || rho_ab.cols() != 4)
    throw std::invalid_argument("apply_to_bob: state must be 4x4");
  cmat out = cmat::Zero(4, 4);
  for (const cmat& e : ch.ops) {
    cmat lifted = tensor(identity(2), e);
    out += lifted * rho_ab * lifted.adjoint();
  }
  return out;
}

KrausChannel dual(const KrausChannel& ch) {
  KrausChannel out;
  for (const cmat& e : ch.ops) out.ops.push_back(e.adjoint());
  return out;
}

UnitalMapConstruction construct_unital_map(double s0z, double s1x,
                                           double s1z) {
  if (!(s0z > 0.0 && s0z <= 1.0 + kTol.elementwise))
    throw std::domain_error("construct_unital_map: s0z must lie in (0, 1]");
  if (s1x < 0.0)
    throw std::domain_error(
        "construct_unital_map: frame convention requires s1x >= 0");
  double gap2 = s0z * s0z - s1x * s1x - s1z * s1z;
  if (gap2 < -kTol.elementwise)
    throw std::domain_error(
        "construct_unital_map: targets infeasible, |s1| exceeds |s0|");
  double k = std::sqrt(std::max(0.0, gap2));

  double theta =
      s1x == 0.0 ? std::numbers::pi : 2.0 * std::atan2(k, s1x);

  // Dephasing element: equal mixture of identity and a z-rotation chosen so
  // the source's sigma_y component cancels.
  cmat rz = std::cos(theta / 2.0) * identity(2) +
            cplx(0, 1) * std::sin(theta / 2.0) * pauli_z();
  KrausChannel e2;
  double half = std::sqrt(0.5);
  e2.ops.push_back(half * identity(2));
  e2.ops.push_back(half * rz);

  // Shrinking element: mixture of identity and sigma_y scales the (x,z)
  // components by s0z and keeps sigma_y fixed.
  KrausChannel e1;
  e1.ops.push_back(std::sqrt((1.0 + s0z) / 2.0) * identity(2));
  e1.ops.push_back(std::sqrt((1.0 - s0z) / 2.0) * pauli_y());

  UnitalMapConstruction out;
  out.map = compose(e1, e2);
  out.theta = theta;
  out.source_a0 = pauli_z();
  out.source_a1 = (s1x * pauli_x() + k * pauli_y() + s1z * pauli_z()) / s0z;
  out.target_a0 = s0z * pauli_z();
  out.target_a1 = s1x * pauli_x() + s1z * pauli_z();

  out.map.validate();
  auto act = [&out](const cmat& a) {
    cmat r = cmat::Zero(2, 2);
    for (const cmat& e : out.map.ops) r += e * a * e.adjoint();
    return r;
  };
  if ((act(out.source_a0) - out.target_a0).cwiseAbs().maxCoeff() >
          10 * kTol.elementwise ||
      (act(out.source_a1) - out.target_a1).cwiseAbs().maxCoeff() >
          10 * kTol.elementwise)
    throw std::logic_error("construct_unital_map: verification failed");
  return out;
}

FrameAlignment frame_align(const BlochVector& s0, const BlochVector& s1) {
  double n0 = s0.norm(), n1 = s1.norm();
  if (n0 <= 0.0)
    throw std::domain_error("frame_align: first target must be nonzero");
  if (n1 > n0 + kTol.elementwise)
    throw std::domain_error("frame_align: |s1| exceeds |s0|");

  Eigen::Vector3d v0(s0.x, s0.y, s0.z), v1(s1.x, s1.y, s1.z);
  Eigen::Vector3d zhat = v0 / n0;

  // Pick an x-axis in the plane spanned by the targets, along the component
  // of s1 orthogonal to s0; degenerate (parallel) targets take any axis.
  Eigen::Vector3d perp = v1 - v1.dot(zhat) * zhat;
  Eigen::Vector3d xhat;
  if (perp.norm() > 1e-14) {
    xhat = perp / perp.norm();
  } else {
    xhat = std::abs(zhat.z()) < 0.9 ? Eigen::Vector3d::UnitZ().cross(zhat)
                                    : Eigen::Vector3d::UnitX().cross(zhat);
    xhat.normalize();
  }
  Eigen::Vector3d yhat = zhat.cross(xhat);

  FrameAlignment out;
  out.rotation.row(0) = xhat;
  out.rotation.row(1) = yhat;
  out.rotation.row(2) = zhat;
  out.s0z = n0;
  Eigen::Vector3d r1 = out.rotation * v1;
  out.s1x = r1.x();
  out.s1z = r1.z();
  return out;
}

}  // namespace qpi
