#include "qpi/discord.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qpi {

namespace {

constexpr double kPi = std::numbers::pi;

// Measurement scan over Bob's projective directions. The 4x4 state is
// reduced once to the per-(iA, jA) block traces
//   t_ij = Tr_B[block], v_ij = (Tr[block sx], Tr[block sy], Tr[block sz]),
// after which the conditional states for any direction cost a handful of
// flops:  M_b[i][j] = (t_ij + (-1)^b n.v_ij) / 2.
struct BlockScan {
  cplx t[2][2];
  cplx vx[2][2], vy[2][2], vz[2][2];

  explicit BlockScan(const cmat& rho) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        cplx b00 = rho(2 * i + 0, 2 * j + 0), b01 = rho(2 * i + 0, 2 * j + 1);
        cplx b10 = rho(2 * i + 1, 2 * j + 0), b11 = rho(2 * i + 1, 2 * j + 1);
        t[i][j] = b00 + b11;
        vx[i][j] = b01 + b10;
        vy[i][j] = cplx(0, 1) * (b01 - b10);
        vz[i][j] = b00 - b11;
      }
  }

  // p_b and the entropy of the normalized conditional state on A.
  void conditionals(double nx, double ny, double nz, double p[2],
                    double s[2]) const {
    for (int b = 0; b < 2; ++b) {
      double sign = b == 0 ? 1.0 : -1.0;
      cplx m00 = 0.5 * (t[0][0] + sign * (nx * vx[0][0] + ny * vy[0][0] +
                                          nz * vz[0][0]));
      cplx m11 = 0.5 * (t[1][1] + sign * (nx * vx[1][1] + ny * vy[1][1] +
                                          nz * vz[1][1]));
      cplx m01 = 0.5 * (t[0][1] + sign * (nx * vx[0][1] + ny * vy[0][1] +
                                          nz * vz[0][1]));
      double a = m00.real(), d = m11.real();
      double pb = a + d;
      p[b] = pb;
      if (pb <= 1e-15) {
        s[b] = 0.0;
        continue;
      }
      double r = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(m01)) / pb;
      r = std::min(r, 1.0);
      s[b] = binary_entropy((1.0 + r) / 2.0);
    }
  }
};

struct GridPoint {
  double value;
  int iphi, itheta;
};

// Deterministic grid scan + compass pattern search. Ties on the grid keep
// the lexicographically smallest (iphi, itheta).
double minimize_over_directions(
    const std::function<double(double, double)>& objective,
    const BruteForceOptions& opt) {
  const int np = opt.phi_points, nt = opt.theta_points;
  const double dphi = 2.0 * kPi / (np - 1), dtheta = kPi / (nt - 1);

  auto scan_rows = [&](int p0, int p1) {
    GridPoint best{std::numeric_limits<double>::infinity(), -1, -1};
    for (int ip = p0; ip < p1; ++ip) {
      double phi = ip * dphi;
      for (int it = 0; it < nt; ++it) {
        double v = objective(phi, it * dtheta);
        if (v < best.value) best = {v, ip, it};
      }
    }
    return best;
  };

  int nthreads = std::min(worker_threads(), np);
  GridPoint best{std::numeric_limits<double>::infinity(), -1, -1};
  if (nthreads <= 1) {
    best = scan_rows(0, np);
  } else {
    std::vector<GridPoint> partial(nthreads);
    std::vector<std::thread> pool;
    int chunk = (np + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
      int p0 = w * chunk, p1 = std::min(np, p0 + chunk);
      pool.emplace_back([&, w, p0, p1] { partial[w] = scan_rows(p0, p1); });
    }
    for (auto& th : pool) th.join();
    for (const GridPoint& g : partial)
      if (g.iphi >= 0 && g.value < best.value) best = g;
  }

  // Compass search around the grid minimum, shrink factor 1/2.
  double phi = best.iphi * dphi, theta = best.itheta * dtheta;
  double fbest = best.value;
  double sp = dphi, st = dtheta;
  for (int iter = 0; iter < opt.refine_iterations; ++iter) {
    bool moved = false;
    const double cand[4][2] = {
        {phi + sp, theta}, {phi - sp, theta}, {phi, theta + st},
        {phi, theta - st}};
    for (const auto& c : cand) {
      double th = std::clamp(c[1], 0.0, kPi);
      double v = objective(c[0], th);
      if (v < fbest) {
        fbest = v;
        phi = c[0];
        theta = th;
        moved = true;
      }
    }
    if (!moved) {
      sp *= 0.5;
      st *= 0.5;
    }
  }
  return fbest;
}

void require_canonical(const BellDiagonal& s, const char* who) {
  if (!s.is_canonical(1e-9))
    throw std::invalid_argument(std::string(who) +
                                ": state must be canonical (tz >= tx >= |ty|)");
}

}  // namespace

void PovmPair::validate() const {
  double n = bloch.norm();
  if (n > 1.0 + kTol.elementwise)
    throw std::invalid_argument("PovmPair: Bloch vector norm exceeds 1");
  if (std::abs(bias) > 1.0 - n + kTol.elementwise)
    throw std::invalid_argument("PovmPair: bias violates |c| <= 1 - |t|");
}

cmat PovmPair::element(int b) const {
  double sign = b == 0 ? 1.0 : -1.0;
  return 0.5 * ((1.0 + sign * bias) * identity(2) +
                sign * pauli_dot(bloch.x, bloch.y, bloch.z));
}

cmat PovmPair::observable() const {
  return bias * identity(2) + pauli_dot(bloch.x, bloch.y, bloch.z);
}

bool PovmPair::is_projective(double tol) const {
  return std::abs(bloch.norm() - 1.0) <= tol && std::abs(bias) <= tol;
}

PovmPair PovmPair::projective(const BlochVector& direction) {
  double n = direction.norm();
  if (n <= 0.0)
    throw std::invalid_argument("PovmPair: zero measurement direction");
  return {{direction.x / n, direction.y / n, direction.z / n}, 0.0};
}

WitnessTable correlators_eb(const cmat& rho_ab, const PovmPair& a0,
                            const PovmPair& a1, const PovmPair& b0,
                            const PovmPair& b1) {
  validate_density(rho_ab);
  if (rho_ab.rows() != 4)
    throw std::invalid_argument("correlators_eb: state must be 4x4");
  for (const PovmPair* p : {&a0, &a1, &b0, &b1}) p->validate();

  cmat rho_a = partial_trace(rho_ab, 1, {2, 2});
  cmat rho_b = partial_trace(rho_ab, 0, {2, 2});
  const PovmPair* as[2] = {&a0, &a1};
  const PovmPair* bs[2] = {&b0, &b1};

  WitnessTable w;
  for (int x = 0; x < 2; ++x) {
    cmat ax = as[x]->observable();
    double mean_a = (rho_a * ax).trace().real();
    for (int y = 0; y < 2; ++y) {
      cmat by = bs[y]->observable();
      double mean_b = (rho_b * by).trace().real();
      double joint = (rho_ab * tensor(ax, by)).trace().real();
      w.q[x][y] = joint - mean_a * mean_b;
    }
  }
  return w;
}

double witness(const WitnessTable& w) {
  return w.q[0][0] * w.q[1][1] - w.q[0][1] * w.q[1][0];
}

double witness_pm(
    const std::array<std::array<std::array<double, 2>, 2>, 2>& p) {
  for (const auto& px : p)
    for (const auto& pa : px)
      for (double v : pa)
        if (!(v >= 0.0 && v <= 1.0))
          throw std::domain_error("witness_pm: probabilities must lie in [0,1]");
  double q00 = p[0][0][0] - p[0][1][0];
  double q01 = p[0][0][1] - p[0][1][1];
  double q10 = p[1][0][0] - p[1][1][0];
  double q11 = p[1][0][1] - p[1][1][1];
  return q00 * q11 - q01 * q10;
}

double witness_max(const BellDiagonal& canonical) {
  require_canonical(canonical, "witness_max");
  return std::abs(canonical.tz() * canonical.tx());
}

double discord_closed_form(const BellDiagonal& canonical) {
  require_canonical(canonical, "discord_closed_form");
  const auto& l = canonical.lambdas();
  double g12 = l[0] + l[1], g34 = l[2] + l[3];
  double d = 1.0;
  if (g12 > 0.0) d -= g12 * binary_entropy(std::clamp(l[1] / g12, 0.0, 1.0));
  if (g34 > 0.0) d -= g34 * binary_entropy(std::clamp(l[3] / g34, 0.0, 1.0));
  return d;
}

double discord_brute_force(const cmat& rho_ab, const BruteForceOptions& opt) {
  validate_density(rho_ab);
  if (rho_ab.rows() != 4)
    throw std::invalid_argument("discord_brute_force: state must be 4x4");

  BlockScan scan(rho_ab);
  double s_b = von_neumann_entropy(partial_trace(rho_ab, 0, {2, 2}));
  double s_ab = spectrum_entropy(hermitian_eigenvalues(rho_ab));

  auto objective = [&](double phi, double theta) {
    double nx = std::sin(theta) * std::cos(phi);
    double ny = std::sin(theta) * std::sin(phi);
    double nz = std::cos(theta);
    double p[2], s[2];
    scan.conditionals(nx, ny, nz, p, s);
    return p[0] * s[0] + p[1] * s[1] + s_b - s_ab;
  };
  return minimize_over_directions(objective, opt);
}

double conditional_entropy_b0(const BellDiagonal& s,
                              const BlochVector& direction) {
  double n = direction.norm();
  if (n <= 0.0)
    throw std::invalid_argument("conditional_entropy_b0: zero direction");
  cmat rho = to_density_matrix(s);
  BlockScan scan(rho);
  double p[2], se[2];
  scan.conditionals(direction.x / n, direction.y / n, direction.z / n, p, se);
  // H(A B0) of the dephased state minus H(AB); the latter is the spectrum
  // entropy of the Bell weights.
  double s_ab = 0.0;
  for (double l : s.lambdas())
    if (l > 0.0) s_ab -= l * std::log2(l);
  double h_p = p[0] > 0.0 && p[1] > 0.0
                   ? binary_entropy(std::clamp(p[0], 0.0, 1.0))
                   : 0.0;
  return h_p + p[0] * se[0] + p[1] * se[1] - s_ab;
}

double min_conditional_entropy_b0(const BellDiagonal& s,
                                  const BruteForceOptions& opt) {
  cmat rho = to_density_matrix(s);
  BlockScan scan(rho);
  double s_ab = 0.0;
  for (double l : s.lambdas())
    if (l > 0.0) s_ab -= l * std::log2(l);

  auto objective = [&](double phi, double theta) {
    double nx = std::sin(theta) * std::cos(phi);
    double ny = std::sin(theta) * std::sin(phi);
    double nz = std::cos(theta);
    double p[2], se[2];
    scan.conditionals(nx, ny, nz, p, se);
    double h_p = p[0] > 0.0 && p[1] > 0.0
                     ? binary_entropy(std::clamp(p[0], 0.0, 1.0))
                     : 0.0;
    return h_p + p[0] * se[0] + p[1] * se[1] - s_ab;
  };
  return minimize_over_directions(objective, opt);
}

double discord_lower_bound(double w) {
  double a = std::abs(w);
  if (a > 1.0 + kTol.elementwise)
    throw std::domain_error("discord_lower_bound: |w| must not exceed 1");
  a = std::min(a, 1.0);
  return 1.0 - binary_entropy((1.0 - a) / 2.0);
}

}  // namespace qpi
