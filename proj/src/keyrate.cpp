#include "qpi/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpi/qmath.hpp"

namespace qpi {

double key_rate_qpi(double q, double w) {
  if (!(q >= 0.0 && q <= 0.5))
    throw std::domain_error("key_rate_qpi: q must lie in [0, 1/2]");
  if (std::abs(w) > 1.0 + kTol.elementwise)
    throw std::domain_error("key_rate_qpi: |w| must not exceed 1");
  double a = std::min(std::abs(w), 1.0);
  return 1.0 - binary_entropy(q) - binary_entropy((1.0 - a) / 2.0);
}

double key_rate_bb84(double q) {
  if (!(q >= 0.0 && q <= 0.5))
    throw std::domain_error("key_rate_bb84: q must lie in [0, 1/2]");
  return 1.0 - 2.0 * binary_entropy(q);
}

namespace {

RatePoint make_point(double q, double w) {
  RatePoint p;
  p.qber = q;
  p.witness = w;
  p.rate_qpi_raw = key_rate_qpi(q, w);
  p.rate_qpi = std::max(0.0, p.rate_qpi_raw);
  p.rate_bb84_raw = key_rate_bb84(q);
  p.rate_bb84 = std::max(0.0, p.rate_bb84_raw);
  return p;
}

}  // namespace

std::vector<RatePoint> sweep_depolarizing(const std::vector<double>& q_grid) {
  std::vector<RatePoint> out;
  out.reserve(q_grid.size());
  for (double q : q_grid) {
    double s = 1.0 - 2.0 * q;
    out.push_back(make_point(q, s * s));
  }
  return out;
}

std::vector<RatePoint> sweep_rotation(const std::vector<double>& theta_grid) {
  std::vector<RatePoint> out;
  out.reserve(theta_grid.size());
  for (double t : theta_grid)
    out.push_back(make_point((1.0 - std::cos(t)) / 2.0, 1.0));
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (points < 2) throw std::domain_error("uniform_grid: need >= 2 points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * i / (points - 1);
  return g;
}

std::optional<double> threshold_qber(const std::function<double(double)>& rate,
                                     double lo, double hi) {
  double flo = rate(lo), fhi = rate(hi);
  if (flo < 0.0 || fhi > 0.0) {
    // Scan for a bracketing interval in case the curve dips mid-range.
    bool found = false;
    const int n = 512;
    for (int i = 0; i < n && !found; ++i) {
      double x = lo + (hi - lo) * (i + 1) / n;
      double fx = rate(x);
      if (flo > 0.0 && fx <= 0.0) {
        hi = x;
        fhi = fx;
        found = true;
      } else {
        lo = x;
        flo = fx;
      }
    }
    if (!found) return std::nullopt;
  }
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    if (rate(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qpi
