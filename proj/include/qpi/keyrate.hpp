#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace qpi {

struct RatePoint {
  double qber = 0.0;
  double witness = 0.0;
  double rate_qpi_raw = 0.0;   // may be negative
  double rate_qpi = 0.0;       // clamped at zero
  double rate_bb84_raw = 0.0;
  double rate_bb84 = 0.0;
};

// 1 - h(q) - h((1 - |w|)/2). Throws std::domain_error outside
// q in [0, 1/2], |w| <= 1.
double key_rate_qpi(double q, double w);

// 1 - 2 h(q).
double key_rate_bb84(double q);

// Per grid point: w = (1 - 2q)^2, both protocol rates at that q.
std::vector<RatePoint> sweep_depolarizing(const std::vector<double>& q_grid);

// Per grid point: q = (1 - cos theta)/2, w = 1.
std::vector<RatePoint> sweep_rotation(const std::vector<double>& theta_grid);

std::vector<double> uniform_grid(double lo, double hi, int points);

// Bisection root of a rate curve on [0, 1/2] to 1e-6. Empty when the curve
// does not change sign.
std::optional<double> threshold_qber(const std::function<double(double)>& rate,
                                     double lo = 0.0, double hi = 0.5);

}  // namespace qpi
