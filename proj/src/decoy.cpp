#include "qpi/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "qpi/qmath.hpp"

namespace qpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Count selectors. L/U pick the Chernoff-pessimistic bound, P the observed
// value.
enum class Dir { L, P, U };

struct BoundedCount {
  double lo, pt, hi;
  double operator()(Dir d) const {
    switch (d) {
      case Dir::L: return lo;
      case Dir::U: return hi;
      default: return pt;
    }
  }
};

// Gains multiplied by e^mu_k, per intensity, with all three fluctuation
// choices available.
struct GainSet {
  std::array<double, 3> mu{};
  std::array<BoundedCount, 3> qe{};   // Q_k e^{mu_k}
  std::array<BoundedCount, 3> eqe{};  // EQ_k e^{mu_k}
};

GainSet make_gains(const CountTable& ct, int pair, const ChernoffConfig& cfg) {
  GainSet g;
  g.mu = ct.mu;
  for (int k = 0; k < 3; ++k) {
    const IntensityCounts& c = ct.rows[k][pair];
    double scale = std::exp(ct.mu[k]) / c.sent;
    auto [nlo, nhi] = chernoff_interval(c.detected, cfg);
    auto [mlo, mhi] = chernoff_interval(c.errors, cfg);
    g.qe[k] = {nlo * scale, c.detected * scale, nhi * scale};
    g.eqe[k] = {mlo * scale, c.errors * scale, mhi * scale};
  }
  return g;
}

// The five estimator formulas. Directions are supplied by the policy; the
// formulas never choose them.

double y0_lower(const GainSet& g, Dir dn, Dir dw, Dir dm) {
  auto [mu, nu, om] = g.mu;
  double c1 = (nu * g.qe[2](dw) - om * g.qe[1](dn)) / (nu - om);
  double c2 = (mu * g.qe[2](dw) - om * g.qe[0](dm)) / (mu - om);
  return std::max({c1, c2, 0.0});
}

double y1_lower(const GainSet& g, Dir dn, Dir dw, Dir dm, double y0) {
  auto [mu, nu, om] = g.mu;
  double denom = mu * nu - mu * om - nu * nu + om * om;
  double corr = (nu * nu - om * om) / (mu * mu);
  return mu / denom *
         (g.qe[1](dn) - g.qe[2](dw) - corr * (g.qe[0](dm) - y0));
}

double y1_upper(const GainSet& g, Dir up, Dir dn, double y0) {
  auto [mu, nu, om] = g.mu;
  return std::min({(g.qe[0](up) - y0) / mu, (g.qe[1](up) - y0) / nu,
                   (g.qe[2](up) - y0) / om,
                   (g.qe[0](up) - g.qe[2](dn)) / (mu - om),
                   (g.qe[1](up) - g.qe[2](dn)) / (nu - om),
                   (g.qe[0](up) - g.qe[1](dn)) / (mu - nu)});
}

double e1_upper(const GainSet& g, Dir up, Dir dn, double y1l) {
  auto [mu, nu, om] = g.mu;
  if (y1l <= 0.0) return kInf;
  return std::min({(g.eqe[1](up) - g.eqe[2](dn)) / ((nu - om) * y1l),
                   (g.eqe[0](up) - g.eqe[2](dn)) / ((mu - om) * y1l),
                   (g.eqe[0](up) - g.eqe[1](dn)) / ((mu - nu) * y1l)});
}

double e1_lower(const GainSet& g, Dir dn, Dir dw, Dir dm, double y0,
                double y1u) {
  auto [mu, nu, om] = g.mu;
  if (y1u <= 0.0) return 0.0;
  double corr = (nu * nu - om * om) / (mu * mu);
  double num =
      g.eqe[1](dn) - g.eqe[2](dw) - corr * (g.eqe[0](dm) - 0.5 * y0);
  double den = (nu - om - (nu * nu - om * om) / mu) * y1u;
  return num / den;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

bool matched_pair(int pair) { return pair == kZZ || pair == kXX; }

}  // namespace

const char* basis_pair_name(int pair) {
  static const char* names[4] = {"ZZ", "ZX", "XZ", "XX"};
  if (pair < 0 || pair > 3)
    throw std::out_of_range("basis_pair_name: pair index out of range");
  return names[pair];
}

void CountTable::validate() const {
  if (!(mu[0] > mu[1] && mu[1] > mu[2] && mu[2] > 0.0))
    throw std::invalid_argument(
        "CountTable: intensities must satisfy mu > nu > omega > 0");
  for (int k = 0; k < 3; ++k)
    for (int p = 0; p < 4; ++p) {
      const IntensityCounts& c = rows[k][p];
      if (!(c.sent > 0))
        throw std::invalid_argument("CountTable: sent count must be positive");
      if (!(c.detected >= 0 && c.detected <= c.sent))
        throw std::invalid_argument("CountTable: need 0 <= n <= sent");
      if (!(c.errors >= 0 && c.errors <= c.detected))
        throw std::invalid_argument("CountTable: need 0 <= m <= n");
    }
}

double ChernoffConfig::beta() const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("ChernoffConfig: epsilon must lie in (0, 1)");
  return -std::log(epsilon / 2.0);
}

std::pair<double, double> chernoff_interval(double x,
                                            const ChernoffConfig& cfg) {
  if (x < 0.0) throw std::domain_error("chernoff_interval: negative count");
  double b = cfg.beta();
  if (x == 0.0) return {0.0, b};  // one-sided bound for an empty observation

  double delta;
  if (x >= 6.0 * b) {
    delta = (3.0 * b + std::sqrt(8.0 * b * x + b * b)) / (2.0 * (x - b));
  } else {
    // delta^2 x / (2 (1 - delta)) = beta has a unique root in (0, 1).
    double lo = 0.0, hi = 1.0 - 1e-15;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double f = mid * mid * x / (2.0 * (1.0 - mid)) - b;
      (f < 0.0 ? lo : hi) = mid;
      if (hi - lo < 1e-15) break;
    }
    delta = 0.5 * (lo + hi);
  }
  return {x / (1.0 + delta), x / (1.0 - delta)};
}

const char* to_string(Pessimism p) {
  switch (p) {
    case Pessimism::none: return "none";
    case Pessimism::reported: return "reported";
    case Pessimism::strict: return "strict";
  }
  return "?";
}

Pessimism pessimism_from_string(const std::string& s) {
  if (s == "none") return Pessimism::none;
  if (s == "reported") return Pessimism::reported;
  if (s == "strict") return Pessimism::strict;
  throw std::invalid_argument("unknown pessimism policy: " + s);
}

BasisPairBounds decoy_pair_bounds(const CountTable& ct, int pair,
                                  const ChernoffConfig& cfg, Pessimism pol) {
  ct.validate();
  if (pair < 0 || pair > 3)
    throw std::out_of_range("decoy_pair_bounds: pair index out of range");
  GainSet g = make_gains(ct, pair, cfg);

  BasisPairBounds out;
  auto clamp_tracked = [&out](double v) {
    if (v < 0.0) out.clamped = true;
    return clamp01(v);
  };

  // Point estimates are always computed; policies differ in whether the
  // bounds add Chernoff margins and where.
  double y0_pt = y0_lower(g, Dir::P, Dir::P, Dir::P);
  double y1l_pt = clamp_tracked(y1_lower(g, Dir::P, Dir::P, Dir::P, y0_pt));
  double y1u_pt = clamp01(y1_upper(g, Dir::P, Dir::P, y0_pt));
  out.e1_point = clamp01(e1_upper(g, Dir::P, Dir::P, y1l_pt));

  switch (pol) {
    case Pessimism::none: {
      out.y0_l = clamp01(y0_pt);
      out.y1_l = y1l_pt;
      out.y1_u = y1u_pt;
      double u = clamp01(e1_upper(g, Dir::P, Dir::P, y1l_pt));
      double l = clamp_tracked(e1_lower(g, Dir::P, Dir::P, Dir::P, y0_pt, y1u_pt));
      out.e1_l = std::min(l, u);
      out.e1_u = std::max(l, u);
      break;
    }
    case Pessimism::strict: {
      double y0_l = y0_lower(g, Dir::U, Dir::L, Dir::U);
      double y1_l = clamp_tracked(y1_lower(g, Dir::L, Dir::U, Dir::U, y0_l));
      double y1_u = clamp01(y1_upper(g, Dir::U, Dir::L, y0_l));
      out.y0_l = clamp01(y0_l);
      out.y1_l = y1_l;
      out.y1_u = y1_u;
      out.e1_u = clamp01(e1_upper(g, Dir::U, Dir::L, y1_l));
      double l = clamp_tracked(e1_lower(g, Dir::L, Dir::U, Dir::U, y0_l, y1_u));
      out.e1_l = std::min(l, out.e1_u);
      break;
    }
    case Pessimism::reported: {
      out.y0_l = clamp01(y0_pt);
      out.y1_l = y1l_pt;  // rate flavor: observed gains
      out.y1_u = y1u_pt;
      if (matched_pair(pair)) {
        // Error counts pessimistic; the denominator yield takes the
        // nu-gain at its Chernoff limit (the dominant decoy fluctuation in
        // the reference analysis).
        GainSet gw = g;
        gw.qe[1].pt = g.qe[1].lo;
        double y1l_wit =
            clamp01(y1_lower(gw, Dir::P, Dir::P, Dir::P, y0_pt));
        GainSet gu = g;
        gu.qe[1].pt = g.qe[1].hi;
        double y1u_wit = clamp01(y1_upper(gu, Dir::P, Dir::P, y0_pt));
        out.e1_u = clamp01(e1_upper(g, Dir::U, Dir::L, y1l_wit));
        double l = clamp_tracked(
            e1_lower(g, Dir::L, Dir::U, Dir::U, y0_pt, y1u_wit));
        out.e1_l = std::min(l, out.e1_u);
      } else {
        out.e1_l = out.e1_u = out.e1_point;
      }
      break;
    }
  }
  return out;
}

double minimize_witness(const std::array<std::pair<double, double>, 4>& box) {
  for (const auto& [lo, hi] : box)
    if (lo > hi)
      throw std::invalid_argument("minimize_witness: empty interval");
  double best = kInf;
  for (int v = 0; v < 16; ++v) {
    double e[4];
    for (int i = 0; i < 4; ++i)
      e[i] = (v >> i) & 1 ? box[i].second : box[i].first;
    double w = (1 - 2 * e[kZZ]) * (1 - 2 * e[kXX]) -
               (1 - 2 * e[kZX]) * (1 - 2 * e[kXZ]);
    best = std::min(best, w);
  }
  return best;
}

DecoyAnalysis analyze_decoy(const CountTable& ct, const ChernoffConfig& cfg,
                            double f_ec, Pessimism pol) {
  if (f_ec < 1.0)
    throw std::domain_error("analyze_decoy: error-correction efficiency < 1");
  DecoyAnalysis a;
  std::array<std::pair<double, double>, 4> box;
  for (int p = 0; p < 4; ++p) {
    a.pair[p] = decoy_pair_bounds(ct, p, cfg, pol);
    box[p] = {a.pair[p].e1_l, a.pair[p].e1_u};
  }
  a.w_min = minimize_witness(box);
  a.one_minus_w_over_2 = (1.0 - a.w_min) / 2.0;

  const IntensityCounts& sig = ct.rows[0][kZZ];
  a.gain_mu_zz = sig.detected / sig.sent;
  a.error_mu_zz = sig.detected > 0 ? sig.errors / sig.detected : 0.0;

  double mu = ct.mu[0];
  double leak_arg = std::clamp(a.one_minus_w_over_2, 0.0, 0.5);
  double privacy = 1.0 - binary_entropy(leak_arg);
  a.key_rate_raw = mu * std::exp(-mu) * a.pair[kZZ].y1_l * privacy -
                   f_ec * a.gain_mu_zz * binary_entropy(a.error_mu_zz);
  a.key_rate = std::max(0.0, a.key_rate_raw);
  a.key_rate_per_detected =
      a.gain_mu_zz > 0 ? a.key_rate_raw / a.gain_mu_zz : 0.0;
  return a;
}

CountTable simulate_wcp_statistics(const WcpSystem& sys, std::uint64_t seed) {
  if (sys.detector_efficiency <= 0.0 || sys.detector_efficiency > 1.0)
    throw std::domain_error("simulate_wcp_statistics: bad detector efficiency");
  if (!(sys.intensities[0] > sys.intensities[1] &&
        sys.intensities[1] > sys.intensities[2] && sys.intensities[2] > 0.0))
    throw std::domain_error(
        "simulate_wcp_statistics: intensities must be descending positive");

  double eta = sys.detector_efficiency *
               std::pow(10.0, -(sys.channel_loss_db + sys.receiver_loss_db) /
                                  10.0);
  double y0 = sys.dark_count_rate;
  double th = sys.misalignment_theta;
  // Single-photon error fraction per basis pair under an (x,z)-plane
  // rotation; background clicks are assigned randomly (e0 = 1/2).
  double edet[4] = {(1 - std::cos(th)) / 2, (1 + std::sin(th)) / 2,
                    (1 - std::sin(th)) / 2, (1 - std::cos(th)) / 2};

  CountTable ct;
  ct.mu = sys.intensities;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 3; ++k) {
    double kappa = sys.intensities[k];
    double psig = 1.0 - std::exp(-eta * kappa);
    double q = std::min(1.0, y0 + psig);
    for (int p = 0; p < 4; ++p) {
      double eq = std::min(q, 0.5 * y0 + edet[p] * psig);
      double sent = sys.sent_per_pair[k];
      IntensityCounts& c = ct.rows[k][p];
      c.sent = sent;
      std::binomial_distribution<long long> det(
          static_cast<long long>(sent), q);
      c.detected = static_cast<double>(det(rng));
      double efrac = q > 0 ? std::clamp(eq / q, 0.0, 1.0) : 0.0;
      std::binomial_distribution<long long> err(
          static_cast<long long>(c.detected), efrac);
      c.errors = static_cast<double>(err(rng));
    }
  }
  ct.validate();
  return ct;
}

}  // namespace qpi
