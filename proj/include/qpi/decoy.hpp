#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

namespace qpi {

// Basis-pair index: alice*2 + bob with Z=0, X=1.
enum BasisPair : int { kZZ = 0, kZX = 1, kXZ = 2, kXX = 3 };

const char* basis_pair_name(int pair);

struct IntensityCounts {
  double sent = 0;
  double detected = 0;  // n
  double errors = 0;    // m
};

// Raw counts for a three-intensity run, intensities descending
// (mu > nu > omega > 0), one column per basis pair.
struct CountTable {
  std::array<std::string, 3> labels{{"mu", "nu", "omega"}};
  std::array<double, 3> mu{};
  std::array<std::array<IntensityCounts, 4>, 3> rows{};

  void validate() const;
};

struct ChernoffConfig {
  double epsilon = 1e-9;
  double beta() const;  // -ln(epsilon / 2)
};

// Multiplicative Chernoff interval (X^L, X^U) for an observed count.
// X >= 6*beta uses the closed-form delta; smaller counts solve
// exp(-delta^2 X / (2(1 - delta))) = epsilon/2 by bisection, which is the
// variant that reproduces the reference tables. X = 0 returns (0, beta).
std::pair<double, double> chernoff_interval(double x, const ChernoffConfig& cfg);

// How statistical fluctuations enter the decoy estimates.
//   none     - plug in observed rates everywhere (no confidence margins).
//   strict   - every count takes its Chernoff-pessimistic bound per formula
//              term; witness minimized over the full interval box.
//   reported - the calibrated reconstruction of the reference analysis:
//              yields from observed gains (nu-gain Chernoff-adjusted inside
//              the error-bound denominators), matched-basis error counts
//              Chernoff-pessimistic, mismatched bases at point estimates.
enum class Pessimism { none, reported, strict };

const char* to_string(Pessimism p);
Pessimism pessimism_from_string(const std::string& s);

struct BasisPairBounds {
  double y0_l = 0;
  double y1_l = 0;       // single-photon yield lower bound (rate flavor)
  double y1_u = 0;
  double e1_l = 0;
  double e1_u = 0;
  double e1_point = 0;   // maximum-likelihood estimate, min over candidates
  bool clamped = false;  // a negative intermediate was clamped to zero
};

BasisPairBounds decoy_pair_bounds(const CountTable& ct, int pair,
                                  const ChernoffConfig& cfg, Pessimism pol);

// Exact minimum of det[[1-2e0, 1-2e1], [1-2e2, 1-2e3]] over the box
// e_i in [lo_i, hi_i] (order ZZ, ZX, XZ, XX). The determinant is
// multilinear, so the minimum sits on one of the 16 vertices. Throws
// std::invalid_argument on an empty interval.
double minimize_witness(const std::array<std::pair<double, double>, 4>& box);

struct DecoyAnalysis {
  std::array<BasisPairBounds, 4> pair;
  double w_min = 0;
  double one_minus_w_over_2 = 0;
  double gain_mu_zz = 0;
  double error_mu_zz = 0;       // E_mu in the key basis
  double key_rate_raw = 0;      // per sent signal pulse, may be negative
  double key_rate = 0;          // clamped at zero
  double key_rate_per_detected = 0;
};

// Full pipeline: per-pair bounds, witness minimization, and the key rate
//   R = mu e^-mu Y1^L (1 - h((1-W)/2)) - f Q_mu h(E_mu)
// per sent signal pulse, with the key basis fixed to ZZ.
DecoyAnalysis analyze_decoy(const CountTable& ct, const ChernoffConfig& cfg,
                            double f_ec, Pessimism pol);

// Weak-coherent-pulse statistics generator: yields from channel loss and
// dark counts, errors from the rotation-channel statistics mixed with
// random background clicks.
struct WcpSystem {
  double channel_loss_db = 0;
  double receiver_loss_db = 0;
  double detector_efficiency = 1.0;
  double dark_count_rate = 0;  // background click probability per pulse
  double misalignment_theta = 0;
  std::array<double, 3> intensities{{0.5, 0.1, 0.01}};
  std::array<double, 3> sent_per_pair{{1e9, 1e9, 1e9}};
};

CountTable simulate_wcp_statistics(const WcpSystem& sys, std::uint64_t seed);

}  // namespace qpi
