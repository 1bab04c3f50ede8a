#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpi/channels.hpp"
#include "qpi/discord.hpp"

namespace qpi {

struct insufficient_data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Qubit states tau[x][a] prepared for each (basis, bit) pair. Arbitrary
// density matrices; nothing forces them to be the nominal BB84 states.
struct SourceSpec {
  std::array<std::array<cmat, 2>, 2> states;

  void validate() const;
  static SourceSpec bb84();
  // BB84 states rotated by theta in the (x,z)-plane.
  static SourceSpec rotated_bb84(double theta);
  // Equal mixture of two sources.
  static SourceSpec mixture(const SourceSpec& a, const SourceSpec& b);
  // Complement source: bar tau_{x,a} = I - tau_{x, a xor 1}.
  static SourceSpec flipped(const SourceSpec& s);
};

struct MeasSpec {
  std::array<PovmPair, 2> povms;

  void validate() const;
  static MeasSpec bb84();
  static MeasSpec rotated_bb84(double theta);
  static MeasSpec mixture(const MeasSpec& a, const MeasSpec& b);
  // Same pair with an extra admissible bias on each POVM.
  static MeasSpec with_bias(const MeasSpec& m, double bias);
};

using CountGrid = std::array<std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2>, 2>;

// Per-round protocol records, packed one byte per round as
// (x<<3)|(a<<2)|(y<<1)|b. Immutable after construction; the preprocessing
// steps return new logs.
struct RoundLog {
  std::vector<std::uint8_t> rounds;
  std::uint64_t seed = 0;
  std::string rng = "mt19937_64/splitmix64-streams";
  std::uint64_t discarded = 0;  // rounds dropped by preprocessing

  CountGrid counts() const;
};

// Simulates n rounds: x, a, y drawn uniformly, tau_{x,a} sent through the
// channel, b sampled from the POVM Born probabilities. Deterministic for a
// given seed regardless of the worker-thread count.
RoundLog run_rounds(std::uint64_t n, const SourceSpec& src,
                    const KrausChannel& ch, const MeasSpec& meas,
                    std::uint64_t seed);

// Balances Alice's bit within every (x, y) cell by randomly discarding
// rounds of the over-represented value.
RoundLog preprocess(const RoundLog& log, std::uint64_t seed);

// Applies a shared uniformly random flip to (a, b) per round. Running it
// twice with the same seed restores the input.
RoundLog bit_flip_symmetrize(const RoundLog& log, std::uint64_t seed);

struct ProtocolStatistics {
  std::array<std::array<std::array<double, 2>, 2>, 2> p{};  // p[x][a][y]
  double w = 0.0;
  double qber = 0.0;
  CountGrid counts{};
};

// p(xay) = N(x,a,y,b=0)/N(x,a,y); w from the PM witness; qber from the
// key-basis correlator. Throws insufficient_data_error on an empty cell.
ProtocolStatistics estimate_statistics(const RoundLog& log);

// Splits a log into (announced, key) parts, announcing ~fraction of rounds.
std::pair<RoundLog, RoundLog> split_estimation(const RoundLog& log,
                                               double fraction,
                                               std::uint64_t seed);

}  // namespace qpi
