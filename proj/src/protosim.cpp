#include "qpi/protosim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace qpi {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent stream seed per (seed, stage, index).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stage,
                          std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ stage) ^ splitmix64(index));
}

double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t kBlock = 1 << 16;
constexpr std::uint64_t kStageRounds = 0x524e4453ull;   // round sampling
constexpr std::uint64_t kStagePreproc = 0x42414c43ull;  // balance discards
constexpr std::uint64_t kStageFlip = 0x464c4950ull;     // bit flipping

cmat projector(double nx, double ny, double nz) {
  return 0.5 * (identity(2) + pauli_dot(nx, ny, nz));
}

}  // namespace

void SourceSpec::validate() const {
  for (const auto& row : states)
    for (const cmat& tau : row) {
      if (tau.rows() != 2 || tau.cols() != 2)
        throw std::invalid_argument("SourceSpec: states must be 2x2");
      validate_density(tau);
    }
}

SourceSpec SourceSpec::bb84() {
  SourceSpec s;
  s.states[0][0] = projector(0, 0, 1);
  s.states[0][1] = projector(0, 0, -1);
  s.states[1][0] = projector(1, 0, 0);
  s.states[1][1] = projector(-1, 0, 0);
  return s;
}

SourceSpec SourceSpec::rotated_bb84(double theta) {
  // Conjugate the nominal states by the rotation unitary so the convention
  // always matches rotation_channel.
  SourceSpec s = bb84();
  cmat u = rotation_channel(theta).ops[0];
  for (auto& row : s.states)
    for (cmat& tau : row) tau = u * tau * u.adjoint();
  return s;
}

SourceSpec SourceSpec::mixture(const SourceSpec& a, const SourceSpec& b) {
  SourceSpec s;
  for (int x = 0; x < 2; ++x)
    for (int v = 0; v < 2; ++v)
      s.states[x][v] = 0.5 * (a.states[x][v] + b.states[x][v]);
  return s;
}

SourceSpec SourceSpec::flipped(const SourceSpec& src) {
  SourceSpec s;
  for (int x = 0; x < 2; ++x)
    for (int v = 0; v < 2; ++v)
      s.states[x][v] = identity(2) - src.states[x][v ^ 1];
  return s;
}

void MeasSpec::validate() const {
  for (const PovmPair& p : povms) p.validate();
}

MeasSpec MeasSpec::bb84() {
  MeasSpec m;
  m.povms[0] = PovmPair::projective({0, 0, 1});
  m.povms[1] = PovmPair::projective({1, 0, 0});
  return m;
}

MeasSpec MeasSpec::rotated_bb84(double theta) {
  MeasSpec m = bb84();
  cmat u = rotation_channel(theta).ops[0];
  for (PovmPair& p : m.povms) {
    cmat obs = u * p.observable() * u.adjoint();
    p.bloch = {0.5 * (obs * pauli_x()).trace().real(),
               0.5 * (obs * pauli_y()).trace().real(),
               0.5 * (obs * pauli_z()).trace().real()};
  }
  return m;
}

MeasSpec MeasSpec::mixture(const MeasSpec& a, const MeasSpec& b) {
  MeasSpec m;
  for (int y = 0; y < 2; ++y) {
    m.povms[y].bloch = {0.5 * (a.povms[y].bloch.x + b.povms[y].bloch.x),
                        0.5 * (a.povms[y].bloch.y + b.povms[y].bloch.y),
                        0.5 * (a.povms[y].bloch.z + b.povms[y].bloch.z)};
    m.povms[y].bias = 0.5 * (a.povms[y].bias + b.povms[y].bias);
  }
  return m;
}

MeasSpec MeasSpec::with_bias(const MeasSpec& src, double bias) {
  MeasSpec m = src;
  for (PovmPair& p : m.povms) p.bias = bias;
  m.validate();
  return m;
}

CountGrid RoundLog::counts() const {
  CountGrid n{};
  for (std::uint8_t r : rounds)
    ++n[(r >> 3) & 1][(r >> 2) & 1][(r >> 1) & 1][r & 1];
  return n;
}

RoundLog run_rounds(std::uint64_t n, const SourceSpec& src,
                    const KrausChannel& ch, const MeasSpec& meas,
                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("run_rounds: need at least 1 round");
  src.validate();
  meas.validate();
  ch.validate();

  // Born probability of b = 0 for every (x, a, y).
  double p0[2][2][2];
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      cmat out = apply_channel(ch, src.states[x][a]);
      for (int y = 0; y < 2; ++y) {
        double p = (out * meas.povms[y].element(0)).trace().real();
        p0[x][a][y] = std::clamp(p, 0.0, 1.0);
      }
    }

  RoundLog log;
  log.seed = seed;
  log.rounds.resize(n);

  std::uint64_t nblocks = (n + kBlock - 1) / kBlock;
  auto fill_block = [&](std::uint64_t blk) {
    std::mt19937_64 rng(stream_seed(seed, kStageRounds, blk));
    std::uint64_t lo = blk * kBlock, hi = std::min(n, lo + kBlock);
    for (std::uint64_t i = lo; i < hi; ++i) {
      std::uint64_t bits = rng();
      int x = bits & 1, a = (bits >> 1) & 1, y = (bits >> 2) & 1;
      int b = uniform01(rng) < p0[x][a][y] ? 0 : 1;
      log.rounds[i] = static_cast<std::uint8_t>((x << 3) | (a << 2) |
                                                (y << 1) | b);
    }
  };

  int nthreads = std::min<std::uint64_t>(worker_threads(), nblocks);
  if (nthreads <= 1) {
    for (std::uint64_t blk = 0; blk < nblocks; ++blk) fill_block(blk);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t blk = w; blk < nblocks; blk += nthreads)
          fill_block(blk);
      });
    for (auto& th : pool) th.join();
  }
  return log;
}

RoundLog preprocess(const RoundLog& log, std::uint64_t seed) {
  // Indices per (x, y, a) cell.
  std::vector<std::uint32_t> idx[2][2][2];
  for (std::uint32_t i = 0; i < log.rounds.size(); ++i) {
    std::uint8_t r = log.rounds[i];
    idx[(r >> 3) & 1][(r >> 1) & 1][(r >> 2) & 1].push_back(i);
  }

  std::vector<char> drop(log.rounds.size(), 0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      auto& a0 = idx[x][y][0];
      auto& a1 = idx[x][y][1];
      auto& major = a0.size() >= a1.size() ? a0 : a1;
      std::uint64_t excess =
          a0.size() >= a1.size() ? a0.size() - a1.size() : a1.size() - a0.size();
      if (excess == 0) continue;
      std::mt19937_64 rng(stream_seed(seed, kStagePreproc, (x << 1) | y));
      // Partial Fisher-Yates: the first `excess` slots are the discards.
      for (std::uint64_t i = 0; i < excess; ++i) {
        std::uint64_t j =
            i + static_cast<std::uint64_t>(uniform01(rng) * (major.size() - i));
        j = std::min(j, major.size() - 1);
        std::swap(major[i], major[j]);
        drop[major[i]] = 1;
      }
    }

  RoundLog out;
  out.seed = log.seed;
  out.rng = log.rng;
  out.rounds.reserve(log.rounds.size());
  for (std::uint32_t i = 0; i < log.rounds.size(); ++i)
    if (!drop[i]) out.rounds.push_back(log.rounds[i]);
  out.discarded = log.discarded + (log.rounds.size() - out.rounds.size());
  return out;
}

RoundLog bit_flip_symmetrize(const RoundLog& log, std::uint64_t seed) {
  RoundLog out = log;
  std::uint64_t n = out.rounds.size();
  std::uint64_t nwords = (n + 63) / 64;
  for (std::uint64_t wi = 0; wi < nwords; ++wi) {
    std::mt19937_64 rng(stream_seed(seed, kStageFlip, wi));
    std::uint64_t word = rng();
    std::uint64_t lo = wi * 64, hi = std::min(n, lo + 64);
    for (std::uint64_t i = lo; i < hi; ++i)
      if ((word >> (i - lo)) & 1) out.rounds[i] ^= 0b0101;  // flip a and b
  }
  return out;
}

ProtocolStatistics estimate_statistics(const RoundLog& log) {
  ProtocolStatistics st;
  st.counts = log.counts();
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y) {
        std::uint64_t total = st.counts[x][a][y][0] + st.counts[x][a][y][1];
        if (total == 0)
          throw insufficient_data_error(
              "estimate_statistics: empty cell (x=" + std::to_string(x) +
              ", a=" + std::to_string(a) + ", y=" + std::to_string(y) + ")");
        st.p[x][a][y] = static_cast<double>(st.counts[x][a][y][0]) / total;
      }
  st.w = witness_pm(st.p);
  st.qber = (1.0 - (st.p[0][0][0] - st.p[0][1][0])) / 2.0;
  return st;
}

std::pair<RoundLog, RoundLog> split_estimation(const RoundLog& log,
                                               double fraction,
                                               std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::domain_error("split_estimation: fraction must lie in [0, 1]");
  RoundLog announced, kept;
  announced.seed = kept.seed = log.seed;
  announced.rng = kept.rng = log.rng;
  std::uint64_t n = log.rounds.size();
  for (std::uint64_t wi = 0; wi * kBlock < n; ++wi) {
    std::mt19937_64 rng(stream_seed(seed, 0x53504c54ull, wi));
    std::uint64_t lo = wi * kBlock, hi = std::min(n, lo + kBlock);
    for (std::uint64_t i = lo; i < hi; ++i)
      (uniform01(rng) < fraction ? announced : kept)
          .rounds.push_back(log.rounds[i]);
  }
  return {announced, kept};
}

}  // namespace qpi
