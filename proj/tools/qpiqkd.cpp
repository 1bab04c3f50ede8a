#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpi/decoy.hpp"
#include "qpi/discord.hpp"
#include "qpi/keyrate.hpp"
#include "qpi/protosim.hpp"
#include "qpi/table_io.hpp"

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInsufficient = 3;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

json pair_json(const qpi::BasisPairBounds& b) {
  return {{"y0_l", b.y0_l},   {"y1_l", b.y1_l},         {"y1_u", b.y1_u},
          {"e1_l", b.e1_l},   {"e1_u", b.e1_u},         {"e1_point", b.e1_point},
          {"clamped", b.clamped}};
}

int cmd_analyze(const std::string& input, double epsilon, double f_ec,
                const std::string& pessimism, const std::string& output) {
  qpi::CountTable ct = qpi::read_count_table_file(input);
  qpi::ChernoffConfig cfg{epsilon};
  qpi::Pessimism pol = qpi::pessimism_from_string(pessimism);
  qpi::DecoyAnalysis a = qpi::analyze_decoy(ct, cfg, f_ec, pol);

  json per_pair;
  for (int p = 0; p < 4; ++p)
    per_pair[qpi::basis_pair_name(p)] = pair_json(a.pair[p]);

  json report = {
      {"schema_version", kSchemaVersion},
      {"command", "analyze"},
      {"per_basis_pair", per_pair},
      {"w_min", a.w_min},
      {"one_minus_w_over_2", a.one_minus_w_over_2},
      {"gain_mu_zz", a.gain_mu_zz},
      {"error_mu_zz", a.error_mu_zz},
      {"key_rate_raw", a.key_rate_raw},
      {"key_rate_clamped", a.key_rate},
      {"key_rate_per_detected", a.key_rate_per_detected},
      {"config",
       {{"epsilon", epsilon},
        {"f", f_ec},
        {"pessimism", pessimism},
        {"input", input},
        {"rng", nullptr}}},
  };
  write_text(output, report.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const std::string& channel, int grid, const std::string& output) {
  if (grid < 2) {
    std::cerr << "error: --grid must be at least 2\n";
    return kExitUsage;
  }
  std::vector<qpi::RatePoint> points;
  if (channel == "depolarizing") {
    points = qpi::sweep_depolarizing(qpi::uniform_grid(0.0, 0.5, grid));
  } else if (channel == "rotation") {
    points = qpi::sweep_rotation(
        qpi::uniform_grid(0.0, std::numbers::pi, grid));
  } else {
    std::cerr << "error: unknown channel '" << channel
              << "' (expected depolarizing or rotation)\n";
    return kExitUsage;
  }
  std::ostringstream out;
  qpi::write_sweep_csv(out, points);
  write_text(output, out.str());
  return 0;
}

qpi::SourceSpec source_from_json(const json& j) {
  qpi::SourceSpec src;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      std::string key = std::to_string(x) + std::to_string(a);
      auto v = j.at(key);
      src.states[x][a] =
          0.5 * (qpi::identity(2) +
                 qpi::pauli_dot(v.at(0).get<double>(), v.at(1).get<double>(),
                                v.at(2).get<double>()));
    }
  src.validate();
  return src;
}

qpi::MeasSpec meas_from_json(const json& j) {
  qpi::MeasSpec meas;
  for (int y = 0; y < 2; ++y) {
    auto v = j.at(std::to_string(y));
    auto t = v.at("bloch");
    meas.povms[y].bloch = {t.at(0).get<double>(), t.at(1).get<double>(),
                           t.at(2).get<double>()};
    meas.povms[y].bias = v.value("bias", 0.0);
  }
  meas.validate();
  return meas;
}

int cmd_simulate(std::uint64_t rounds, std::uint64_t seed,
                 const std::string& channel, double qber, double theta,
                 const std::string& source, const std::string& source_file,
                 double uc_angle, double est_fraction,
                 const std::string& output) {
  qpi::KrausChannel ch;
  if (channel == "identity") {
    ch = qpi::identity_channel();
  } else if (channel == "depolarizing") {
    ch = qpi::depolarizing(qber);
  } else if (channel == "rotation") {
    ch = qpi::rotation_channel(theta);
  } else {
    std::cerr << "error: unknown channel '" << channel << "'\n";
    return kExitUsage;
  }

  qpi::SourceSpec src;
  qpi::MeasSpec meas;
  if (!source_file.empty()) {
    std::ifstream in(source_file);
    if (!in) {
      std::cerr << "error: cannot open '" << source_file << "'\n";
      return kExitUsage;
    }
    json j = json::parse(in);
    src = source_from_json(j.at("states"));
    meas = meas_from_json(j.at("povms"));
  } else if (source == "bb84") {
    src = qpi::SourceSpec::bb84();
    meas = qpi::MeasSpec::bb84();
  } else if (source == "uncharacterized") {
    src = qpi::SourceSpec::mixture(qpi::SourceSpec::bb84(),
                                   qpi::SourceSpec::rotated_bb84(uc_angle));
    meas = qpi::MeasSpec::mixture(qpi::MeasSpec::bb84(),
                                  qpi::MeasSpec::rotated_bb84(uc_angle));
  } else {
    std::cerr << "error: unknown source '" << source << "'\n";
    return kExitUsage;
  }

  qpi::RoundLog log = qpi::run_rounds(rounds, src, ch, meas, seed);
  log = qpi::preprocess(log, seed ^ 0x5052455050ull);
  log = qpi::bit_flip_symmetrize(log, seed ^ 0x464c495050ull);
  auto [announced, kept] = qpi::split_estimation(log, est_fraction,
                                                 seed ^ 0x53504c4954ull);
  const qpi::RoundLog& sample = est_fraction > 0.0 ? announced : log;
  qpi::ProtocolStatistics st = qpi::estimate_statistics(sample);

  double rate_raw = qpi::key_rate_qpi(std::clamp(st.qber, 0.0, 0.5), st.w);
  json p_table;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        p_table[std::to_string(x) + std::to_string(a) + std::to_string(y)] =
            st.p[x][a][y];

  json report = {
      {"schema_version", kSchemaVersion},
      {"command", "simulate"},
      {"rounds_requested", rounds},
      {"rounds_retained", log.rounds.size()},
      {"rounds_discarded", log.discarded},
      {"rounds_announced", announced.rounds.size()},
      {"rounds_key", kept.rounds.size()},
      {"p_table", p_table},
      {"w", st.w},
      {"qber", st.qber},
      {"key_rate_qpi_raw", rate_raw},
      {"key_rate_qpi", std::max(0.0, rate_raw)},
      {"config",
       {{"seed", seed},
        {"rng", log.rng},
        {"channel", channel},
        {"qber", qber},
        {"theta", theta},
        {"source", source_file.empty() ? source : source_file},
        {"estimation_fraction", est_fraction}}},
  };

  if (output.empty() || output == "-") {
    std::cout << report.dump(2) << "\n";
  } else {
    write_text(output + ".json", report.dump(2) + "\n");
    std::ostringstream counts;
    qpi::write_round_counts_csv(counts, sample.counts());
    write_text(output + ".counts.csv", counts.str());
  }
  return 0;
}

int cmd_discord(const std::string& lambdas, const std::string& correlations,
                const std::string& output) {
  std::optional<qpi::BellDiagonal> state;
  auto parse_list = [](const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    return v;
  };
  if (!lambdas.empty()) {
    auto v = parse_list(lambdas);
    if (v.size() != 4) throw std::invalid_argument("--lambdas needs 4 values");
    state = qpi::BellDiagonal::from_lambdas(v[0], v[1], v[2], v[3]);
  } else if (!correlations.empty()) {
    auto v = parse_list(correlations);
    if (v.size() != 3)
      throw std::invalid_argument("--correlations needs 3 values");
    state = qpi::BellDiagonal::from_correlations(v[0], v[1], v[2]);
  } else {
    std::cerr << "error: provide --lambdas or --correlations\n";
    return kExitUsage;
  }

  auto [canon, record] = qpi::canonicalize(*state);
  double closed = qpi::discord_closed_form(canon);
  double brute = qpi::discord_brute_force(qpi::to_density_matrix(*state));
  double wmax = qpi::witness_max(canon);
  double bound = qpi::discord_lower_bound(wmax);

  json frame = json::array();
  for (const auto& op : record.ops) frame.push_back(qpi::to_string(op));

  json report = {
      {"schema_version", kSchemaVersion},
      {"command", "discord"},
      {"discord_closed", closed},
      {"discord_brute", brute},
      {"w_max", wmax},
      {"lower_bound", bound},
      {"agreement",
       {{"closed_vs_brute", std::abs(closed - brute)},
        {"bound_gap", closed - bound}}},
      {"canonical",
       {{"lambdas", canon.lambdas()},
        {"t", {canon.tx(), canon.ty(), canon.tz()}},
        {"frame_ops", frame}}},
  };
  write_text(output, report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discord-witness security analysis for BB84-like QKD"};
  app.require_subcommand(1);

  std::string input, output, format = "json";
  double epsilon = 1e-9, f_ec = 1.0;
  std::string pessimism = "reported";
  std::string channel = "depolarizing";
  int grid = 501;
  std::uint64_t rounds = 1000000, seed = 1;
  double qber = 0.0, theta = 0.0, uc_angle = 0.3490658503988659,
         est_fraction = 0.1;
  std::string source = "bb84", source_file;
  std::string lambdas, correlations;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Decoy-state bounds, witness and key rate from a counts CSV");
  analyze->add_option("--input", input, "counts CSV")->required();
  analyze->add_option("--epsilon", epsilon, "Chernoff failure probability");
  analyze->add_option("--f-ec", f_ec, "error-correction efficiency");
  analyze->add_option("--pessimism", pessimism, "none|reported|strict");
  analyze->add_option("--output", output, "output path (default stdout)");
  analyze->add_option("--format", format, "json");

  CLI::App* sweep =
      app.add_subcommand("sweep", "Rate-vs-QBER curves as plot-ready CSV");
  sweep->add_option("--channel", channel, "depolarizing|rotation");
  sweep->add_option("--grid", grid, "number of grid points");
  sweep->add_option("--output", output, "output path (default stdout)");
  sweep->add_option("--format", format, "csv");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo run of the protocol");
  simulate->add_option("--rounds", rounds, "number of rounds");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--channel", channel, "identity|depolarizing|rotation");
  simulate->add_option("--qber", qber, "depolarizing QBER");
  simulate->add_option("--theta", theta, "rotation angle (radians)");
  simulate->add_option("--source", source, "bb84|uncharacterized");
  simulate->add_option("--source-file", source_file,
                       "JSON source/measurement spec");
  simulate->add_option("--uc-angle", uc_angle,
                       "mixing angle of the uncharacterized preset");
  simulate->add_option("--estimation-fraction", est_fraction,
                       "announced fraction for parameter estimation");
  simulate->add_option("--output", output, "output prefix");

  CLI::App* discord =
      app.add_subcommand("discord", "Discord, witness and bound for a state");
  discord->add_option("--lambdas", lambdas, "l1,l2,l3,l4");
  discord->add_option("--correlations", correlations, "tx,ty,tz");
  discord->add_option("--output", output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (analyze->parsed())
      return cmd_analyze(input, epsilon, f_ec, pessimism, output);
    if (sweep->parsed()) return cmd_sweep(channel, grid, output);
    if (simulate->parsed())
      return cmd_simulate(rounds, seed, channel, qber, theta, source,
                          source_file, uc_angle, est_fraction, output);
    if (discord->parsed()) return cmd_discord(lambdas, correlations, output);
  } catch (const qpi::insufficient_data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficient;
  } catch (const qpi::csv_parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
