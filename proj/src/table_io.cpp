#include "qpi/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace qpi {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  for (std::string& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(0, 1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
  }
  return fields;
}

double parse_number(const std::string& s, int line, const char* what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::exception&) {
    throw csv_parse_error(line, std::string("bad ") + what + " value '" + s +
                                    "'");
  }
}

int parse_basis(const std::string& s, int line) {
  if (s == "Z" || s == "z") return 0;
  if (s == "X" || s == "x") return 1;
  throw csv_parse_error(line, "basis must be Z or X, got '" + s + "'");
}

}  // namespace

CountTable read_count_table_csv(std::istream& in) {
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) throw csv_parse_error(1, "no data rows");
  ++lineno;
  auto header = split_csv_line(line);
  const std::vector<std::string> expected = {
      "intensity_label", "mu_value", "alice_basis", "bob_basis",
      "sent",            "n_detected", "m_errors"};
  if (header != expected)
    throw csv_parse_error(1,
                          "header must be intensity_label,mu_value,"
                          "alice_basis,bob_basis,sent,n_detected,m_errors");

  struct Cell {
    bool seen = false;
    IntensityCounts counts;
  };
  struct Group {
    double mu = 0;
    std::array<Cell, 4> cells;
    int first_line = 0;
  };
  std::map<std::string, Group> groups;
  std::vector<std::string> order;

  int rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 7)
      throw csv_parse_error(lineno, "expected 7 fields, got " +
                                        std::to_string(f.size()));
    const std::string& label = f[0];
    double mu = parse_number(f[1], lineno, "mu_value");
    int pair = parse_basis(f[2], lineno) * 2 + parse_basis(f[3], lineno);
    IntensityCounts c;
    c.sent = parse_number(f[4], lineno, "sent");
    c.detected = parse_number(f[5], lineno, "n_detected");
    c.errors = parse_number(f[6], lineno, "m_errors");

    auto [it, inserted] = groups.try_emplace(label);
    if (inserted) {
      it->second.mu = mu;
      it->second.first_line = lineno;
      order.push_back(label);
    } else if (it->second.mu != mu) {
      throw csv_parse_error(lineno, "intensity '" + label +
                                        "' has inconsistent mu_value");
    }
    if (it->second.cells[pair].seen)
      throw csv_parse_error(lineno, "duplicate row for intensity '" + label +
                                        "', pair " + basis_pair_name(pair));
    it->second.cells[pair] = {true, c};
    ++rows;
  }
  if (rows == 0) throw csv_parse_error(lineno, "no data rows");
  if (groups.size() != 3)
    throw csv_parse_error(lineno, "need exactly 3 intensities, got " +
                                      std::to_string(groups.size()));

  // Sort descending by mean photon number.
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return groups[a].mu > groups[b].mu;
  });

  CountTable ct;
  for (int k = 0; k < 3; ++k) {
    const Group& grp = groups[order[k]];
    ct.labels[k] = order[k];
    ct.mu[k] = grp.mu;
    for (int p = 0; p < 4; ++p) {
      if (!grp.cells[p].seen)
        throw csv_parse_error(grp.first_line,
                              "intensity '" + order[k] + "' missing pair " +
                                  basis_pair_name(p));
      ct.rows[k][p] = grp.cells[p].counts;
    }
  }
  try {
    ct.validate();
  } catch (const std::invalid_argument& e) {
    throw csv_parse_error(lineno, e.what());
  }
  return ct;
}

CountTable read_count_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_count_table_csv(in);
}

void write_count_table_csv(std::ostream& out, const CountTable& ct) {
  out << "intensity_label,mu_value,alice_basis,bob_basis,sent,n_detected,"
         "m_errors\n";
  for (int k = 0; k < 3; ++k)
    for (int p = 0; p < 4; ++p) {
      const IntensityCounts& c = ct.rows[k][p];
      out << ct.labels[k] << ',' << ct.mu[k] << ','
          << "ZX"[p / 2] << ',' << "ZX"[p % 2] << ','
          << static_cast<long long>(c.sent) << ','
          << static_cast<long long>(c.detected) << ','
          << static_cast<long long>(c.errors) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<RatePoint>& points) {
  out << "qber,witness,rate_qpi_raw,rate_qpi,rate_bb84_raw,rate_bb84\n";
  out.precision(12);
  for (const RatePoint& p : points)
    out << p.qber << ',' << p.witness << ',' << p.rate_qpi_raw << ','
        << p.rate_qpi << ',' << p.rate_bb84_raw << ',' << p.rate_bb84 << '\n';
}

void write_round_counts_csv(std::ostream& out, const CountGrid& counts) {
  out << "x,a,y,b,count\n";
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b)
          out << x << ',' << a << ',' << y << ',' << b << ','
              << counts[x][a][y][b] << '\n';
}

}  // namespace qpi
