#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpi/decoy.hpp"
#include "qpi/keyrate.hpp"
#include "qpi/protosim.hpp"

namespace qpi {

struct csv_parse_error : std::runtime_error {
  int line;
  csv_parse_error(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

// Count-table CSV, one row per intensity x basis pair:
//   intensity_label,mu_value,alice_basis,bob_basis,sent,n_detected,m_errors
// UTF-8, header required, '.' decimal point, no thousands separators.
CountTable read_count_table_csv(std::istream& in);
CountTable read_count_table_file(const std::string& path);
void write_count_table_csv(std::ostream& out, const CountTable& ct);

// Sweep CSV: qber,witness,rate_qpi_raw,rate_qpi,rate_bb84_raw,rate_bb84.
void write_sweep_csv(std::ostream& out, const std::vector<RatePoint>& points);

// Simulation counts CSV: x,a,y,b,count.
void write_round_counts_csv(std::ostream& out, const CountGrid& counts);

}  // namespace qpi
