#pragma once

#include <optional>
#include <string>
#include <vector>

#include "numsys/report.hpp"

namespace numsys::cli {

struct RunConfig {
  std::string command;
  // System.
  std::string base = "geometric";
  std::optional<std::string> beta;
  std::optional<std::string> digits;
  // Output.
  std::string format = "csv";
  std::string out;
  // Precision knobs.
  double tol = 1e-8;
  std::optional<int> depth;
  std::size_t points = 512;
  double max_count = 1e7;
  // count
  std::optional<std::int64_t> upto;
  std::vector<std::string> at;
  std::optional<std::string> lambda;
  // fourier / coeffs
  long kmax = 16;
  std::size_t m = 24;
  // zeta
  std::optional<std::string> s;
  std::string method = "auto";
  double X = 1e6;
  std::optional<int> c_shift;
  bool poles = false;
  int jmax = 2;
  std::optional<int> special;
  // moments
  std::string report = "moment";
  double k = 1;
  double x = 0;
  std::vector<int> depths{8, 10, 12};
  int n_max = 25;
  // figure1
  std::optional<std::string> panel;
};

/// Parses argv and runs one subcommand. Returns 0 on success, 2 on a
/// configuration error and 1 when a computation fails.
int run(int argc, const char* const* argv);

/// The report a validated configuration produces (no emission).
Report build_report(const RunConfig& cfg);

}  // namespace numsys::cli
