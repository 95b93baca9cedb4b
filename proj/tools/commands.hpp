#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "intertwine/io.hpp"
#include "intertwine/rational.hpp"

namespace intertwine::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<long> N;
  std::optional<long> M;
  std::vector<Rational> a;
  std::vector<double> tgrid;
  std::string tgrid_text;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::string format;  // empty: the command's default
  std::string out;

  std::string family;    // spectra
  std::string pair;      // verify
  std::string polytope;  // verify
  bool max_a2 = false;   // feasible
  bool reverse = false;  // feasible
  bool hat = false;      // converge
  double horizon = 20;   // couple
  std::optional<Rational> theta;
};

/// "1,0,2/3" -> exact coefficients.
std::vector<Rational> parse_coefficients(const std::string& text);
/// "a:b:step" (inclusive) or a comma list.
std::vector<double> parse_tgrid(const std::string& text);

io::Json config_echo(const RunConfig& config);

int cmd_spectra(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_feasible(const RunConfig& config, std::ostream& out);
int cmd_couple(const RunConfig& config, std::ostream& out, std::size_t workers);
int cmd_converge(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace intertwine::cli
