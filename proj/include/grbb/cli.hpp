#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grbb/measures.hpp"
#include "grbb/statistics.hpp"

namespace grbb::cli {

enum class Command { Simulate, Chaos, TvCheck, CouplingTest, Mixing, Stationary, FixedPoint, Equilibrium };
enum class Format { Json, Csv, Both };

std::string_view command_name(Command c) noexcept;

struct RunConfig {
  Command command = Command::Simulate;
  ReassignmentLaw law = ReassignmentLaw::MaxwellBoltzmann;
  std::vector<std::uint64_t> sizes;
  std::uint64_t balls = 0;
  std::uint64_t horizon = 0;
  double delta = 0.05;
  std::uint64_t replicas = 0;
  std::uint64_t samples = 1000000;
  double r = 0.0;
  std::optional<double> lambda;
  std::string arrivals;
  std::string init = "bernoulli:0.5";
  double tol = 1e-10;
  double max_slope = -0.4;
  std::uint64_t seed = 0;
  std::string output;
  Format format = Format::Json;
  bool dry_run = false;
};

/// Bad command line or config file; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "4..30", "10..200:10", "128..4096*2" or comma-separated mixes
/// of those and plain integers. Throws UsageError.
std::vector<std::uint64_t> parse_grid(std::string_view text);

/// Parses a law description: "bernoulli:a", "poisson:m", "geometric:s",
/// "binomial:n,p", "point:k" or "pmf:m0,m1,...". Throws UsageError.
Pmf parse_pmf_spec(std::string_view text);

/// args excludes the program name. Throws UsageError, including for --help
/// (the message then holds the help text).
RunConfig parse_config(const std::vector<std::string>& args);

/// Checks the target operation's preconditions; throws UsageError.
void validate(const RunConfig& cfg);

/// Runs the command and writes reports. Returns 0 (pass), 1 (assertion
/// failure) or 2 (I/O failure).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full entry point: parse, validate, run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace grbb::cli
