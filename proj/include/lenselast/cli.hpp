#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lens::cli {

/// Effective configuration after merging defaults, config file and flags.
struct RunConfig {
  double R = 2.0;
  double k = 0.0;
  int grid = 64;
  std::string format = "json";  // "json" or "csv"
  std::string out;              // empty writes to stdout
  std::string field = "displacement";
  std::string param_space = "cartesian";  // or "circle"
  std::optional<double> a;
  std::string a_seq;  // "START:COUNT", geometric halving
};

/// Exit codes: 0 all checks pass, 1 verification failure, 2 usage or config
/// error, 3 I/O error.
int run(int argc, const char* const* argv);

int cmd_sample(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_integrals(const RunConfig& cfg);
int cmd_ellipticity(const RunConfig& cfg);

/// Parses a flat key=value config file; unknown keys are an error.
/// Returns false (with a message on stderr) on parse failure.
bool load_config_file(const std::string& path, RunConfig& cfg, std::string& error);

/// Expands "START:COUNT" into the geometric sequence START * 2^-n.
std::vector<double> parse_a_sequence(const std::string& spec);

}  // namespace lens::cli
