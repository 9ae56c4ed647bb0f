#ifndef BLACKWELL_CLI_HPP
#define BLACKWELL_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "blackwell/belief.hpp"

namespace blackwell::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitViolation = 3;
inline constexpr int kExitInvalid = 4;

struct RunConfig {
  std::size_t states = 2;
  /// A belief ("0.2,0.3,0.5", n-1 coordinates allowed), "uniform" or "sweep:k".
  std::string prior = "uniform";
  std::string rule = "bayes";
  std::size_t grid = 201;
  std::size_t budget = 5000;
  std::uint64_t seed = 0;
  double tol = kGeometryTolerance;
  std::string mode = "single";
  std::filesystem::path output = "audit_report.json";
};

/// The priors a config names; sweep:k draws k interior priors from the seed.
std::vector<Belief> resolve_priors(const RunConfig& config);

/// Writes the report to config.output and, on a violation, the first certificate next to it
/// as <stem>.certificate.json. Returns kExitPass, kExitViolation or kExitConfig.
int cmd_audit(const RunConfig& config, std::ostream& out, std::ostream& err);

struct ReproduceParams {
  double a = 0.3, b = 0.7, u = 0.2, v = 0.8;
  /// Points per unit for the coarse figure; lattice steps for the stubborn tables.
  std::size_t grid = 1000;
};

/// Writes <dir>/<example_id>.csv. Unknown ids raise UnknownExample (exit kExitConfig).
int cmd_reproduce(const std::string& example_id, const std::filesystem::path& dir, const ReproduceParams& params,
                  std::ostream& out, std::ostream& err);

/// Accepts a report (every embedded certificate is checked) or a bare certificate.
int cmd_verify(const std::filesystem::path& file, double tol, std::ostream& out, std::ostream& err);

/// Writes the convexity violations of W for a problem (JSON, default quadratic loss) as CSV.
int cmd_convexity(const RunConfig& config, const std::string& problem, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the commands above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes through a temporary file and a rename so readers never see a partial file.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace blackwell::cli

#endif  // BLACKWELL_CLI_HPP
