#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

namespace gcelab {

struct RunConfig {
  std::string command;  // solve, canonical, heins, maximal, verify, lp
  std::optional<std::string> config_path;
  std::string out_dir = ".";
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::optional<std::pair<int, int>> grid;  // n_r, n_theta override
  std::optional<std::string> critical;      // heins: "a+bi,..."
  std::string suite = "all";                // verify
};

enum ExitCode { kExitOk = 0, kExitInvalid = 2, kExitNoConvergence = 3, kExitInconsistent = 4 };

/// Dispatches one command, writes outputs under out_dir (atomically) and
/// returns the exit code. Messages go to `log`.
int run(const RunConfig& config, std::ostream& log);

}  // namespace gcelab
