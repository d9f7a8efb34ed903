#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pilotwave/config.hpp"

namespace pilotwave {

/// Shared state of one CLI invocation. `config` must already be validated.
struct RunContext {
  ExperimentConfig config;
  unsigned workers = 1;
  std::filesystem::path out_dir = ".";
  std::ostream* log = nullptr; // warnings; may be null
};

struct SgOptions {
  double c_plus = 0.70710678118654752;
  double c_minus = 0.70710678118654752;
  std::size_t n = 1000;
  std::size_t stride = 100;
};

struct TrajectoryOptions {
  double gamma = 0;
  std::size_t n = 10;
  std::size_t stride = 100;
};

struct ChshOptions {
  double theta_min = 0;
  double theta_max = 12.566370614359172; // 4 pi
  std::size_t n_theta = 200;
  std::size_t n_pairs = 2000;
};

struct DiskOptions {
  std::vector<double> gammas; // empty selects the four reference angles
  std::size_t n = 5000;
  std::size_t n_curve = 720;
};

struct MarginalOptions {
  std::vector<double> gammas;
  std::size_t n = 2000;
};

/// Bad command options; reported as a validation error.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Each command writes its tables and a `<command>_manifest.json` into
/// ctx.out_dir and returns the file names written.
std::vector<std::string> cmd_sg(const RunContext& ctx, SgOptions options);
std::vector<std::string> cmd_trajectories(const RunContext& ctx, const TrajectoryOptions& options);
std::vector<std::string> cmd_chsh(const RunContext& ctx, const ChshOptions& options);
std::vector<std::string> cmd_disk(const RunContext& ctx, const DiskOptions& options);
std::vector<std::string> cmd_marginals(const RunContext& ctx, const MarginalOptions& options);
/// Writes the normalized config as `config.json` next to a manifest.
std::vector<std::string> cmd_validate_config(const RunContext& ctx);

/// Angles used by `disk` when none are given: 0, pi/2, pi/4, 3 pi/8.
std::vector<double> default_disk_gammas();

/// Parses an angle written as a number or a multiple of pi: "0.5", "pi",
/// "-pi/2", "3pi/8", "3*pi/8", "1.5pi". Throws UsageError.
double parse_angle(std::string_view text);

/// theta_min + (theta_max - theta_min) i / n_theta for i in [0, n_theta).
std::vector<double> chsh_grid(const ChshOptions& options);

} // namespace pilotwave
