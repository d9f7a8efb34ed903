#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pilotwave/batch.hpp"
#include "pilotwave/commands.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/io.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_runtime = 2;

std::vector<double> parse_angles(const std::vector<std::string>& texts) {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(pilotwave::parse_angle(t));
  return out;
}

} // namespace

int main(int argc, char** argv) {
  using namespace pilotwave;

  CLI::App app{"Pilot-wave simulation of a two-particle spin correlation experiment"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned workers = default_workers();
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--workers", workers, "Worker threads (default: PILOTWAVE_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--set", overrides, "Config override key=value (repeatable)");

  SgOptions sg;
  auto* sg_cmd = app.add_subcommand("sg", "Single particle through one Stern-Gerlach analyzer");
  sg_cmd->add_option("--c-plus", sg.c_plus, "Spin-up amplitude");
  sg_cmd->add_option("--c-minus", sg.c_minus, "Spin-down amplitude");
  sg_cmd->add_option("-n,--runs", sg.n, "Number of particles");
  sg_cmd->add_option("--stride", sg.stride, "Keep every stride-th step");

  TrajectoryOptions tr;
  std::string tr_gamma = "0";
  auto* tr_cmd = app.add_subcommand("trajectories", "Pair trajectories at one relative angle");
  tr_cmd->add_option("--gamma", tr_gamma, "Relative coil angle (number or e.g. 3pi/8)");
  tr_cmd->add_option("-n,--pairs", tr.n, "Number of pairs");
  tr_cmd->add_option("--stride", tr.stride, "Keep every stride-th step");

  ChshOptions chsh;
  std::string theta_min = "0", theta_max = "4pi";
  auto* chsh_cmd = app.add_subcommand("chsh", "CHSH combination swept over theta");
  chsh_cmd->add_option("--theta-min", theta_min, "First theta");
  chsh_cmd->add_option("--theta-max", theta_max, "End of the theta range (exclusive)");
  chsh_cmd->add_option("--n-theta", chsh.n_theta, "Number of theta values");
  chsh_cmd->add_option("-n,--pairs", chsh.n_pairs, "Pairs per setting");

  DiskOptions disk;
  std::vector<std::string> disk_gammas;
  auto* disk_cmd = app.add_subcommand("disk", "Outcome map on the hidden-variable disk");
  disk_cmd->add_option("--gamma", disk_gammas, "Relative angles (default 0 pi/2 pi/4 3pi/8)");
  disk_cmd->add_option("-n,--pairs", disk.n, "Points per angle");
  disk_cmd->add_option("--curve-points", disk.n_curve, "Theta grid size for the separatrix");

  MarginalOptions marg;
  std::vector<std::string> marg_gammas;
  auto* marg_cmd = app.add_subcommand("marginals", "Single-side outcome frequencies per angle");
  marg_cmd->add_option("--gamma", marg_gammas, "Relative angles")->required();
  marg_cmd->add_option("-n,--pairs", marg.n, "Pairs per angle");

  auto* validate_cmd = app.add_subcommand("validate-config", "Check a config and write it normalized");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }

  RunContext ctx;
  ctx.workers = workers;
  ctx.out_dir = out_dir;
  ctx.log = &std::cerr;
  try {
    ExperimentConfig config = default_config();
    if (!config_path.empty()) config = io::load_config(config_path, config);
    for (const auto& o : overrides) io::apply_override(config, o);
    if (seed) config.seed = *seed;
    ctx.config = validate(config);

    std::vector<std::string> files;
    if (*sg_cmd) {
      files = cmd_sg(ctx, sg);
    } else if (*tr_cmd) {
      tr.gamma = parse_angle(tr_gamma);
      files = cmd_trajectories(ctx, tr);
    } else if (*chsh_cmd) {
      chsh.theta_min = parse_angle(theta_min);
      chsh.theta_max = parse_angle(theta_max);
      files = cmd_chsh(ctx, chsh);
    } else if (*disk_cmd) {
      disk.gammas = parse_angles(disk_gammas);
      files = cmd_disk(ctx, disk);
    } else if (*marg_cmd) {
      marg.gammas = parse_angles(marg_gammas);
      files = cmd_marginals(ctx, marg);
    } else if (*validate_cmd) {
      files = cmd_validate_config(ctx);
    }
    for (const auto& f : files) std::cout << (ctx.out_dir / f).string() << '\n';
    return exit_ok;
  } catch (const ConfigError& e) {
    std::cerr << "config error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_validation;
  } catch (const io::ConfigFileError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_validation;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return exit_validation;
  } catch (const DensityUnderflow& e) {
    const auto p = e.where();
    std::cerr << "runtime error: density underflow at zA=" << p.za << " zB=" << p.zb << " t=" << p.t
              << '\n';
    return exit_runtime;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return exit_runtime;
  }
}
