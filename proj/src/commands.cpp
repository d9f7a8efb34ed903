#include "pilotwave/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "pilotwave/analysis.hpp"
#include "pilotwave/batch.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/io.hpp"
#include "pilotwave/sampling.hpp"

namespace pilotwave {

namespace {

using io::format_double;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t sg_setting = 0x5347; // single-particle runs

std::string sign_cell(Sign s) { return s == Sign::plus ? "1" : "-1"; }
std::string count_cell(std::size_t n) { return std::to_string(n); }

void warn(const RunContext& ctx, const std::string& message) {
  if (ctx.log) *ctx.log << "warning: " << message << '\n';
}

void check_readout(const RunContext& ctx, const ExperimentConfig& config) {
  if (!readout_guard(config))
    warn(ctx, fmt::format("branches are only {:.3g} packet widths apart at t_end; sign readout "
                          "may be unreliable",
                          readout_separation(config)));
}

// Wilson score interval at 95%.
std::pair<double, double> wilson(std::size_t k, std::size_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double denom = 1 + z * z / nn;
  const double center = (p + z * z / (2 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

class Session {
public:
  Session(const RunContext& ctx, std::string command, nlohmann::ordered_json options)
      : ctx_(ctx), start_(Clock::now()) {
    manifest_.command = std::move(command);
    manifest_.options = std::move(options);
    manifest_.config = ctx.config;
    manifest_.workers = ctx.workers;
    std::filesystem::create_directories(ctx.out_dir);
  }

  io::CsvWriter table(const std::string& name, std::vector<std::string> header) {
    manifest_.outputs.push_back(name);
    return io::CsvWriter(ctx_.out_dir / name, std::move(header));
  }

  std::vector<std::string> finish() {
    manifest_.wall_time_s = std::chrono::duration<double>(Clock::now() - start_).count();
    const auto name = manifest_.command + "_manifest.json";
    io::write_manifest(ctx_.out_dir / name, manifest_);
    auto files = manifest_.outputs;
    files.push_back(name);
    return files;
  }

  void add_output(const std::string& name) { manifest_.outputs.push_back(name); }

private:
  const RunContext& ctx_;
  Clock::time_point start_;
  io::RunManifest manifest_;
};

ExperimentConfig with_gamma(ExperimentConfig config, double gamma) {
  config.alpha = 0;
  config.beta = gamma;
  return config;
}

} // namespace

std::vector<double> default_disk_gammas() {
  constexpr double pi = std::numbers::pi;
  return {0.0, pi / 2, pi / 4, 3 * pi / 8};
}

double parse_angle(std::string_view text) {
  const std::string original(text);
  auto fail = [&] { return UsageError(fmt::format("cannot parse angle '{}'", original)); };
  auto number = [&](std::string_view s) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw fail();
    return v;
  };
  const auto at = text.find("pi");
  if (at == std::string_view::npos) return number(text);

  std::string_view head = text.substr(0, at);
  std::string_view tail = text.substr(at + 2);
  if (!head.empty() && head.back() == '*') head.remove_suffix(1);
  double factor = 1;
  if (head == "-") factor = -1;
  else if (head == "+") factor = 1;
  else if (!head.empty()) factor = number(head);
  double denom = 1;
  if (!tail.empty()) {
    if (tail.front() != '/') throw fail();
    denom = number(tail.substr(1));
    if (denom == 0) throw fail();
  }
  return factor * std::numbers::pi / denom;
}

std::vector<double> chsh_grid(const ChshOptions& o) {
  std::vector<double> grid(o.n_theta);
  const double span = o.theta_max - o.theta_min;
  for (std::size_t i = 0; i < o.n_theta; ++i)
    grid[i] = o.theta_min + span * static_cast<double>(i) / static_cast<double>(o.n_theta);
  return grid;
}

std::vector<std::string> cmd_sg(const RunContext& ctx, SgOptions o) {
  if (o.n == 0) throw UsageError("sg: n must be at least 1");
  if (!std::isfinite(o.c_plus) || !std::isfinite(o.c_minus))
    throw UsageError("sg: coefficients must be finite");
  const double norm2 = o.c_plus * o.c_plus + o.c_minus * o.c_minus;
  if (norm2 == 0) throw UsageError("sg: coefficients must not both vanish");
  if (std::abs(norm2 - 1) > 1e-6) {
    warn(ctx, fmt::format("sg: c_plus^2 + c_minus^2 = {:.17g}; renormalizing", norm2));
  }
  const double scale = 1 / std::sqrt(norm2);
  o.c_plus *= scale;
  o.c_minus *= scale;

  Session session(ctx, "sg",
                  {{"c_plus", o.c_plus}, {"c_minus", o.c_minus}, {"n", o.n}, {"stride", o.stride}});
  check_readout(ctx, ctx.config);

  const auto& config = ctx.config;
  std::vector<SingleTrajectory> runs(o.n);
  parallel_for(o.n, ctx.workers, [&](std::size_t i) {
    SeededRng rng(config.seed, stream_for(sg_setting, i));
    const double z0 = sample_pair(rng, config.physical.sigma0).za;
    runs[i] = integrate_single(z0, o.c_plus, o.c_minus, config, o.stride);
  });

  auto traj = session.table("sg_trajectories.csv", {"run", "t", "z"});
  std::size_t up = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    up += runs[i].sign == Sign::plus;
    for (const auto& s : runs[i].samples) traj.row({count_cell(i), format_double(s.t), format_double(s.za)});
  }
  traj.close();

  const auto [lo, hi] = wilson(up, o.n);
  auto summary = session.table("sg_summary.csv", {"c_plus", "c_minus", "n", "n_up", "fraction_up",
                                                  "expected", "ci_low", "ci_high"});
  summary.row({format_double(o.c_plus), format_double(o.c_minus), count_cell(o.n), count_cell(up),
               format_double(static_cast<double>(up) / static_cast<double>(o.n)),
               format_double(o.c_plus * o.c_plus), format_double(lo), format_double(hi)});
  summary.close();
  return session.finish();
}

std::vector<std::string> cmd_trajectories(const RunContext& ctx, const TrajectoryOptions& o) {
  if (o.n == 0) throw UsageError("trajectories: n must be at least 1");
  if (!std::isfinite(o.gamma)) throw UsageError("trajectories: gamma must be finite");
  Session session(ctx, "trajectories", {{"gamma", o.gamma}, {"n", o.n}, {"stride", o.stride}});
  const auto config = with_gamma(ctx.config, o.gamma);
  check_readout(ctx, config);

  struct Run {
    DiskPoint disk;
    InitialPair start;
    PairTrajectory path;
  };
  std::vector<Run> runs(o.n);
  parallel_for(o.n, ctx.workers, [&](std::size_t i) {
    SeededRng rng(config.seed, stream_for(streams::shared, i));
    const auto disk = sample_disk(rng);
    const auto start = disk_to_positions(disk, config.physical.sigma0);
    runs[i] = {disk, start, integrate_pair({start.za, start.zb, 0.0}, config, o.stride)};
  });

  auto traj = session.table("trajectories.csv", {"pair_index", "t", "zA", "zB"});
  auto init = session.table("initial_conditions.csv", {"pair_index", "r", "theta", "zA0", "zB0"});
  auto outcomes = session.table("outcomes.csv", {"pair_index", "sA", "sB"});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    for (const auto& s : r.path.samples)
      traj.row({count_cell(i), format_double(s.t), format_double(s.za), format_double(s.zb)});
    init.row({count_cell(i), format_double(r.disk.r), format_double(r.disk.theta),
              format_double(r.start.za), format_double(r.start.zb)});
    const auto out = readout(r.path, i, r.disk);
    outcomes.row({count_cell(i), sign_cell(out.s_a), sign_cell(out.s_b)});
  }
  traj.close();
  init.close();
  outcomes.close();
  return session.finish();
}

std::vector<std::string> cmd_chsh(const RunContext& ctx, const ChshOptions& o) {
  if (o.n_theta == 0 || o.n_pairs == 0) throw UsageError("chsh: n_theta and n_pairs must be at least 1");
  if (!std::isfinite(o.theta_min) || !std::isfinite(o.theta_max))
    throw UsageError("chsh: theta range must be finite");
  Session session(ctx, "chsh",
                  {{"theta_min", o.theta_min},
                   {"theta_max", o.theta_max},
                   {"n_theta", o.n_theta},
                   {"n_pairs", o.n_pairs}});
  check_readout(ctx, ctx.config);

  const auto grid = chsh_grid(o);
  std::vector<ChshEstimate> rows;
  rows.reserve(grid.size());
  for (double theta : grid) rows.push_back(chsh_M(theta, o.n_pairs, ctx.config.seed, ctx.config, ctx.workers));

  auto table = session.table("chsh.csv", {"theta", "M_hat", "stderr", "M_theory"});
  for (const auto& r : rows)
    table.row({format_double(r.theta), format_double(r.m_hat), format_double(r.std_error),
               format_double(chsh_theory(r.theta))});
  table.close();
  return session.finish();
}

std::vector<std::string> cmd_disk(const RunContext& ctx, const DiskOptions& o) {
  if (o.n == 0) throw UsageError("disk: n must be at least 1");
  const auto gammas = o.gammas.empty() ? default_disk_gammas() : o.gammas;
  for (double g : gammas)
    if (!std::isfinite(g)) throw UsageError("disk: gamma must be finite");
  Session session(ctx, "disk", {{"gammas", gammas}, {"n", o.n}, {"n_curve", o.n_curve}});
  check_readout(ctx, ctx.config);

  const double s0 = ctx.config.physical.sigma0;
  const auto palette = disk_palette();
  auto color_of = [&](Sign a, Sign b) {
    for (const auto& p : palette)
      if (p.s_a == a && p.s_b == b) return p.color;
    return "?";
  };

  auto points = session.table("disk_points.csv", {"gamma", "pair_index", "r", "theta", "zA0", "zB0",
                                                  "sA", "sB", "label"});
  auto curves = session.table("separatrix.csv", {"gamma", "arc", "theta", "U"});
  const auto theta_grid = uniform_theta_grid(o.n_curve);
  const auto nan = format_double(std::numeric_limits<double>::quiet_NaN());
  for (double gamma : gammas) {
    const auto runs = disk_partition(gamma, o.n, ctx.config.seed, ctx.config, ctx.workers);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = runs[i];
      points.row({format_double(gamma), count_cell(i), format_double(r.disk.r),
                  format_double(r.disk.theta), format_double(r.start.za), format_double(r.start.zb),
                  sign_cell(r.outcome.s_a), sign_cell(r.outcome.s_b),
                  color_of(r.outcome.s_a, r.outcome.s_b)});
    }
    const auto curve = separatrix(gamma, theta_grid, s0);
    for (const auto& s : curve.samples)
      curves.row({format_double(gamma), to_string(s.arc), format_double(s.theta), format_double(s.u)});
    if (curve.degenerate) curves.row({format_double(gamma), "degenerate", nan, nan});
  }
  points.close();
  curves.close();

  auto legend = session.table("palette.csv", {"sA", "sB", "label"});
  for (const auto& p : palette) legend.row({sign_cell(p.s_a), sign_cell(p.s_b), p.color});
  legend.close();
  return session.finish();
}

std::vector<std::string> cmd_marginals(const RunContext& ctx, const MarginalOptions& o) {
  if (o.gammas.empty()) throw UsageError("marginals: at least one gamma is required");
  if (o.n == 0) throw UsageError("marginals: n must be at least 1");
  for (double g : o.gammas)
    if (!std::isfinite(g)) throw UsageError("marginals: gamma must be finite");
  Session session(ctx, "marginals", {{"gammas", o.gammas}, {"n", o.n}});
  check_readout(ctx, ctx.config);

  auto table = session.table("marginals.csv",
                             {"gamma", "P_A_plus", "P_B_plus", "n", "stderr_A", "stderr_B",
                              "ci_A_low", "ci_A_high", "ci_B_low", "ci_B_high"});
  for (double gamma : o.gammas) {
    const auto m = marginals(gamma, o.n, ctx.config.seed, ctx.config, ctx.workers);
    table.row({format_double(gamma), format_double(m.p_a_plus), format_double(m.p_b_plus),
               count_cell(m.n), format_double(m.stderr_a), format_double(m.stderr_b),
               format_double(m.p_a_plus - 3 * m.stderr_a), format_double(m.p_a_plus + 3 * m.stderr_a),
               format_double(m.p_b_plus - 3 * m.stderr_b), format_double(m.p_b_plus + 3 * m.stderr_b)});
  }
  table.close();
  return session.finish();
}

std::vector<std::string> cmd_validate_config(const RunContext& ctx) {
  Session session(ctx, "validate-config", nlohmann::ordered_json::object());
  check_readout(ctx, ctx.config);
  const auto path = ctx.out_dir / "config.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << io::config_to_json(ctx.config).dump(2) << '\n';
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
  session.add_output("config.json");
  return session.finish();
}

} // namespace pilotwave
