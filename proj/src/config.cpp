#include "pilotwave/config.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <initializer_list>

namespace pilotwave {

const char* to_string(ConfigErrorKind kind) {
  switch (kind) {
  case ConfigErrorKind::non_finite: return "non-finite value";
  case ConfigErrorKind::non_positive_parameter: return "parameter out of range";
  case ConfigErrorKind::inconsistent_kick: return "inconsistent u / delta_prime";
  case ConfigErrorKind::schedule_ordering: return "schedule ordering";
  case ConfigErrorKind::unequal_windows: return "unequal interaction windows";
  case ConfigErrorKind::windows_too_close: return "interaction windows too close";
  case ConfigErrorKind::step_too_coarse: return "integrator step";
  }
  return "unknown";
}

ConfigError::ConfigError(ConfigErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

namespace {

void require(bool ok, ConfigErrorKind kind, const std::string& what) {
  if (!ok) throw ConfigError(kind, what);
}

void require_finite(double v, const char* name) {
  require(std::isfinite(v), ConfigErrorKind::non_finite, std::string(name) + " must be finite");
}

} // namespace

ExperimentConfig validate(ExperimentConfig c) {
  auto& p = c.physical;
  auto& s = c.schedule;

  require_finite(p.hbar, "hbar");
  require_finite(p.mass, "mass");
  require_finite(p.sigma0, "sigma0");
  require_finite(p.u, "u");
  require_finite(p.delta, "delta");
  require_finite(p.delta_prime, "delta_prime");
  require_finite(s.t_coil, "t_coil");
  require_finite(s.t1, "t1");
  require_finite(s.t2, "t2");
  require_finite(s.t3, "t3");
  require_finite(s.t4, "t4");
  require_finite(s.t_end, "t_end");
  require_finite(s.dt, "dt");
  require_finite(s.min_gap_ratio, "min_gap_ratio");
  require_finite(c.alpha, "alpha");
  require_finite(c.beta, "beta");

  require(p.hbar > 0, ConfigErrorKind::non_positive_parameter, "hbar must be > 0");
  require(p.mass > 0, ConfigErrorKind::non_positive_parameter, "mass must be > 0");
  require(p.sigma0 > 0, ConfigErrorKind::non_positive_parameter, "sigma0 must be > 0");
  require(p.u >= 0, ConfigErrorKind::non_positive_parameter, "u must be >= 0");
  require(p.delta_prime >= 0, ConfigErrorKind::non_positive_parameter, "delta_prime must be >= 0");
  require(s.min_gap_ratio >= 0, ConfigErrorKind::non_positive_parameter,
          "min_gap_ratio must be >= 0");

  // u is canonical; delta_prime follows it.
  if (p.u == 0 && p.delta_prime != 0) {
    p.u = p.hbar * p.delta_prime / p.mass;
  } else if (p.u != 0 && p.delta_prime != 0) {
    const double lhs = p.u * p.mass;
    const double rhs = p.hbar * p.delta_prime;
    require(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs)),
            ConfigErrorKind::inconsistent_kick, "u * mass must equal hbar * delta_prime");
  }
  p.delta_prime = p.u * p.mass / p.hbar;

  require(s.t_coil >= 0, ConfigErrorKind::schedule_ordering, "t_coil must be >= 0");
  require(s.t_coil < s.t1, ConfigErrorKind::schedule_ordering, "t_coil must precede t1");
  require(s.t1 < s.t2, ConfigErrorKind::schedule_ordering, "t1 must precede t2");
  require(s.t2 < s.t3, ConfigErrorKind::schedule_ordering, "t2 must precede t3");
  require(s.t3 < s.t4, ConfigErrorKind::schedule_ordering, "t3 must precede t4");
  require(s.t4 < s.t_end, ConfigErrorKind::schedule_ordering, "t4 must precede t_end");

  const double window = s.t2 - s.t1;
  require(std::abs((s.t4 - s.t3) - window) <= 1e-9 * window, ConfigErrorKind::unequal_windows,
          "t4 - t3 must equal t2 - t1");
  require(s.t3 - s.t2 >= s.min_gap_ratio * window * (1 - 1e-12),
          ConfigErrorKind::windows_too_close, "t3 - t2 must be at least min_gap_ratio * (t2 - t1)");

  require(s.dt > 0, ConfigErrorKind::step_too_coarse, "dt must be > 0");
  require(s.dt <= window / 10 * (1 + 1e-12), ConfigErrorKind::step_too_coarse,
          "dt must not exceed (t2 - t1) / 10");
  return c;
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

double packet_width(const PhysicalParams& p, double t) {
  const double a = p.hbar * t / (2 * p.mass * p.sigma0 * p.sigma0);
  return p.sigma0 * std::sqrt(1 + a * a);
}

double readout_separation(const ExperimentConfig& c) {
  const double travel = c.schedule.t_end - c.schedule.kick_b();
  return 2 * c.physical.u * travel / packet_width(c.physical, c.schedule.t_end);
}

std::string config_digest(const ExperimentConfig& c) {
  // FNV-1a over the IEEE bit patterns, in declaration order.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  const auto& p = c.physical;
  const auto& s = c.schedule;
  for (double v : {p.hbar, p.mass, p.sigma0, p.u, p.delta, p.delta_prime, s.t_coil, s.t1, s.t2,
                   s.t3, s.t4, s.t_end, s.dt, s.min_gap_ratio, c.alpha, c.beta}) {
    mix(std::bit_cast<std::uint64_t>(v));
  }
  mix(c.seed);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace pilotwave
