#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pilotwave {

/// Physical constants and Gaussian packet parameters, in natural units.
///
/// The Stern-Gerlach kick is described by two redundant quantities: the
/// phase gradient `delta_prime` imprinted by the field gradient and the
/// resulting branch speed `u = hbar * delta_prime / mass`. `validate()`
/// fills whichever of the two is zero from the other.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double sigma0 = 1.0;      // initial packet width
  double u = 5.0;           // branch separation speed
  double delta = 0.0;       // uniform-field phase
  double delta_prime = 5.0; // phase gradient, inverse length
};

/// Timeline of one run. Alice's analyzer acts on [t1, t2], Bob's on [t3, t4];
/// both coils act instantaneously at `t_coil`.
struct StageSchedule {
  double t_coil = 0.5;
  double t1 = 1.0;
  double t2 = 1.1;
  double t3 = 5.0;
  double t4 = 5.1;
  double t_end = 10.0;
  double dt = 1e-3;
  // Minimum gap t3 - t2 measured in units of the window length T.
  double min_gap_ratio = 5.0;

  double window() const { return t2 - t1; }
  /// Instant at which Alice's (Bob's) packet receives its momentum kick.
  double kick_a() const { return 0.5 * (t1 + t2); }
  double kick_b() const { return 0.5 * (t3 + t4); }
};

struct ExperimentConfig {
  PhysicalParams physical;
  StageSchedule schedule;
  double alpha = 0.0; // Alice coil angle
  double beta = 0.0;  // Bob coil angle
  std::uint64_t seed = 0;

  double gamma() const { return beta - alpha; }
};

enum class ConfigErrorKind {
  non_finite,
  non_positive_parameter,
  inconsistent_kick,
  schedule_ordering,
  unequal_windows,
  windows_too_close,
  step_too_coarse,
};

const char* to_string(ConfigErrorKind kind);

class ConfigError : public std::runtime_error {
public:
  ConfigError(ConfigErrorKind kind, const std::string& what);
  ConfigErrorKind kind() const { return kind_; }

private:
  ConfigErrorKind kind_;
};

/// Checks every invariant and fills the derived kick field. Throws ConfigError.
ExperimentConfig validate(ExperimentConfig config);

ExperimentConfig default_config();

/// Width sigma(t) = |s_t| of a freely spreading packet.
double packet_width(const PhysicalParams& p, double t);

/// Center-to-center distance of a particle's two branches at t_end, in units
/// of the packet width. Uses Bob's window since his branches separate last.
double readout_separation(const ExperimentConfig& config);

/// Hex digest of every field, stable across runs and platforms.
std::string config_digest(const ExperimentConfig& config);

} // namespace pilotwave
