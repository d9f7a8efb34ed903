#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pilotwave/config.hpp"
#include "pilotwave/spin.hpp"
#include "pilotwave/wavefunctions.hpp"

namespace pilotwave {

struct PairPosition {
  double za;
  double zb;
  double t;
};

struct PairTrajectory {
  std::vector<PairPosition> samples;
  std::string config_hash;
};

struct Velocity {
  double v_a;
  double v_b;
};

/// Densities below this are treated as the configuration leaving the support.
inline constexpr double density_floor = 1e-300;

class DensityUnderflow : public std::runtime_error {
public:
  DensityUnderflow(double za, double zb, double t);
  PairPosition where() const { return where_; }

private:
  PairPosition where_;
};

/// v = j / rho for the two-particle state, evaluated as a density-weighted
/// mean wavenumber so that tails far from every packet never underflow.
class PairGuidance {
public:
  explicit PairGuidance(const ExperimentConfig& config) : psi_(config) {}

  Velocity operator()(double za, double zb, double t) const;
  const PairWavefunction& wavefunction() const { return psi_; }
  const ExperimentConfig& config() const { return psi_.config(); }

private:
  PairWavefunction psi_;
};

Velocity velocity(double za, double zb, double t, const ExperimentConfig& config);

/// Uniform steps covering [0, t_end]; h = t_end / steps <= dt.
struct StepGrid {
  std::size_t steps;
  double h;

  double time(std::size_t i) const { return i == steps ? end : static_cast<double>(i) * h; }
  double end;
};

StepGrid step_grid(const StageSchedule& s);

/// Fixed-step RK4 from t = 0 to t_end; keeps every `stride`-th sample plus
/// the last one.
PairTrajectory integrate_pair(PairPosition start, const ExperimentConfig& config,
                              std::size_t stride = 1);

/// Same integration, keeping only the final position.
PairPosition integrate_pair_final(PairPosition start, const PairGuidance& field);

/// Calls observe(step_index, position) after every step (and once at step 0).
template <class Observer>
PairPosition integrate_pair_observed(PairPosition start, const PairGuidance& field,
                                     Observer&& observe);

struct SingleTrajectory {
  std::vector<PairPosition> samples; // zb unused
  Sign sign;
};

/// One particle through Alice's analyzer with spinor (c_plus, c_minus).
/// Requires c_plus^2 + c_minus^2 = 1 within 1e-9 (std::invalid_argument).
SingleTrajectory integrate_single(double z0, double c_plus, double c_minus,
                                  const ExperimentConfig& config, std::size_t stride = 1);

Sign single_outcome(double z0, const SingleWavefunction& psi);

// --- implementation -------------------------------------------------------

template <class Observer>
PairPosition integrate_pair_observed(PairPosition start, const PairGuidance& field,
                                     Observer&& observe) {
  const auto grid = step_grid(field.config().schedule);
  double za = start.za;
  double zb = start.zb;
  observe(std::size_t{0}, PairPosition{za, zb, 0.0});
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const double t = grid.time(i);
    const double h = grid.time(i + 1) - t;
    const auto k1 = field(za, zb, t);
    const auto k2 = field(za + 0.5 * h * k1.v_a, zb + 0.5 * h * k1.v_b, t + 0.5 * h);
    const auto k3 = field(za + 0.5 * h * k2.v_a, zb + 0.5 * h * k2.v_b, t + 0.5 * h);
    const auto k4 = field(za + h * k3.v_a, zb + h * k3.v_b, t + h);
    za += h / 6 * (k1.v_a + 2 * k2.v_a + 2 * k3.v_a + k4.v_a);
    zb += h / 6 * (k1.v_b + 2 * k2.v_b + 2 * k3.v_b + k4.v_b);
    observe(i + 1, PairPosition{za, zb, grid.time(i + 1)});
  }
  return {za, zb, grid.end};
}

} // namespace pilotwave
