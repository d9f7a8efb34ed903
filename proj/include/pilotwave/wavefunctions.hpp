#pragma once

#include <complex>
#include <stdexcept>

#include "pilotwave/config.hpp"
#include "pilotwave/spin.hpp"

namespace pilotwave {

/// Freely spreading Gaussian packet in one dimension, optionally carrying a
/// Stern-Gerlach momentum kick received at `split_time`.
///
/// The complex width s_t = sigma0 (1 + i hbar t / (2 m sigma0^2)) always runs
/// on the global clock, so a kicked packet has the same modulus as the free
/// one at the kick instant. After the kick the center moves at
/// `center_velocity` and the phase gains sign * (delta + (z - c/2) delta').
struct GaussianPacket {
  double sigma0 = 1.0;
  double center_velocity = 0.0;
  double split_time = 0.0;
  int phase_sign = 0;

  static GaussianPacket free(const PhysicalParams& p);
  static GaussianPacket split(const PhysicalParams& p, Sign branch, double kick_time);
};

/// ln|psi|^2 and the local wavenumber Im(psi* d psi) / |psi|^2 at one point.
struct PacketSample {
  double log_density;
  double wavenumber;
};

/// Time-dependent constants shared by every packet at one instant.
struct PacketClock {
  PacketClock(const PhysicalParams& p, double t);

  double t;
  double log_norm;   // -ln(2 pi sigma(t)^2) / 2
  double inv_var;    // 1 / sigma(t)^2
  double k_slope;    // d(wavenumber)/dz from spreading
};

class PacketEvaluator {
public:
  PacketEvaluator(const PhysicalParams& p, const GaussianPacket& packet);

  std::complex<double> amplitude(double z, double t) const;
  PacketSample sample(double z, const PacketClock& clock) const;
  double center(double t) const { return velocity_ * (t - kick_); }

private:
  PhysicalParams params_;
  double velocity_;
  double kick_;
  double k0_;     // sign * delta_prime
  double phase0_; // sign * delta
};

/// Normalized free packet G(z, t).
std::complex<double> free_packet(double z, double t, const PhysicalParams& p);

/// Kicked branch Psi_sign(z, t). Requires t >= t_exit (std::domain_error).
std::complex<double> sg_component(double z, double t, Sign sign, double t_exit,
                                  const PhysicalParams& p);

enum class Stage { free, post_coil, blend_a, a_split, blend_b, both_split };

const char* to_string(Stage s);

/// Stage governing time t. Interval boundaries resolve to the later stage.
Stage stage_at(double t, const StageSchedule& s);

struct StageState {
  Stage id;
  double gamma;
  PhysicalParams params;
  StageSchedule schedule;
};

StageState stage_state(const ExperimentConfig& config, double t);

class StageMismatch : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct Currents {
  double j_a;
  double j_b;
};

/// Probability density and mean wavenumbers of the two-particle state at one
/// configuration point. Velocities are (hbar / m) * k.
struct FieldSample {
  double log_density;
  double k_a;
  double k_b;
};

/// Closed-form two-particle state across the whole schedule.
///
/// Every stage is a mixture  rho = sum_k w_k |a_k(zA)|^2 |b_k(zB)|^2  over the
/// orthonormal product spin basis, where a_k and b_k are free or kicked
/// packets; currents follow the same weights because spin cross terms vanish.
/// Blend windows mix the adjacent stages with lambda(t).
class PairWavefunction {
public:
  explicit PairWavefunction(const ExperimentConfig& config);

  const ExperimentConfig& config() const { return config_; }
  double hbar_over_mass() const { return config_.physical.hbar / config_.physical.mass; }

  /// Dispatches on stage_at(t).
  FieldSample evaluate(double za, double zb, double t) const;
  /// Evaluates a given stage without checking its time window. Blend stages
  /// are accepted and mix their neighbors.
  FieldSample evaluate_stage(Stage stage, double za, double zb, double t) const;

  double density(double za, double zb, double t) const;
  Currents currents(double za, double zb, double t) const;

private:
  FieldSample pure(Stage stage, double za, double zb, const PacketClock& clock) const;
  FieldSample blend(Stage pre, Stage post, double lambda, double za, double zb,
                    const PacketClock& clock) const;

  ExperimentConfig config_;
  PacketEvaluator free_;
  PacketEvaluator a_up_, a_down_;
  PacketEvaluator b_up_, b_down_;
  // both_split weights in (++, +-, -+, --) order, already halved
  double w_both_[4];
};

/// lambda(t) = (1 - cos(pi (t - start) / (stop - start))) / 2, running 0 -> 1.
double blend_lambda(double t, double start, double stop);

enum class Window { alice = 1, bob = 3 };

/// Density and currents of the interpolated state. t must lie in the closed
/// window, otherwise StageMismatch.
double blend_density(double za, double zb, double t, Window window, const ExperimentConfig& config);
Currents blend_currents(double za, double zb, double t, Window window,
                        const ExperimentConfig& config);

/// Density and currents for a stage, checked against its validity window.
/// Throws StageMismatch when t lies outside it.
double stage_density(double za, double zb, double t, const StageState& s);
Currents stage_currents(double za, double zb, double t, const StageState& s);

/// One particle through Alice's analyzer with spinor (c_plus, c_minus).
class SingleWavefunction {
public:
  SingleWavefunction(const ExperimentConfig& config, double c_plus, double c_minus);

  const ExperimentConfig& config() const { return config_; }
  double hbar_over_mass() const { return config_.physical.hbar / config_.physical.mass; }
  PacketSample evaluate(double z, double t) const;

private:
  PacketSample post(double z, const PacketClock& clock) const;

  ExperimentConfig config_;
  PacketEvaluator free_, up_, down_;
  double log_w_up_, log_w_down_;
};

} // namespace pilotwave
