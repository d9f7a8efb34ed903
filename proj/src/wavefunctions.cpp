#include "pilotwave/wavefunctions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pilotwave {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

struct Term {
  double log_weight;
  PacketSample a;
  PacketSample b;
};

// log-sum-exp over product terms; k_a, k_b are density-weighted averages
template <std::size_t N>
FieldSample combine(const Term (&terms)[N]) {
  double top = neg_inf;
  for (const auto& t : terms) {
    const double l = t.log_weight + t.a.log_density + t.b.log_density;
    if (l > top) top = l;
  }
  double sum = 0, ka = 0, kb = 0;
  for (const auto& t : terms) {
    const double w = std::exp(t.log_weight + t.a.log_density + t.b.log_density - top);
    sum += w;
    ka += w * t.a.wavenumber;
    kb += w * t.b.wavenumber;
  }
  return {top + std::log(sum), ka / sum, kb / sum};
}

double safe_log(double w) { return w > 0 ? std::log(w) : neg_inf; }

} // namespace

GaussianPacket GaussianPacket::free(const PhysicalParams& p) { return {p.sigma0, 0.0, 0.0, 0}; }

GaussianPacket GaussianPacket::split(const PhysicalParams& p, Sign branch, double kick_time) {
  return {p.sigma0, value(branch) * p.u, kick_time, value(branch)};
}

PacketClock::PacketClock(const PhysicalParams& p, double time) : t(time) {
  const double s2 = p.sigma0 * p.sigma0;
  const double a = p.hbar * time / (2 * p.mass * s2);
  const double var = s2 * (1 + a * a);
  log_norm = -0.5 * std::log(2 * std::numbers::pi * var);
  inv_var = 1 / var;
  k_slope = a / (2 * var);
}

PacketEvaluator::PacketEvaluator(const PhysicalParams& p, const GaussianPacket& packet)
    : params_(p),
      velocity_(packet.center_velocity),
      kick_(packet.split_time),
      k0_(packet.phase_sign * p.delta_prime),
      phase0_(packet.phase_sign * p.delta) {
  params_.sigma0 = packet.sigma0;
}

std::complex<double> PacketEvaluator::amplitude(double z, double t) const {
  using namespace std::complex_literals;
  const double s0 = params_.sigma0;
  const std::complex<double> st = s0 * (1.0 + 1i * (params_.hbar * t / (2 * params_.mass * s0 * s0)));
  const double c = center(t);
  const double d = z - c;
  const std::complex<double> norm = std::pow(2 * std::numbers::pi, -0.25) / std::sqrt(st);
  const std::complex<double> exponent = -d * d / (4 * s0 * st) + 1i * (phase0_ + k0_ * (z - c / 2));
  return norm * std::exp(exponent);
}

PacketSample PacketEvaluator::sample(double z, const PacketClock& clock) const {
  const double d = z - center(clock.t);
  return {clock.log_norm - 0.5 * d * d * clock.inv_var, k0_ + d * clock.k_slope};
}

std::complex<double> free_packet(double z, double t, const PhysicalParams& p) {
  return PacketEvaluator(p, GaussianPacket::free(p)).amplitude(z, t);
}

std::complex<double> sg_component(double z, double t, Sign sign, double t_exit,
                                  const PhysicalParams& p) {
  if (t < t_exit) throw std::domain_error("sg_component: t precedes the analyzer exit time");
  return PacketEvaluator(p, GaussianPacket::split(p, sign, t_exit)).amplitude(z, t);
}

const char* to_string(Stage s) {
  switch (s) {
  case Stage::free: return "S1_free";
  case Stage::post_coil: return "S2_post_coil";
  case Stage::blend_a: return "BLEND_A";
  case Stage::a_split: return "S3_A_split";
  case Stage::blend_b: return "BLEND_B";
  case Stage::both_split: return "S4_both_split";
  }
  return "?";
}

Stage stage_at(double t, const StageSchedule& s) {
  if (t < s.t_coil) return Stage::free;
  if (t < s.t1) return Stage::post_coil;
  if (t < s.t2) return Stage::blend_a;
  if (t < s.t3) return Stage::a_split;
  if (t < s.t4) return Stage::blend_b;
  return Stage::both_split;
}

StageState stage_state(const ExperimentConfig& c, double t) {
  return {stage_at(t, c.schedule), c.gamma(), c.physical, c.schedule};
}

double blend_lambda(double t, double start, double stop) {
  return 0.5 * (1 - std::cos(std::numbers::pi * (t - start) / (stop - start)));
}

PairWavefunction::PairWavefunction(const ExperimentConfig& c)
    : config_(c),
      free_(c.physical, GaussianPacket::free(c.physical)),
      a_up_(c.physical, GaussianPacket::split(c.physical, Sign::plus, c.schedule.kick_a())),
      a_down_(c.physical, GaussianPacket::split(c.physical, Sign::minus, c.schedule.kick_a())),
      b_up_(c.physical, GaussianPacket::split(c.physical, Sign::plus, c.schedule.kick_b())),
      b_down_(c.physical, GaussianPacket::split(c.physical, Sign::minus, c.schedule.kick_b())) {
  const auto amps = post_coil_state(c.gamma());
  for (int k = 0; k < 4; ++k) w_both_[k] = std::norm(amps[k]);
}

FieldSample PairWavefunction::pure(Stage stage, double za, double zb,
                                   const PacketClock& clock) const {
  switch (stage) {
  case Stage::free:
  case Stage::post_coil: {
    const auto a = free_.sample(za, clock);
    const auto b = free_.sample(zb, clock);
    return {a.log_density + b.log_density, a.wavenumber, b.wavenumber};
  }
  case Stage::a_split: {
    const auto b = free_.sample(zb, clock);
    const Term terms[] = {{std::log(0.5), a_up_.sample(za, clock), b},
                          {std::log(0.5), a_down_.sample(za, clock), b}};
    return combine(terms);
  }
  case Stage::both_split: {
    const auto au = a_up_.sample(za, clock);
    const auto ad = a_down_.sample(za, clock);
    const auto bu = b_up_.sample(zb, clock);
    const auto bd = b_down_.sample(zb, clock);
    const Term terms[] = {{safe_log(w_both_[0]), au, bu},
                          {safe_log(w_both_[1]), au, bd},
                          {safe_log(w_both_[2]), ad, bu},
                          {safe_log(w_both_[3]), ad, bd}};
    return combine(terms);
  }
  case Stage::blend_a:
  case Stage::blend_b: break;
  }
  throw StageMismatch("pure stage expected");
}

FieldSample PairWavefunction::blend(Stage pre, Stage post, double lambda, double za, double zb,
                                    const PacketClock& clock) const {
  if (lambda <= 0) return pure(pre, za, zb, clock);
  if (lambda >= 1) return pure(post, za, zb, clock);
  const auto before = pure(pre, za, zb, clock);
  const auto after = pure(post, za, zb, clock);
  const double l0 = std::log1p(-lambda) + before.log_density;
  const double l1 = std::log(lambda) + after.log_density;
  const double top = std::max(l0, l1);
  const double w0 = std::exp(l0 - top);
  const double w1 = std::exp(l1 - top);
  const double sum = w0 + w1;
  return {top + std::log(sum), (w0 * before.k_a + w1 * after.k_a) / sum,
          (w0 * before.k_b + w1 * after.k_b) / sum};
}

FieldSample PairWavefunction::evaluate_stage(Stage stage, double za, double zb, double t) const {
  const PacketClock clock(config_.physical, t);
  const auto& s = config_.schedule;
  switch (stage) {
  case Stage::blend_a: return blend(Stage::post_coil, Stage::a_split, blend_lambda(t, s.t1, s.t2), za, zb, clock);
  case Stage::blend_b: return blend(Stage::a_split, Stage::both_split, blend_lambda(t, s.t3, s.t4), za, zb, clock);
  default: return pure(stage, za, zb, clock);
  }
}

FieldSample PairWavefunction::evaluate(double za, double zb, double t) const {
  return evaluate_stage(stage_at(t, config_.schedule), za, zb, t);
}

double PairWavefunction::density(double za, double zb, double t) const {
  return std::exp(evaluate(za, zb, t).log_density);
}

Currents PairWavefunction::currents(double za, double zb, double t) const {
  const auto f = evaluate(za, zb, t);
  const double scale = hbar_over_mass() * std::exp(f.log_density);
  return {scale * f.k_a, scale * f.k_b};
}

namespace {

ExperimentConfig config_from(const StageState& s) {
  ExperimentConfig c;
  c.physical = s.params;
  c.schedule = s.schedule;
  c.alpha = 0;
  c.beta = s.gamma;
  return c;
}

void check_window(double t, Stage id, const StageSchedule& s) {
  bool ok = false;
  switch (id) {
  case Stage::free: ok = t >= 0 && t <= s.t_coil; break;
  case Stage::post_coil: ok = t >= s.t_coil && t <= s.t1; break;
  case Stage::blend_a: ok = t >= s.t1 && t <= s.t2; break;
  case Stage::a_split: ok = t >= s.t2 && t <= s.t3; break;
  case Stage::blend_b: ok = t >= s.t3 && t <= s.t4; break;
  case Stage::both_split: ok = t >= s.t4; break;
  }
  if (!ok) {
    throw StageMismatch(std::string("time ") + std::to_string(t) + " outside the window of " +
                        to_string(id));
  }
}

FieldSample checked(double za, double zb, double t, const StageState& s) {
  check_window(t, s.id, s.schedule);
  return PairWavefunction(config_from(s)).evaluate_stage(s.id, za, zb, t);
}

StageState window_state(Window w, const ExperimentConfig& c) {
  return {w == Window::alice ? Stage::blend_a : Stage::blend_b, c.gamma(), c.physical, c.schedule};
}

} // namespace

double stage_density(double za, double zb, double t, const StageState& s) {
  return std::exp(checked(za, zb, t, s).log_density);
}

Currents stage_currents(double za, double zb, double t, const StageState& s) {
  const auto f = checked(za, zb, t, s);
  const double scale = s.params.hbar / s.params.mass * std::exp(f.log_density);
  return {scale * f.k_a, scale * f.k_b};
}

double blend_density(double za, double zb, double t, Window w, const ExperimentConfig& c) {
  return stage_density(za, zb, t, window_state(w, c));
}

Currents blend_currents(double za, double zb, double t, Window w, const ExperimentConfig& c) {
  return stage_currents(za, zb, t, window_state(w, c));
}

SingleWavefunction::SingleWavefunction(const ExperimentConfig& c, double c_plus, double c_minus)
    : config_(c),
      free_(c.physical, GaussianPacket::free(c.physical)),
      up_(c.physical, GaussianPacket::split(c.physical, Sign::plus, c.schedule.kick_a())),
      down_(c.physical, GaussianPacket::split(c.physical, Sign::minus, c.schedule.kick_a())),
      log_w_up_(safe_log(c_plus * c_plus)),
      log_w_down_(safe_log(c_minus * c_minus)) {}

PacketSample SingleWavefunction::post(double z, const PacketClock& clock) const {
  const auto u = up_.sample(z, clock);
  const auto d = down_.sample(z, clock);
  const double lu = log_w_up_ + u.log_density;
  const double ld = log_w_down_ + d.log_density;
  const double top = std::max(lu, ld);
  const double wu = std::exp(lu - top);
  const double wd = std::exp(ld - top);
  return {top + std::log(wu + wd), (wu * u.wavenumber + wd * d.wavenumber) / (wu + wd)};
}

PacketSample SingleWavefunction::evaluate(double z, double t) const {
  const PacketClock clock(config_.physical, t);
  const auto& s = config_.schedule;
  if (t < s.t1) return free_.sample(z, clock);
  if (t >= s.t2) return post(z, clock);
  const double lambda = blend_lambda(t, s.t1, s.t2);
  const auto before = free_.sample(z, clock);
  const auto after = post(z, clock);
  const double l0 = std::log1p(-lambda) + before.log_density;
  const double l1 = std::log(lambda) + after.log_density;
  const double top = std::max(l0, l1);
  const double w0 = std::exp(l0 - top);
  const double w1 = std::exp(l1 - top);
  return {top + std::log(w0 + w1), (w0 * before.wavenumber + w1 * after.wavenumber) / (w0 + w1)};
}

} // namespace pilotwave
