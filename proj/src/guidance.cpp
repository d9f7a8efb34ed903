#include "pilotwave/guidance.hpp"

#include <cmath>
#include <sstream>

namespace pilotwave {

namespace {

const double log_floor = std::log(density_floor);

std::string underflow_message(double za, double zb, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "density underflow at zA=" << za << " zB=" << zb << " t=" << t;
  return os.str();
}

} // namespace

DensityUnderflow::DensityUnderflow(double za, double zb, double t)
    : std::runtime_error(underflow_message(za, zb, t)), where_{za, zb, t} {}

Velocity PairGuidance::operator()(double za, double zb, double t) const {
  const auto f = psi_.evaluate(za, zb, t);
  if (!(f.log_density >= log_floor)) throw DensityUnderflow(za, zb, t);
  const double scale = psi_.hbar_over_mass();
  return {scale * f.k_a, scale * f.k_b};
}

Velocity velocity(double za, double zb, double t, const ExperimentConfig& config) {
  return PairGuidance(config)(za, zb, t);
}

StepGrid step_grid(const StageSchedule& s) {
  const auto steps = static_cast<std::size_t>(std::ceil(s.t_end / s.dt * (1 - 1e-12)));
  return {steps, s.t_end / static_cast<double>(steps), s.t_end};
}

PairTrajectory integrate_pair(PairPosition start, const ExperimentConfig& config,
                              std::size_t stride) {
  if (stride == 0) stride = 1;
  const PairGuidance field(config);
  const auto grid = step_grid(config.schedule);
  PairTrajectory out;
  out.config_hash = config_digest(config);
  out.samples.reserve(grid.steps / stride + 2);
  integrate_pair_observed(start, field, [&](std::size_t i, const PairPosition& p) {
    if (i % stride == 0 || i == grid.steps) out.samples.push_back(p);
  });
  return out;
}

PairPosition integrate_pair_final(PairPosition start, const PairGuidance& field) {
  return integrate_pair_observed(start, field, [](std::size_t, const PairPosition&) {});
}

namespace {

template <class Observer>
double integrate_single_observed(double z, const SingleWavefunction& psi, Observer&& observe) {
  const auto grid = step_grid(psi.config().schedule);
  const double scale = psi.hbar_over_mass();
  auto field = [&](double x, double t) {
    const auto s = psi.evaluate(x, t);
    if (!(s.log_density >= log_floor)) throw DensityUnderflow(x, 0.0, t);
    return scale * s.wavenumber;
  };
  observe(std::size_t{0}, z, 0.0);
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const double t = grid.time(i);
    const double h = grid.time(i + 1) - t;
    const double k1 = field(z, t);
    const double k2 = field(z + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = field(z + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = field(z + h * k3, t + h);
    z += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    observe(i + 1, z, grid.time(i + 1));
  }
  return z;
}

} // namespace

SingleTrajectory integrate_single(double z0, double c_plus, double c_minus,
                                  const ExperimentConfig& config, std::size_t stride) {
  if (std::abs(c_plus * c_plus + c_minus * c_minus - 1) > 1e-9) {
    throw std::invalid_argument("integrate_single: c_plus^2 + c_minus^2 must equal 1");
  }
  if (stride == 0) stride = 1;
  const SingleWavefunction psi(config, c_plus, c_minus);
  const auto steps = step_grid(config.schedule).steps;
  SingleTrajectory out;
  out.samples.reserve(steps / stride + 2);
  const double z = integrate_single_observed(z0, psi, [&](std::size_t i, double x, double t) {
    if (i % stride == 0 || i == steps) out.samples.push_back({x, 0.0, t});
  });
  out.sign = sign_of(z);
  return out;
}

Sign single_outcome(double z0, const SingleWavefunction& psi) {
  return sign_of(integrate_single_observed(z0, psi, [](std::size_t, double, double) {}));
}

} // namespace pilotwave
