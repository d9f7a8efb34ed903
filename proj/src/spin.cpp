#include "pilotwave/spin.hpp"

#include <cmath>
#include <stdexcept>

namespace pilotwave {

SpinRotation::SpinRotation(double angle) : angle_(angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  m_ = {{{c, s}, {-s, c}}};
}

Spinor2 SpinRotation::apply(const Spinor2& v) const {
  return {m_[0][0] * v.up + m_[0][1] * v.down, m_[1][0] * v.up + m_[1][1] * v.down};
}

SpinRotation rotation_y(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("rotation_y: angle must be finite");
  return SpinRotation(alpha);
}

ConditionalCoefficients conditional_coefficients(double gamma, Sign s_a) {
  const double s = std::sin(gamma / 2);
  const double c = std::cos(gamma / 2);
  switch (s_a) {
  case Sign::plus: return {s, c};
  case Sign::minus: return {-c, s};
  }
  throw std::invalid_argument("conditional_coefficients: s_A must be +1 or -1");
}

TwoSpinState singlet() {
  const double h = 1 / std::sqrt(2.0);
  return {0.0, h, -h, 0.0};
}

TwoSpinState rotate_pair(const TwoSpinState& state, const SpinRotation& a, const SpinRotation& b) {
  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  TwoSpinState out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out[2 * i + j] += ma[i][k] * mb[j][l] * state[2 * k + l];
  return out;
}

TwoSpinState post_coil_state(double gamma) {
  const double h = 1 / std::sqrt(2.0);
  const auto up = conditional_coefficients(gamma, Sign::plus);
  const auto down = conditional_coefficients(gamma, Sign::minus);
  return {h * up.c_plus, h * up.c_minus, h * down.c_plus, h * down.c_minus};
}

} // namespace pilotwave
