#pragma once

#include <array>
#include <complex>

namespace pilotwave {

/// Measured spin projection along z, read from the sign of a coordinate.
enum class Sign : int { minus = -1, plus = 1 };

inline int value(Sign s) { return static_cast<int>(s); }
/// sgn(z) with z == 0 resolved to plus.
inline Sign sign_of(double z) { return z < 0 ? Sign::minus : Sign::plus; }

struct Spinor2 {
  std::complex<double> up;
  std::complex<double> down;

  double norm2() const { return std::norm(up) + std::norm(down); }
};

/// exp(i alpha/2 sigma_y) = cos(alpha/2) 1 + i sin(alpha/2) sigma_y. The
/// matrix is real: [[c, s], [-s, c]].
class SpinRotation {
public:
  explicit SpinRotation(double angle);

  double angle() const { return angle_; }
  const std::array<std::array<double, 2>, 2>& matrix() const { return m_; }

  Spinor2 apply(const Spinor2& s) const;
  SpinRotation then(const SpinRotation& next) const { return SpinRotation(angle_ + next.angle_); }

private:
  double angle_;
  std::array<std::array<double, 2>, 2> m_;
};

/// Throws std::invalid_argument on a non-finite angle.
SpinRotation rotation_y(double alpha);

/// gamma = beta - alpha, deliberately not range-reduced.
inline double relative_angle(double alpha, double beta) { return beta - alpha; }

/// Spin amplitudes of Bob's particle once Alice's has been found in `s_a`.
struct ConditionalCoefficients {
  double c_plus;
  double c_minus;
};

ConditionalCoefficients conditional_coefficients(double gamma, Sign s_a);

/// Two-particle spin amplitudes in the product basis, ordered
/// (++, +-, -+, --) with the first label for Alice.
using TwoSpinState = std::array<std::complex<double>, 4>;

/// (|+-> - |-+>) / sqrt(2)
TwoSpinState singlet();

/// Applies one rotation to each particle.
TwoSpinState rotate_pair(const TwoSpinState& state, const SpinRotation& a, const SpinRotation& b);

/// Amplitudes after both coils, built from conditional_coefficients(gamma, .).
TwoSpinState post_coil_state(double gamma);

} // namespace pilotwave
