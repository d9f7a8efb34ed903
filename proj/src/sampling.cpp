#include "pilotwave/sampling.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pilotwave {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t a = mix64(seed);
  const std::uint64_t b = mix64(stream ^ 0x9e3779b97f4a7c15ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

constexpr double two_pi = 2 * std::numbers::pi;

} // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_for(std::uint64_t setting, std::uint64_t index) {
  return mix64(mix64(setting) ^ index);
}

std::uint64_t setting_from_angle(double angle, std::uint64_t tag) {
  // +0.0 and -0.0 name the same setting
  if (angle == 0) angle = 0;
  return mix64(std::bit_cast<std::uint64_t>(angle) ^ mix64(tag));
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index), engine_(make_engine(seed, stream_index)) {}

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

DiskPoint sample_disk(SeededRng& rng) {
  const double r = rng.uniform();
  double theta = two_pi * rng.uniform();
  if (theta >= two_pi) theta = 0;
  return {r, theta};
}

InitialPair disk_to_positions(DiskPoint p, double sigma0) {
  if (!(p.r >= 0 && p.r < 1)) throw std::domain_error("disk_to_positions: r must lie in [0, 1)");
  const double radius = sigma0 * std::sqrt(-2 * std::log1p(-p.r));
  return {radius * std::cos(p.theta), radius * std::sin(p.theta)};
}

DiskPoint positions_to_disk(double za, double zb, double sigma0) {
  const double rho2 = za * za + zb * zb;
  const double r = -std::expm1(-rho2 / (2 * sigma0 * sigma0));
  if (rho2 == 0) return {0.0, 0.0};
  double theta = std::atan2(zb, za);
  if (theta < 0) theta += two_pi;
  if (theta >= two_pi) theta = 0;
  return {r, theta};
}

InitialPair sample_pair(SeededRng& rng, double sigma0) {
  return disk_to_positions(sample_disk(rng), sigma0);
}

} // namespace pilotwave
