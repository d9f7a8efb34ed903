#pragma once

#include <cstdint>
#include <random>

namespace pilotwave {

/// Hidden-variable coordinates. r is the radial coordinate itself, drawn
/// uniformly on [0, 1), not an area-uniform radius.
struct DiskPoint {
  double r;
  double theta;
};

struct InitialPair {
  double za;
  double zb;
};

/// One independent random stream per (seed, stream index). Streams are
/// created on demand and never shared between workers.
class SeededRng {
public:
  SeededRng(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  /// 53-bit uniform on [0, 1).
  double uniform();

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stream index for pair `index` of the batch identified by `setting`.
std::uint64_t stream_for(std::uint64_t setting, std::uint64_t index);

/// Setting identifier derived from an angle's bit pattern.
std::uint64_t setting_from_angle(double angle, std::uint64_t tag = 0);

DiskPoint sample_disk(SeededRng& rng);

/// F(r, theta) = sigma0 sqrt(-2 ln(1 - r)) (cos theta, sin theta).
/// Throws std::domain_error unless 0 <= r < 1.
InitialPair disk_to_positions(DiskPoint p, double sigma0);

/// Inverse of F; the origin maps to (0, 0).
DiskPoint positions_to_disk(double za, double zb, double sigma0);

/// Draw from the initial density |G(zA, 0) G(zB, 0)|^2.
InitialPair sample_pair(SeededRng& rng, double sigma0);

} // namespace pilotwave
