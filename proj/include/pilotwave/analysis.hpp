#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pilotwave/config.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/sampling.hpp"
#include "pilotwave/spin.hpp"

namespace pilotwave {

struct PairOutcome {
  Sign s_a;
  Sign s_b;
  std::uint64_t pair_index;
  DiskPoint disk;
};

/// Signs of the final sample; zero reads as plus.
PairOutcome readout(const PairTrajectory& trajectory, std::uint64_t pair_index = 0,
                    DiskPoint disk = {0.0, 0.0});

/// Branch separation at t_end, in packet widths, is at least `min_widths`.
bool readout_guard(const ExperimentConfig& config, double min_widths = 5.0);

/// A fully simulated run: hidden variable, start, end, outcome.
struct SimulatedPair {
  DiskPoint disk;
  InitialPair start;
  PairPosition final;
  PairOutcome outcome;
};

/// Well-known setting tags for stream derivation.
namespace streams {
/// Same hidden variables for every angle (trajectory panels, disk plots).
inline constexpr std::uint64_t shared = 0;
}

/// Simulates pairs [0, n) of the batch `setting` with the coil angles of
/// `config`. Pair i draws from SeededRng(config.seed, stream_for(setting, i)).
std::vector<SimulatedPair> simulate_batch(const ExperimentConfig& config, std::uint64_t setting,
                                          std::size_t n, unsigned workers = 1);

/// Sample mean with its standard error (sample sd / sqrt(n)).
struct Estimate {
  double value = 0;
  double std_error = 0;
  std::size_t n = 0;
};

/// Setting identifier for gamma-keyed batches (correlation, marginals).
std::uint64_t gamma_setting(double gamma);

/// Outcomes at relative angle gamma (alpha = 0, beta = gamma), drawn from
/// gamma_setting(gamma).
std::vector<SimulatedPair> simulate_gamma(double gamma, std::size_t n, std::uint64_t seed,
                                          const ExperimentConfig& base, unsigned workers = 1);

Estimate correlation_of(std::span<const SimulatedPair> runs);
Estimate correlation(double gamma, std::size_t n, std::uint64_t seed, const ExperimentConfig& base,
                     unsigned workers = 1);

struct JointProbabilities {
  double pp, pm, mp, mm;
};

JointProbabilities joint_probabilities_theory(double gamma);

struct JointCounts {
  std::size_t pp = 0, pm = 0, mp = 0, mm = 0;
  std::size_t total() const { return pp + pm + mp + mm; }
};

JointCounts count_joint(std::span<const SimulatedPair> runs);

/// One term of the CHSH combination: sign * E(alpha, beta).
struct ChshTerm {
  double alpha;
  double beta;
  int sign;
};

/// M = E(a,b) - E(a,b') + E(a',b) + E(a',b') with (a, a', b, b') = (0, theta, theta/2, 3 theta/2).
std::array<ChshTerm, 4> chsh_terms(double theta);

struct ChshEstimate {
  double theta = 0;
  double m_hat = 0;
  double std_error = 0;
  std::size_t n_pairs_per_setting = 0;
  std::array<Estimate, 4> correlators{};
};

ChshEstimate chsh_M(double theta, std::size_t n_per_setting, std::uint64_t seed,
                    const ExperimentConfig& base, unsigned workers = 1);

/// 3 cos(theta/2) - cos(3 theta/2). With E(gamma) = -cos(gamma) the
/// combination above evaluates to minus this value; compare magnitudes.
double chsh_theory(double theta);

/// Rational first guess refined by Halley steps on erf. |x| < 1 required
/// (std::domain_error otherwise).
double inverse_erf(double x);

enum class Arc { diameter, a_plus, a_minus };

const char* to_string(Arc arc);

struct SeparatrixSample {
  Arc arc;
  double theta;
  double u;
};

/// Outcome boundaries on the hidden-variable disk.
///
/// Alice's boundary is the vertical diameter zA0 = 0. Bob's boundary is the
/// line zB0 = +z_boundary on Alice's plus half and zB0 = -z_boundary on her
/// minus half, with z_boundary = sqrt(2) sigma0 erfinv(cos gamma); on the disk
/// it becomes U(theta) = 1 - exp(-(erfinv(cos gamma) / sin theta)^2).
/// For cos gamma = +-1 Bob's outcome is fixed by Alice's and no curve exists:
/// `degenerate` is set and only the diameter is returned.
struct SeparatrixCurve {
  double gamma = 0;
  double z_boundary = 0;
  bool degenerate = false;
  std::vector<SeparatrixSample> samples;
};

/// Evaluates U on every grid angle that lies on an arc of the curve.
SeparatrixCurve separatrix(double gamma, std::span<const double> theta_grid, double sigma0 = 1.0);

/// n angles evenly spaced on [0, 2 pi).
std::vector<double> uniform_theta_grid(std::size_t n);

/// Joint outcome implied by the analytic boundaries for a start position.
std::pair<Sign, Sign> predicted_outcome(double gamma, InitialPair start, double sigma0);

struct DiskLabel {
  Sign s_a;
  Sign s_b;
  const char* color;
};

/// blue (+,+), orange (+,-), green (-,+), red (-,-)
std::array<DiskLabel, 4> disk_palette();

/// Runs n pairs on the shared stream so different gamma reuse the same points.
std::vector<SimulatedPair> disk_partition(double gamma, std::size_t n, std::uint64_t seed,
                                          const ExperimentConfig& base, unsigned workers = 1);

struct Marginals {
  double gamma = 0;
  double p_a_plus = 0;
  double p_b_plus = 0;
  double stderr_a = 0;
  double stderr_b = 0;
  std::size_t n = 0;
};

Marginals marginals_of(double gamma, std::span<const SimulatedPair> runs);
Marginals marginals(double gamma, std::size_t n, std::uint64_t seed, const ExperimentConfig& base,
                    unsigned workers = 1);

} // namespace pilotwave
