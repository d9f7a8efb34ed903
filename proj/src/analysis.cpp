#include "pilotwave/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pilotwave/batch.hpp"

namespace pilotwave {

PairOutcome readout(const PairTrajectory& trajectory, std::uint64_t pair_index, DiskPoint disk) {
  if (trajectory.samples.empty()) throw std::invalid_argument("readout: empty trajectory");
  const auto& last = trajectory.samples.back();
  return {sign_of(last.za), sign_of(last.zb), pair_index, disk};
}

bool readout_guard(const ExperimentConfig& config, double min_widths) {
  return readout_separation(config) >= min_widths;
}

std::vector<SimulatedPair> simulate_batch(const ExperimentConfig& config, std::uint64_t setting,
                                          std::size_t n, unsigned workers) {
  const PairGuidance field(config);
  std::vector<SimulatedPair> out(n);
  parallel_for(n, workers, [&](std::size_t i) {
    SeededRng rng(config.seed, stream_for(setting, i));
    const auto disk = sample_disk(rng);
    const auto start = disk_to_positions(disk, config.physical.sigma0);
    const auto final = integrate_pair_final({start.za, start.zb, 0.0}, field);
    out[i] = {disk, start, final, {sign_of(final.za), sign_of(final.zb), i, disk}};
  });
  return out;
}

std::uint64_t gamma_setting(double gamma) { return setting_from_angle(gamma, 1); }

std::vector<SimulatedPair> simulate_gamma(double gamma, std::size_t n, std::uint64_t seed,
                                          const ExperimentConfig& base, unsigned workers) {
  auto config = base;
  config.alpha = 0;
  config.beta = gamma;
  config.seed = seed;
  return simulate_batch(config, gamma_setting(gamma), n, workers);
}

Estimate correlation_of(std::span<const SimulatedPair> runs) {
  Estimate e;
  e.n = runs.size();
  if (runs.empty()) return e;
  double sum = 0;
  for (const auto& r : runs) sum += value(r.outcome.s_a) * value(r.outcome.s_b);
  const double n = static_cast<double>(runs.size());
  e.value = sum / n;
  if (runs.size() > 1) {
    // products are +-1, so sum of squares is n
    const double var = (n - sum * sum / n) / (n - 1);
    e.std_error = std::sqrt(std::max(var, 0.0) / n);
  }
  return e;
}

Estimate correlation(double gamma, std::size_t n, std::uint64_t seed, const ExperimentConfig& base,
                     unsigned workers) {
  const auto runs = simulate_gamma(gamma, n, seed, base, workers);
  return correlation_of(runs);
}

JointProbabilities joint_probabilities_theory(double gamma) {
  const double s2 = 0.5 * std::pow(std::sin(gamma / 2), 2);
  const double c2 = 0.5 * std::pow(std::cos(gamma / 2), 2);
  return {s2, c2, c2, s2};
}

JointCounts count_joint(std::span<const SimulatedPair> runs) {
  JointCounts c;
  for (const auto& r : runs) {
    const bool a = r.outcome.s_a == Sign::plus;
    const bool b = r.outcome.s_b == Sign::plus;
    if (a && b) ++c.pp;
    else if (a) ++c.pm;
    else if (b) ++c.mp;
    else ++c.mm;
  }
  return c;
}

std::array<ChshTerm, 4> chsh_terms(double theta) {
  const double a = 0, a2 = theta, b = theta / 2, b2 = 3 * theta / 2;
  return {{{a, b, +1}, {a, b2, -1}, {a2, b, +1}, {a2, b2, +1}}};
}

ChshEstimate chsh_M(double theta, std::size_t n_per_setting, std::uint64_t seed,
                    const ExperimentConfig& base, unsigned workers) {
  ChshEstimate out;
  out.theta = theta;
  out.n_pairs_per_setting = n_per_setting;
  const auto terms = chsh_terms(theta);
  double var = 0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    auto config = base;
    config.alpha = terms[k].alpha;
    config.beta = terms[k].beta;
    config.seed = seed;
    const auto runs = simulate_batch(config, setting_from_angle(theta, 0x100 + k), n_per_setting,
                                     workers);
    out.correlators[k] = correlation_of(runs);
    out.m_hat += terms[k].sign * out.correlators[k].value;
    var += out.correlators[k].std_error * out.correlators[k].std_error;
  }
  out.std_error = std::sqrt(var);
  return out;
}

double chsh_theory(double theta) { return 3 * std::cos(theta / 2) - std::cos(3 * theta / 2); }

namespace {

// Giles, "Approximating the erfinv function" (single-precision variant).
double erfinv_guess(double x) {
  double w = -std::log1p(-x * x);
  double p;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  return p * x;
}

} // namespace

double inverse_erf(double x) {
  if (!(std::abs(x) < 1)) throw std::domain_error("inverse_erf: |x| must be < 1");
  if (x == 0) return 0;
  const double ax = std::abs(x);
  const double tail = 1 - ax; // exact for ax >= 0.5
  double y = erfinv_guess(ax);
  for (int it = 0; it < 4; ++it) {
    // residual erf(y) - ax, taken through erfc in the tail to keep digits
    const double r = ax <= 0.5 ? std::erf(y) - ax : tail - std::erfc(y);
    const double slope = 2 / std::sqrt(std::numbers::pi) * std::exp(-y * y);
    const double step = r / slope;
    y -= step / (1 + step * y);
    if (std::abs(step) <= 1e-17 * y) break;
  }
  return std::copysign(y, x);
}

const char* to_string(Arc arc) {
  switch (arc) {
  case Arc::diameter: return "diameter";
  case Arc::a_plus: return "a_plus";
  case Arc::a_minus: return "a_minus";
  }
  return "?";
}

namespace {

constexpr double pi = std::numbers::pi;

bool in_open(double theta, double lo, double hi) { return theta > lo && theta < hi; }

// Open quadrant [lo, hi) where the boundary zB0 = level crosses the plus
// (cos theta > 0) or minus half of the disk. A zero level uses the upper
// quadrant on the plus half and the lower one on the minus half.
std::pair<double, double> arc_range(bool plus_half, double level) {
  if (plus_half) return level >= 0 ? std::pair{0.0, pi / 2} : std::pair{3 * pi / 2, 2 * pi};
  return level <= 0 ? std::pair{pi, 3 * pi / 2} : std::pair{pi / 2, pi};
}

} // namespace

SeparatrixCurve separatrix(double gamma, std::span<const double> theta_grid, double sigma0) {
  SeparatrixCurve curve;
  curve.gamma = gamma;
  curve.samples.push_back({Arc::diameter, pi / 2, std::nextafter(1.0, 0.0)});
  curve.samples.push_back({Arc::diameter, 3 * pi / 2, std::nextafter(1.0, 0.0)});

  const double c = std::cos(gamma);
  if (std::abs(c) >= 1) {
    curve.degenerate = true;
    curve.z_boundary = std::copysign(std::numeric_limits<double>::infinity(), c);
    return curve;
  }
  const double e = inverse_erf(c);
  curve.z_boundary = std::sqrt(2.0) * sigma0 * e;
  const double top = std::nextafter(1.0, 0.0);
  for (const Arc arc : {Arc::a_plus, Arc::a_minus}) {
    const double level = arc == Arc::a_plus ? e : -e;
    const auto [lo, hi] = arc_range(arc == Arc::a_plus, level);
    for (double theta : theta_grid) {
      if (!in_open(theta, lo, hi)) continue;
      const double ratio = e / std::sin(theta);
      curve.samples.push_back({arc, theta, std::min(-std::expm1(-ratio * ratio), top)});
    }
  }
  return curve;
}

std::vector<double> uniform_theta_grid(std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = 2 * pi * static_cast<double>(i) / static_cast<double>(n);
  return grid;
}

std::pair<Sign, Sign> predicted_outcome(double gamma, InitialPair start, double sigma0) {
  const Sign a = sign_of(start.za);
  const double c = std::cos(gamma);
  double level;
  if (std::abs(c) >= 1) {
    level = std::copysign(std::numeric_limits<double>::infinity(), c);
  } else {
    level = std::sqrt(2.0) * sigma0 * inverse_erf(c);
  }
  if (a == Sign::minus) level = -level;
  return {a, start.zb > level ? Sign::plus : Sign::minus};
}

std::array<DiskLabel, 4> disk_palette() {
  return {{{Sign::plus, Sign::plus, "blue"},
           {Sign::plus, Sign::minus, "orange"},
           {Sign::minus, Sign::plus, "green"},
           {Sign::minus, Sign::minus, "red"}}};
}

std::vector<SimulatedPair> disk_partition(double gamma, std::size_t n, std::uint64_t seed,
                                          const ExperimentConfig& base, unsigned workers) {
  auto config = base;
  config.alpha = 0;
  config.beta = gamma;
  config.seed = seed;
  return simulate_batch(config, streams::shared, n, workers);
}

Marginals marginals_of(double gamma, std::span<const SimulatedPair> runs) {
  Marginals m;
  m.gamma = gamma;
  m.n = runs.size();
  if (runs.empty()) return m;
  std::size_t a = 0, b = 0;
  for (const auto& r : runs) {
    a += r.outcome.s_a == Sign::plus;
    b += r.outcome.s_b == Sign::plus;
  }
  const double n = static_cast<double>(runs.size());
  m.p_a_plus = static_cast<double>(a) / n;
  m.p_b_plus = static_cast<double>(b) / n;
  m.stderr_a = std::sqrt(m.p_a_plus * (1 - m.p_a_plus) / n);
  m.stderr_b = std::sqrt(m.p_b_plus * (1 - m.p_b_plus) / n);
  return m;
}

Marginals marginals(double gamma, std::size_t n, std::uint64_t seed, const ExperimentConfig& base,
                    unsigned workers) {
  const auto runs = simulate_gamma(gamma, n, seed, base, workers);
  return marginals_of(gamma, runs);
}

} // namespace pilotwave
