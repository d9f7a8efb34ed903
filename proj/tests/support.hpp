#pragma once

// Test-side oracles. Nothing here calls into the library's physics: the
// Gaussian mixtures below are rebuilt from the packet widths and branch
// motions so that they can serve as an independent reference.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "pilotwave/config.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Width of a freely spreading Gaussian: sigma0 sqrt(1 + (hbar t / (2 m sigma0^2))^2).
inline double width(const pilotwave::PhysicalParams& p, double t) {
  const double a = p.hbar * t / (2 * p.mass * p.sigma0 * p.sigma0);
  return p.sigma0 * std::sqrt(1 + a * a);
}

inline double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

inline double normal_pdf(double x, double mean, double sd) {
  const double u = (x - mean) / sd;
  return std::exp(-0.5 * u * u) / (sd * std::sqrt(2 * pi));
}

/// One product term w * N(zA; mA, s) * N(zB; mB, s).
struct Term {
  double w;
  double mean_a;
  double mean_b;
};

/// Position density of the pair as a Gaussian mixture at time t, for the
/// coil setting gamma = beta - alpha. Alice's branches leave the origin at
/// speed u from the middle of her window, Bob's from the middle of his.
struct Mixture {
  double sd;
  std::vector<Term> terms;

  double density(double za, double zb) const {
    double rho = 0;
    for (const auto& k : terms) rho += k.w * normal_pdf(za, k.mean_a, sd) * normal_pdf(zb, k.mean_b, sd);
    return rho;
  }
  double cell(double a0, double a1, double b0, double b1) const {
    double p = 0;
    for (const auto& k : terms)
      p += k.w * (normal_cdf(a1, k.mean_a, sd) - normal_cdf(a0, k.mean_a, sd)) *
           (normal_cdf(b1, k.mean_b, sd) - normal_cdf(b0, k.mean_b, sd));
    return p;
  }
  double cdf_a(double x) const {
    double p = 0;
    for (const auto& k : terms) p += k.w * normal_cdf(x, k.mean_a, sd);
    return p;
  }
  double cdf_b(double x) const {
    double p = 0;
    for (const auto& k : terms) p += k.w * normal_cdf(x, k.mean_b, sd);
    return p;
  }
};

/// Valid outside the blend windows.
inline Mixture pair_mixture(const pilotwave::ExperimentConfig& c, double t) {
  const auto& s = c.schedule;
  const double u = c.physical.u;
  Mixture m{width(c.physical, t), {}};
  const double ka = 0.5 * (s.t1 + s.t2);
  const double kb = 0.5 * (s.t3 + s.t4);
  if (t <= s.t1) {
    m.terms = {{1.0, 0.0, 0.0}};
  } else if (t >= s.t2 && t <= s.t3) {
    const double ca = u * (t - ka);
    m.terms = {{0.5, ca, 0.0}, {0.5, -ca, 0.0}};
  } else if (t >= s.t4) {
    const double ca = u * (t - ka);
    const double cb = u * (t - kb);
    const double g = c.beta - c.alpha;
    // singlet rotated by the coils: P(++) = P(--) = sin^2(g/2)/2
    const double same = 0.5 * std::pow(std::sin(g / 2), 2);
    const double diff = 0.5 * std::pow(std::cos(g / 2), 2);
    m.terms = {{same, ca, cb}, {diff, ca, -cb}, {diff, -ca, cb}, {same, -ca, -cb}};
  }
  return m;
}

/// Upper tail of the chi-square distribution.
inline double chi2_sf(double stat, double df) {
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
inline double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

/// Goodness of fit of observed counts against expected counts. Cells whose
/// expectation is below `min_expected` are pooled into one.
struct ChiSquare {
  double stat = 0;
  double df = 0;
  double p = 1;
};

inline ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected,
                            double min_expected = 5.0) {
  ChiSquare out;
  double pooled_o = 0, pooled_e = 0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < min_expected) {
      pooled_o += observed[i];
      pooled_e += expected[i];
      continue;
    }
    out.stat += std::pow(observed[i] - expected[i], 2) / expected[i];
    ++cells;
  }
  if (pooled_e > 0) {
    out.stat += std::pow(pooled_o - pooled_e, 2) / pooled_e;
    ++cells;
  }
  out.df = static_cast<double>(cells) - 1;
  out.p = out.df > 0 ? chi2_sf(out.stat, out.df) : 1.0;
  return out;
}

/// Pearson independence test on a 2x2 table.
inline ChiSquare independence_2x2(double pp, double pm, double mp, double mm) {
  const double n = pp + pm + mp + mm;
  const double ra = pp + pm, rb = mp + mm, ca = pp + mp, cb = pm + mm;
  const std::array<double, 4> obs{pp, pm, mp, mm};
  const std::array<double, 4> exp{ra * ca / n, ra * cb / n, rb * ca / n, rb * cb / n};
  ChiSquare out;
  for (std::size_t i = 0; i < 4; ++i)
    if (exp[i] > 0) out.stat += std::pow(obs[i] - exp[i], 2) / exp[i];
  out.df = 1;
  out.p = chi2_sf(out.stat, 1);
  return out;
}

/// x with cdf(x) = q, by bisection on [lo, hi].
inline double quantile(const std::function<double(double)>& cdf, double q, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// k interior edges splitting a marginal into k + 1 equal-probability bins.
inline std::vector<double> equal_mass_edges(const std::function<double(double)>& cdf, std::size_t bins,
                                            double span) {
  std::vector<double> edges;
  for (std::size_t i = 1; i < bins; ++i)
    edges.push_back(quantile(cdf, static_cast<double>(i) / static_cast<double>(bins), -span, span));
  return edges;
}

inline std::size_t bin_of(double x, const std::vector<double>& edges) {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

inline double edge(const std::vector<double>& edges, std::size_t i, bool upper) {
  if (!upper) return i == 0 ? -INFINITY : edges[i - 1];
  return i == edges.size() ? INFINITY : edges[i];
}

/// 2D chi-square of points against a mixture on an equal-mass grid.
inline ChiSquare grid_test(const Mixture& m, const std::vector<std::array<double, 2>>& points,
                           std::size_t bins = 8) {
  double span = 40 * m.sd;
  for (const auto& k : m.terms) span = std::max(span, std::max(std::abs(k.mean_a), std::abs(k.mean_b)) + 40 * m.sd);
  const auto ea = equal_mass_edges([&](double x) { return m.cdf_a(x); }, bins, span);
  const auto eb = equal_mass_edges([&](double x) { return m.cdf_b(x); }, bins, span);
  std::vector<double> obs(bins * bins, 0.0), exp(bins * bins, 0.0);
  for (const auto& p : points) obs[bin_of(p[0], ea) * bins + bin_of(p[1], eb)] += 1;
  const double n = static_cast<double>(points.size());
  for (std::size_t i = 0; i < bins; ++i)
    for (std::size_t j = 0; j < bins; ++j)
      exp[i * bins + j] = n * m.cell(edge(ea, i, false), edge(ea, i, true), edge(eb, j, false),
                                     edge(eb, j, true));
  return chi_square(obs, exp);
}

} // namespace oracle

namespace table {

using Row = std::vector<std::string>;

struct Csv {
  Row header;
  std::vector<Row> rows;
};

inline Row split(const std::string& line) {
  Row cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline Csv read(const std::filesystem::path& path) {
  Csv csv;
  std::ifstream in(path);
  std::string line;
  if (std::getline(in, line)) csv.header = split(line);
  while (std::getline(in, line)) csv.rows.push_back(split(line));
  return csv;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

enum class Type { integer, real, real_or_nan, sign, text };

struct Column {
  std::string name;
  Type type;
};

inline bool cell_ok(const std::string& v, Type t) {
  if (v.empty()) return false;
  switch (t) {
  case Type::text: return true;
  case Type::sign: return v == "1" || v == "-1";
  case Type::integer:
    return std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
  case Type::real:
  case Type::real_or_nan: {
    if (v == "nan") return t == Type::real_or_nan;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    return end == v.c_str() + v.size() && std::isfinite(x);
  }
  }
  return false;
}

/// Empty string when the file matches the schema, else the first problem.
inline std::string validate(const std::filesystem::path& path, const std::vector<Column>& schema,
                            std::optional<std::size_t> rows = std::nullopt) {
  if (!std::filesystem::exists(path)) return path.string() + ": missing";
  const auto csv = read(path);
  if (csv.header.size() != schema.size()) return path.string() + ": wrong column count";
  for (std::size_t i = 0; i < schema.size(); ++i)
    if (csv.header[i] != schema[i].name) return path.string() + ": column " + std::to_string(i) + " is " + csv.header[i];
  if (rows && csv.rows.size() != *rows)
    return path.string() + ": " + std::to_string(csv.rows.size()) + " rows, expected " + std::to_string(*rows);
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    if (csv.rows[r].size() != schema.size()) return path.string() + ": ragged row " + std::to_string(r);
    for (std::size_t i = 0; i < schema.size(); ++i)
      if (!cell_ok(csv.rows[r][i], schema[i].type))
        return path.string() + ": bad cell '" + csv.rows[r][i] + "' in " + schema[i].name;
  }
  return {};
}

} // namespace table

namespace testing_support {

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  static std::mt19937_64 salt{std::random_device{}()};
  auto dir = std::filesystem::temp_directory_path() / ("pilotwave_" + name + "_" + std::to_string(salt()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace testing_support
