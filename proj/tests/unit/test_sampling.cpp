#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "pilotwave/sampling.hpp"
#include "support.hpp"

using namespace pilotwave;
using std::numbers::pi;

TEST_CASE("uniform draws lie in [0, 1) and streams are reproducible") {
  SeededRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(x == b.uniform());
  }
  CHECK(SeededRng(7, 3).uniform() != c.uniform());
  CHECK(SeededRng(7, 3).uniform() != d.uniform());
  CHECK(a.seed() == 7);
  CHECK(a.stream_index() == 3);

  SeededRng e(1, 2), f(1, 2);
  const auto p = sample_disk(e), q = sample_disk(f);
  CHECK(p.r == q.r);
  CHECK(p.theta == q.theta);
}

TEST_CASE("stream identifiers are distinct") {
  std::set<std::uint64_t> ids;
  for (std::uint64_t s = 0; s < 20; ++s)
    for (std::uint64_t i = 0; i < 500; ++i) ids.insert(stream_for(s, i));
  CHECK(ids.size() == 20 * 500);
  CHECK(setting_from_angle(0.0, 1) == setting_from_angle(-0.0, 1));
  CHECK(setting_from_angle(0.5, 1) != setting_from_angle(0.5, 2));
  CHECK(setting_from_angle(0.5, 1) != setting_from_angle(0.5000000000000001, 1));
}

TEST_CASE("disk coordinates are uniform") {
  const std::size_t n = 100000;
  std::vector<double> rs, thetas;
  double sum = 0;
  std::vector<double> bins(16, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    SeededRng rng(0, stream_for(99, i));
    const auto p = sample_disk(rng);
    CHECK(p.theta >= 0.0);
    CHECK(p.theta < 2 * pi);
    sum += p.r;
    rs.push_back(p.r);
    bins[static_cast<std::size_t>(p.theta / (2 * pi) * 16)] += 1;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sum / n - 0.5) < 0.005);
  const auto chi = oracle::chi_square(bins, std::vector<double>(16, n / 16.0));
  CHECK(chi.p > 0.001);
  CHECK(oracle::ks_pvalue(oracle::ks_statistic(rs, [](double x) { return x; }), n) > 0.001);
}

TEST_CASE("disk map examples and round trip") {
  const double r1 = 1 - std::exp(-0.5);
  auto z = disk_to_positions({r1, 0.0}, 1.0);
  CHECK(z.za == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(z.zb == 0.0);
  z = disk_to_positions({r1, 0.0}, 2.5);
  CHECK(z.za == doctest::Approx(2.5).epsilon(1e-15));
  z = disk_to_positions({0.0, 1.3}, 1.0);
  CHECK(z.za == 0.0);
  CHECK(z.zb == 0.0);

  auto p = positions_to_disk(1.0, 0.0, 1.0);
  CHECK(p.r == doctest::Approx(r1).epsilon(1e-15));
  CHECK(p.theta == 0.0);
  p = positions_to_disk(0.0, 0.0, 1.0);
  CHECK(p.r == 0.0);
  CHECK(p.theta == 0.0);

  CHECK_THROWS_AS(disk_to_positions({1.0, 0.0}, 1.0), std::domain_error);
  CHECK_THROWS_AS(disk_to_positions({-0.1, 0.0}, 1.0), std::domain_error);

  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> ur(1e-9, 0.999999), ut(0, 2 * pi);
  for (int i = 0; i < 1000; ++i) {
    const DiskPoint q{ur(gen), ut(gen)};
    const auto pos = disk_to_positions(q, 1.7);
    const auto back = positions_to_disk(pos.za, pos.zb, 1.7);
    CHECK(back.r == doctest::Approx(q.r).epsilon(1e-12));
    CHECK(back.theta == doctest::Approx(q.theta).epsilon(1e-12));
  }
}

TEST_CASE("sampled pairs follow the initial Gaussian density") {
  const std::size_t n = 100000;
  const double s0 = 1.0;
  std::vector<std::array<double, 2>> pts;
  std::vector<double> radii;
  double sa = 0, saa = 0, sab = 0, sb = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    SeededRng rng(4, stream_for(1, i));
    const auto z = sample_pair(rng, s0);
    pts.push_back({z.za, z.zb});
    radii.push_back(std::hypot(z.za, z.zb));
    sa += z.za;
    sb += z.zb;
    saa += z.za * z.za;
    sbb += z.zb * z.zb;
    sab += z.za * z.zb;
  }
  const double nn = static_cast<double>(n);
  const double var_a = (saa - sa * sa / nn) / (nn - 1);
  CHECK(std::abs(var_a - s0 * s0) <= 3 * s0 * s0 * std::sqrt(2 / nn));
  const double var_b = (sbb - sb * sb / nn) / (nn - 1);
  const double corr = (sab / nn - (sa / nn) * (sb / nn)) / std::sqrt(var_a * var_b);
  CHECK(std::abs(corr) < 0.01);

  // Rayleigh radius
  const double d = oracle::ks_statistic(radii, [&](double r) { return 1 - std::exp(-r * r / (2 * s0 * s0)); });
  CHECK(oracle::ks_pvalue(d, n) > 0.001);

  oracle::Mixture initial{s0, {{1.0, 0.0, 0.0}}};
  CHECK(oracle::grid_test(initial, pts).p > 0.001);
}

TEST_CASE("KS oracle rejects a wrong distribution") {
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) {
    SeededRng rng(0, static_cast<std::uint64_t>(i));
    xs.push_back(std::sqrt(rng.uniform()));
  }
  CHECK(oracle::ks_pvalue(oracle::ks_statistic(xs, [](double x) { return x; }), xs.size()) < 1e-6);
  CHECK(oracle::ks_pvalue(oracle::ks_statistic(xs, [](double x) { return x * x; }), xs.size()) > 0.001);
}
