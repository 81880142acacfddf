#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "flowdep/extremal.hpp"
#include "flowdep/rng.hpp"

using flowdep::ConfigError;
using flowdep::DomainError;
using flowdep::InputError;
using flowdep::Rng;
namespace ex = flowdep::extremal;

namespace {

std::vector<double> pareto_sample(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.pareto1();
  return v;
}

// Each pair has exactly one large coordinate; big values on alternating axes.
void axis_hugging(std::size_t n, std::vector<double>& xs, std::vector<double>& ys) {
  xs.resize(n);
  ys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n / 2) {
      xs[i] = double(n + i);
      ys[i] = 1.0 / double(n + i);
    } else {
      xs[i] = 1.0 / double(n + i);
      ys[i] = double(n + i);
    }
  }
}

}  // namespace

TEST_CASE("icrt three-value example") {
  const std::vector<double> in{10.0, 30.0, 20.0};
  const auto out = ex::icrt(in);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == 1.0);  // rank 3 of 3
  CHECK(out[1] == 3.0);  // rank 1
  CHECK(out[2] == 1.5);  // rank 2
}

TEST_CASE("icrt full tie takes the average rank") {
  const std::vector<double> in{5.0, 5.0, 5.0};
  const auto out = ex::icrt(in);
  for (double v : out) CHECK(v == 1.5);
}

TEST_CASE("icrt partial ties") {
  // the two 9s span ranks 1..2 -> average 1.5; 4 has rank 3, 2 has rank 4
  const std::vector<double> in{9.0, 2.0, 9.0, 4.0};
  const auto out = ex::icrt(in);
  CHECK(out[0] == doctest::Approx(4.0 / 1.5));
  CHECK(out[1] == 1.0);
  CHECK(out[2] == doctest::Approx(4.0 / 1.5));
  CHECK(out[3] == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("icrt of distinct draws is the multiset {n/r}") {
  const std::size_t n = 100;
  Rng rng(5);
  std::vector<double> in(n);
  for (auto& v : in) v = rng.uniform01();
  auto out = ex::icrt(in);
  std::sort(out.begin(), out.end());
  for (std::size_t r = 0; r < n; ++r)
    CHECK(out[r] == 100.0 / double(n - r));  // smallest output is n/n, largest n/1
}

TEST_CASE("icrt preserves order of distinct values") {
  const std::vector<double> in{0.3, 7.0, 2.5, 0.9, 11.0};
  const auto out = ex::icrt(in);
  for (std::size_t i = 0; i < in.size(); ++i)
    for (std::size_t j = 0; j < in.size(); ++j)
      if (in[i] < in[j]) CHECK(out[i] < out[j]);
}

TEST_CASE("icrt errors") {
  CHECK_THROWS_AS(ex::icrt(std::vector<double>{}), InputError);
  CHECK_THROWS_AS(ex::icrt(std::vector<double>{1.0, std::nan("")}), DomainError);
}

TEST_CASE("ceil_fraction_count snaps real-valued products") {
  CHECK(ex::ceil_fraction_count(0.0001, 1'000'000) == 100);
  CHECK(ex::ceil_fraction_count(0.10, 1'000'000) == 100'000);
  CHECK(ex::ceil_fraction_count(1.0, 12345) == 12345);
  CHECK(ex::ceil_fraction_count(0.3, 10) == 3);
  CHECK(ex::ceil_fraction_count(0.25, 7) == 2);     // ceil(1.75)
  CHECK(ex::ceil_fraction_count(0.0001, 100) == 1);  // k never drops below 1
  CHECK_THROWS_AS(ex::ceil_fraction_count(0.0, 10), ConfigError);
  CHECK_THROWS_AS(ex::ceil_fraction_count(1.5, 10), ConfigError);
}

TEST_CASE("to_polar basics") {
  const std::vector<double> xs{1.0, 3.0, 1.0};
  const std::vector<double> ys{1.0, 4.0, 1e-12};
  const auto polar = ex::to_polar(xs, ys);
  REQUIRE(polar.size() == 3);
  CHECK(polar[0].radius == std::sqrt(2.0));
  CHECK(polar[0].theta == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-15));
  CHECK(polar[1].radius == 5.0);
  CHECK(polar[1].theta == doctest::Approx(0.92729521800161219).epsilon(1e-14));
  CHECK(polar[2].theta == doctest::Approx(1e-12).epsilon(1e-6));
}

TEST_CASE("to_polar L1 option changes only the radius") {
  const std::vector<double> xs{3.0};
  const std::vector<double> ys{4.0};
  const auto l1 = ex::to_polar(xs, ys, ex::RadiusNorm::L1);
  const auto l2 = ex::to_polar(xs, ys, ex::RadiusNorm::L2);
  CHECK(l1[0].radius == 7.0);
  CHECK(l1[0].theta == l2[0].theta);
}

TEST_CASE("to_polar rejects non-positive coordinates") {
  CHECK_THROWS_AS(ex::to_polar(std::vector<double>{1.0}, std::vector<double>{0.0}),
                  DomainError);
  CHECK_THROWS_AS(ex::to_polar(std::vector<double>{-1.0}, std::vector<double>{2.0}),
                  DomainError);
  CHECK_THROWS_AS(ex::to_polar(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                  DomainError);
}

TEST_CASE("top_fraction selects the k largest radii") {
  Rng rng(17);
  std::vector<double> xs(10), ys(10);
  for (std::size_t i = 0; i < 10; ++i) {
    xs[i] = 1.0 + rng.uniform01() * 50.0;
    ys[i] = 1.0 + rng.uniform01() * 50.0;
  }
  const auto polar = ex::to_polar(xs, ys);

  auto sorted = std::vector<ex::PolarSample>(polar.begin(), polar.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.radius > b.radius; });

  const auto top3 = ex::top_fraction(polar, 0.3);
  REQUIRE(top3.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(top3[i].radius == sorted[i].radius);

  const auto all = ex::top_fraction(polar, 1.0);
  CHECK(all.size() == polar.size());
}

TEST_CASE("top_fraction breaks cutoff ties by input order") {
  const std::vector<ex::PolarSample> samples{
      {5.0, 0.1}, {5.0, 0.2}, {5.0, 0.3}, {1.0, 0.4}};
  const auto top2 = ex::top_fraction(samples, 0.5);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].theta == 0.1);
  CHECK(top2[1].theta == 0.2);
}

TEST_CASE("top_fraction subsets are nested as the fraction grows") {
  Rng rng(23);
  std::vector<double> xs(200), ys(200);
  for (std::size_t i = 0; i < 200; ++i) {
    xs[i] = rng.pareto1();
    ys[i] = rng.pareto1();
  }
  const auto polar = ex::to_polar(ex::icrt(xs), ex::icrt(ys));
  const auto small = ex::top_fraction(polar, 0.05);
  const auto large = ex::top_fraction(polar, 0.25);
  REQUIRE(small.size() <= large.size());
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(small[i].radius == large[i].radius);
    CHECK(small[i].theta == large[i].theta);
  }
}

TEST_CASE("top_fraction errors") {
  const std::vector<ex::PolarSample> none;
  CHECK_THROWS_AS(ex::top_fraction(none, 0.5), InputError);
  const std::vector<ex::PolarSample> one{{1.0, 0.5}};
  CHECK_THROWS_AS(ex::top_fraction(one, 0.0), ConfigError);
  CHECK_THROWS_AS(ex::top_fraction(one, 1.5), ConfigError);
}

TEST_CASE("edm exact anchors") {
  constexpr double quarter_pi = std::numbers::pi / 4.0;
  constexpr double half_pi = std::numbers::pi / 2.0;

  std::vector<double> diagonal(1000, quarter_pi);
  CHECK(ex::edm(diagonal) == 1.0);

  std::vector<double> split;
  for (int i = 0; i < 500; ++i) {
    split.push_back(0.0);
    split.push_back(half_pi);
  }
  CHECK(std::abs(ex::edm(split)) <= 1e-12);

  // uneven split still sits at zero: every term is (pi/4)^2
  std::vector<double> uneven(100, 0.0);
  uneven.resize(130, half_pi);
  CHECK(std::abs(ex::edm(uneven)) <= 1e-12);
}

TEST_CASE("edm of a uniform angle grid is 2/3") {
  const std::size_t k = 10000;
  constexpr double half_pi = std::numbers::pi / 2.0;
  std::vector<double> grid(k);
  for (std::size_t i = 0; i < k; ++i) grid[i] = (double(i) + 0.5) / double(k) * half_pi;
  CHECK(ex::edm(grid) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("edm errors") {
  CHECK_THROWS_AS(ex::edm(std::vector<double>{}), InputError);
  CHECK_THROWS_AS(ex::edm(std::vector<double>{-0.1}), DomainError);
  CHECK_THROWS_AS(ex::edm(std::vector<double>{1.6}), DomainError);
}

TEST_CASE("edm of any valid angle set lies in [0, 1]") {
  Rng rng(73);
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> angles(1 + rng.below(300));
    for (auto& a : angles) a = rng.uniform01() * half_pi;
    const double v = ex::edm(angles);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("edm_curve on comonotone data is 1 at every fraction") {
  const auto xs = pareto_sample(5000, 11);
  const auto curve = ex::edm_curve(xs, xs);
  REQUIRE(curve.edm_values.size() == ex::default_fractions().size());
  for (std::size_t i = 0; i < curve.edm_values.size(); ++i) {
    CHECK(curve.edm_values[i] == 1.0);
    CHECK(curve.k_values[i] == ex::ceil_fraction_count(curve.fractions[i], xs.size()));
  }
}

TEST_CASE("edm_curve separates independent from axis-hugging data") {
  const std::size_t n = 10000;
  const std::vector<double> five_pct{0.05};

  const auto xs = pareto_sample(n, 21);
  const auto ys = pareto_sample(n, 22);
  const auto independent = ex::edm_curve(xs, ys, five_pct);
  CHECK(independent.edm_values[0] < 2.0 / 3.0);

  std::vector<double> hx, hy;
  axis_hugging(n, hx, hy);
  const auto hugging = ex::edm_curve(hx, hy, five_pct);
  CHECK(hugging.edm_values[0] < 0.1);
}

TEST_CASE("edm_curve is invariant under strictly increasing marginal transforms") {
  const std::size_t n = 1000;
  auto xs = pareto_sample(n, 31);
  auto ys = pareto_sample(n, 32);
  const auto base = ex::edm_curve(xs, ys);

  auto cubed = xs;
  for (auto& v : cubed) v = v * v * v;
  const auto transformed = ex::edm_curve(cubed, ys);

  REQUIRE(base.edm_values.size() == transformed.edm_values.size());
  for (std::size_t i = 0; i < base.edm_values.size(); ++i) {
    CHECK(base.edm_values[i] == transformed.edm_values[i]);  // bitwise
    CHECK(base.k_values[i] == transformed.k_values[i]);
  }
}

TEST_CASE("edm_curve is symmetric in its arguments") {
  const std::size_t n = 2000;
  const auto xs = pareto_sample(n, 41);
  const auto ys = pareto_sample(n, 42);
  const auto ab = ex::edm_curve(xs, ys);
  const auto ba = ex::edm_curve(ys, xs);
  for (std::size_t i = 0; i < ab.edm_values.size(); ++i)
    CHECK(std::abs(ab.edm_values[i] - ba.edm_values[i]) <= 1e-12);
}

TEST_CASE("edm_curve matches manual pipeline composition") {
  const std::size_t n = 500;
  const auto xs = pareto_sample(n, 51);
  const auto ys = pareto_sample(n, 52);
  const std::vector<double> fractions{0.02, 0.10, 0.5};
  const auto curve = ex::edm_curve(xs, ys, fractions);

  const auto polar = ex::to_polar(ex::icrt(xs), ex::icrt(ys));
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const auto top = ex::top_fraction(polar, fractions[i]);
    std::vector<double> angles;
    for (const auto& s : top) angles.push_back(s.theta);
    CHECK(curve.edm_values[i] == ex::edm(angles));
    CHECK(curve.k_values[i] == top.size());
  }
}

TEST_CASE("edm_curve validates input") {
  const auto xs = pareto_sample(200, 61);
  const auto ys = pareto_sample(200, 62);
  CHECK_THROWS_AS(ex::edm_curve(xs, ys, std::vector<double>{0.5, 0.1}), ConfigError);
  CHECK_THROWS_AS(ex::edm_curve(xs, ys, std::vector<double>{0.0, 0.1}), ConfigError);
  CHECK_THROWS_AS(ex::edm_curve(xs, ys, std::vector<double>{}), ConfigError);
  const auto tiny = pareto_sample(50, 63);
  CHECK_THROWS_AS(ex::edm_curve(tiny, tiny), InputError);

  auto with_zero = xs;
  with_zero[10] = 0.0;
  CHECK_THROWS_AS(ex::edm_curve(with_zero, ys), DomainError);
  auto with_negative = xs;
  with_negative[3] = -2.0;
  CHECK_THROWS_AS(ex::edm_curve(xs, with_negative), DomainError);
}

TEST_CASE("angle histogram bins the diagonal at the center") {
  std::vector<ex::PolarSample> samples(100, {1.0, std::numbers::pi / 4.0});
  const auto bins = ex::angle_histogram(samples);
  CHECK(bins[32] == 100);
  std::size_t total = 0;
  for (auto b : bins) total += b;
  CHECK(total == 100);
}
