#ifndef FLOWDEP_EXTREMAL_HPP
#define FLOWDEP_EXTREMAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowdep/error.hpp"
#include "flowdep/text.hpp"

namespace flowdep::extremal {

enum class RadiusNorm : std::uint8_t { L2, L1 };

inline const char* norm_name(RadiusNorm n) { return n == RadiusNorm::L2 ? "l2" : "l1"; }

struct PolarSample {
  double radius = 0.0;
  double theta = 0.0;  // in [0, pi/2]; both coordinates are positive after ICRT
};

struct EdmCurve {
  std::vector<double> fractions;        // ascending, each in (0, 1]
  std::vector<std::size_t> k_values;    // k = ceil(fraction * n)
  std::vector<double> edm_values;       // each in [0, 1]
};

// Interpretation bands quoted on curve output; annotations, not verdicts.
inline constexpr double kEdmIndependenceBand = 0.4;
inline constexpr double kEdmStrongDependenceBand = 0.75;
inline constexpr double kEdmUniformReference = 2.0 / 3.0;

// Top-radius percentages used throughout: 0.01% .. 20%.
inline const std::vector<double>& default_fractions() {
  static const std::vector<double> f{0.0001, 0.0002, 0.0005, 0.001, 0.002, 0.005,
                                     0.01,   0.02,   0.05,   0.10,  0.20};
  return f;
}

// ceil(p * n) on the real numbers behind the floating-point inputs: products
// that are integers up to rounding noise (0.0001 * 10^6 and friends) snap to
// the integer instead of spilling to the next one.
inline std::size_t ceil_fraction_count(double p, std::size_t n) {
  if (!(p > 0.0) || p > 1.0) throw ConfigError("fraction must be in (0, 1]");
  const double pn = p * double(n);
  const double nearest = std::round(pn);
  double k = (std::abs(pn - nearest) <= 1e-9 * std::max(1.0, pn)) ? nearest : std::ceil(pn);
  k = std::max(1.0, std::min(k, double(n)));
  return std::size_t(k);
}

// Inverse Complementary Rank Transform: value -> n / (complementary rank),
// where the largest value has rank 1 and ties take the average of the ranks
// they span. Order-preserving and rank-only, so any strictly increasing
// transform of the input leaves the output unchanged.
inline std::vector<double> icrt(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw InputError("icrt: empty input");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("icrt: values must be finite");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });

  std::vector<double> out(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg_rank = 0.5 * double((i + 1) + (j + 1));  // ranks are 1-based
    const double transformed = double(n) / avg_rank;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = transformed;
    i = j + 1;
  }
  return out;
}

// radius = sqrt(x^2+y^2) (or x+y under the L1 option), theta = arctan(y/x).
inline std::vector<PolarSample> to_polar(std::span<const double> xs,
                                         std::span<const double> ys,
                                         RadiusNorm norm = RadiusNorm::L2) {
  if (xs.size() != ys.size()) throw DomainError("to_polar: length mismatch");
  std::vector<PolarSample> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double y = ys[i];
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw DomainError("to_polar: coordinates must be positive and finite");
    PolarSample s;
    s.radius = norm == RadiusNorm::L2 ? std::sqrt(x * x + y * y) : x + y;
    s.theta = std::atan2(y, x);
    out.push_back(s);
  }
  return out;
}

namespace detail {

// Indices of `samples` by descending radius; radius ties keep input order, so
// the cutoff rule "earlier wins" is exact.
inline std::vector<std::size_t> radius_order(std::span<const PolarSample> samples) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (samples[a].radius != samples[b].radius) return samples[a].radius > samples[b].radius;
    return a < b;
  });
  return order;
}

}  // namespace detail

// The k = ceil(p*n) samples with largest radius, in descending-radius order.
inline std::vector<PolarSample> top_fraction(std::span<const PolarSample> samples, double p) {
  if (samples.empty()) throw InputError("top_fraction: empty input");
  const std::size_t k = ceil_fraction_count(p, samples.size());
  const auto order = detail::radius_order(samples);
  std::vector<PolarSample> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(samples[order[i]]);
  return out;
}

// EDM = 1 - (4/pi)^2 * mean((theta - pi/4)^2). 1 at the diagonal, 0 for
// angles piled at the axes, 2/3 for uniform angles.
inline double edm(std::span<const double> angles) {
  if (angles.empty()) throw InputError("edm: empty input");
  constexpr double quarter_pi = std::numbers::pi / 4.0;
  constexpr double half_pi = 2.0 * quarter_pi;
  const double scale = 16.0 / (std::numbers::pi * std::numbers::pi);
  double acc = 0.0;
  for (double th : angles) {
    if (!(th >= 0.0 && th <= half_pi)) throw DomainError("edm: angle outside [0, pi/2]");
    const double d = th - quarter_pi;
    acc += d * d;
  }
  const double value = 1.0 - scale * (acc / double(angles.size()));
  return std::clamp(value, 0.0, 1.0);
}

// Full pipeline: ICRT both marginals -> polar -> EDM of the top-radius subset
// at each fraction. The subsets are nested (one descending sort, prefixes per
// fraction), and each EDM sums angles in descending-radius order, matching
// edm(top_fraction(...)) exactly.
inline EdmCurve edm_curve_from_polar(std::span<const PolarSample> samples,
                                     std::span<const double> fractions) {
  if (samples.empty()) throw InputError("edm_curve: empty input");
  if (fractions.empty()) throw ConfigError("fraction list is empty");
  double prev = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0) || f > 1.0) throw ConfigError("fractions must be in (0, 1]");
    if (f <= prev) throw ConfigError("fractions must be strictly ascending");
    prev = f;
  }

  const auto order = detail::radius_order(samples);
  EdmCurve curve;
  curve.fractions.assign(fractions.begin(), fractions.end());

  constexpr double quarter_pi = std::numbers::pi / 4.0;
  const double scale = 16.0 / (std::numbers::pi * std::numbers::pi);
  double acc = 0.0;
  std::size_t taken = 0;
  for (double f : fractions) {
    const std::size_t k = ceil_fraction_count(f, samples.size());
    for (; taken < k; ++taken) {
      const double d = samples[order[taken]].theta - quarter_pi;
      acc += d * d;
    }
    curve.k_values.push_back(k);
    curve.edm_values.push_back(std::clamp(1.0 - scale * (acc / double(k)), 0.0, 1.0));
  }
  return curve;
}

inline EdmCurve edm_curve(std::span<const double> xs, std::span<const double> ys,
                          std::span<const double> fractions, RadiusNorm norm = RadiusNorm::L2) {
  if (xs.size() != ys.size()) throw DomainError("edm_curve: length mismatch");
  if (xs.size() < 100) throw InputError("edm_curve: need at least 100 points");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw DomainError("edm_curve: marginals must be positive and finite");
  const auto tx = icrt(xs);
  const auto ty = icrt(ys);
  const auto polar = to_polar(tx, ty, norm);
  return edm_curve_from_polar(polar, fractions);
}

inline EdmCurve edm_curve(std::span<const double> xs, std::span<const double> ys,
                          RadiusNorm norm = RadiusNorm::L2) {
  return edm_curve(xs, ys, default_fractions(), norm);
}

// 64 uniform bins over [0, pi/2], for angle-distribution diagnostics.
inline std::array<std::size_t, 64> angle_histogram(std::span<const PolarSample> samples) {
  std::array<std::size_t, 64> bins{};
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (const auto& s : samples) {
    auto b = std::size_t(s.theta / half_pi * 64.0);
    bins[std::min<std::size_t>(b, 63)] += 1;
  }
  return bins;
}

inline void write_curve_tsv(const EdmCurve& c, std::ostream& os,
                            std::span<const std::string> header_comments = {}) {
  for (const auto& comment : header_comments) os << "# " << comment << "\n";
  os << "# reference: uniform angles give EDM ~ 2/3; EDM < "
     << format_label(kEdmIndependenceBand)
     << " suggests a tendency toward extremal independence, EDM > "
     << format_label(kEdmStrongDependenceBand) << " strong extremal dependence\n";
  os << "fraction\tk\tedm\n";
  for (std::size_t i = 0; i < c.fractions.size(); ++i)
    os << format_label(c.fractions[i]) << '\t' << c.k_values[i] << '\t'
       << format_fixed(c.edm_values[i], 6) << "\n";
}

inline nlohmann::json curve_to_json(const EdmCurve& c) {
  return nlohmann::json{
      {"fractions", c.fractions},
      {"k_values", c.k_values},
      {"edm_values", c.edm_values},
      {"annotations",
       {{"uniform_reference", kEdmUniformReference},
        {"extremal_independence_below", kEdmIndependenceBand},
        {"strong_extremal_dependence_above", kEdmStrongDependenceBand}}}};
}

}  // namespace flowdep::extremal

#endif
