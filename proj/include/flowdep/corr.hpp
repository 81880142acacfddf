#ifndef FLOWDEP_CORR_HPP
#define FLOWDEP_CORR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowdep/error.hpp"
#include "flowdep/metrics.hpp"
#include "flowdep/parallel.hpp"
#include "flowdep/text.hpp"

namespace flowdep::corr {

enum class Pair { SizeDuration, SizeRate, DurationRate };

inline const char* pair_name(Pair p) {
  switch (p) {
    case Pair::SizeDuration: return "size-duration";
    case Pair::SizeRate: return "size-rate";
    case Pair::DurationRate: return "duration-rate";
  }
  return "?";
}

inline std::optional<Pair> pair_from_name(std::string_view name) {
  if (name == "size-duration") return Pair::SizeDuration;
  if (name == "size-rate") return Pair::SizeRate;
  if (name == "duration-rate") return Pair::DurationRate;
  return std::nullopt;
}

// Joint lower-bound grid. A threshold of 0 means "no threshold on this axis";
// all comparisons downstream are strict (>), so points exactly at a nonzero
// threshold are excluded.
struct ThresholdGrid {
  std::vector<double> size_thresholds_bytes;
  std::vector<double> duration_thresholds_s;

  void validate() const {
    auto check = [](const std::vector<double>& v, const char* axis) {
      if (v.empty()) throw ConfigError(std::string(axis) + " threshold list is empty");
      double prev = -1.0;
      for (double t : v) {
        if (!(t >= 0.0) || !std::isfinite(t))
          throw ConfigError(std::string(axis) + " thresholds must be finite and non-negative");
        if (t <= prev)
          throw ConfigError(std::string(axis) + " thresholds must be strictly ascending");
        prev = t;
      }
    };
    check(size_thresholds_bytes, "size");
    check(duration_thresholds_s, "duration");
  }
};

// Grid used throughout: durations {0, 0.01, 0.1, 1, 5, 100} s, sizes
// {0, 1 kB, 10 kB, 100 kB} with kB = 1000 bytes.
inline ThresholdGrid default_grid() {
  return {{0.0, 1e3, 1e4, 1e5}, {0.0, 0.01, 0.1, 1.0, 5.0, 100.0}};
}

struct CorrCell {
  double duration_min_s = 0.0;
  double size_min_bytes = 0.0;
  Pair pair = Pair::SizeDuration;
  std::size_t n = 0;
  double population_pct = 0.0;
  // Absent when n < 2 or a marginal is constant; serialized as NA, never 0.
  std::optional<double> coefficient;
};

struct CorrGrid {
  ThresholdGrid grid;
  Pair pair = Pair::SizeDuration;
  // rows follow duration_thresholds_s, columns follow size_thresholds_bytes
  std::vector<std::vector<CorrCell>> cells;
  std::size_t total_n = 0;
};

// Plain product-moment coefficient, two-pass: means first, then centered
// products. Stable for the populations in scope (~10^6 points).
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw DomainError("pearson: insufficient data");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= double(n);
  mean_y /= double(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DomainError("pearson: degenerate marginal");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace detail {

// log10 of a raw threshold; 0 maps to -inf so it admits every finite point.
inline double log_threshold(double raw) {
  return raw > 0.0 ? std::log10(raw) : -std::numeric_limits<double>::infinity();
}

inline void pair_fields(const metrics::LogLogPoint& p, Pair pair, double& x, double& y) {
  switch (pair) {
    case Pair::SizeDuration:
      x = p.log_size;
      y = p.log_duration;
      return;
    case Pair::SizeRate:
      x = p.log_size;
      y = p.log_rate;
      return;
    case Pair::DurationRate:
      x = p.log_duration;
      y = p.log_rate;
      return;
  }
}

}  // namespace detail

struct ThresholdSubset {
  std::vector<metrics::LogLogPoint> points;
  double population_pct = 0.0;
};

// Strict joint filter: raw size > size_min AND raw duration > duration_min,
// evaluated in the log domain against log10 of the thresholds.
inline ThresholdSubset apply_thresholds(std::span<const metrics::LogLogPoint> points,
                                        double size_min_bytes, double duration_min_s) {
  if (size_min_bytes < 0.0 || duration_min_s < 0.0)
    throw ConfigError("thresholds must be non-negative");
  const double ls_min = detail::log_threshold(size_min_bytes);
  const double ld_min = detail::log_threshold(duration_min_s);
  ThresholdSubset out;
  for (const auto& p : points)
    if (p.log_size > ls_min && p.log_duration > ld_min) out.points.push_back(p);
  out.population_pct =
      points.empty() ? 0.0 : 100.0 * double(out.points.size()) / double(points.size());
  return out;
}

// One Pearson coefficient + subpopulation share per (duration, size) threshold
// intersection. Cells are independent; with threads > 1 they are evaluated
// concurrently, each with a fixed input-order summation, so results do not
// depend on the schedule.
inline CorrGrid corr_grid(std::span<const metrics::LogLogPoint> points,
                          const ThresholdGrid& grid, Pair pair, unsigned threads = 1) {
  grid.validate();
  if (points.empty()) throw InputError("empty population");

  CorrGrid out;
  out.grid = grid;
  out.pair = pair;
  out.total_n = points.size();
  const std::size_t n_rows = grid.duration_thresholds_s.size();
  const std::size_t n_cols = grid.size_thresholds_bytes.size();
  out.cells.assign(n_rows, std::vector<CorrCell>(n_cols));

  run_jobs(n_rows * n_cols, threads, [&](std::size_t job) {
    const std::size_t row = job / n_cols;
    const std::size_t col = job % n_cols;
    const double dur_min = grid.duration_thresholds_s[row];
    const double size_min = grid.size_thresholds_bytes[col];
    const double ls_min = detail::log_threshold(size_min);
    const double ld_min = detail::log_threshold(dur_min);

    CorrCell cell;
    cell.duration_min_s = dur_min;
    cell.size_min_bytes = size_min;
    cell.pair = pair;

    // pass 1: count + means over the subset
    std::size_t n = 0;
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& p : points) {
      if (p.log_size > ls_min && p.log_duration > ld_min) {
        double x = 0.0, y = 0.0;
        detail::pair_fields(p, pair, x, y);
        mean_x += x;
        mean_y += y;
        ++n;
      }
    }
    cell.n = n;
    cell.population_pct = 100.0 * double(n) / double(points.size());
    if (n >= 2) {
      mean_x /= double(n);
      mean_y /= double(n);
      // pass 2: centered products
      double sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (const auto& p : points) {
        if (p.log_size > ls_min && p.log_duration > ld_min) {
          double x = 0.0, y = 0.0;
          detail::pair_fields(p, pair, x, y);
          const double dx = x - mean_x;
          const double dy = y - mean_y;
          sxx += dx * dx;
          syy += dy * dy;
          sxy += dx * dy;
        }
      }
      if (sxx > 0.0 && syy > 0.0)
        cell.coefficient = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    }
    out.cells[row][col] = cell;
  });

  return out;
}

// TSV layout mirrors the tables: header row of size thresholds, one row per
// duration threshold, each cell `coefficient|pct|n` with NA for undefined.
inline void write_grid_tsv(const CorrGrid& g, std::ostream& os,
                           std::span<const std::string> header_comments = {}) {
  for (const auto& c : header_comments) os << "# " << c << "\n";
  os << "# pair: " << pair_name(g.pair) << "  total_n: " << g.total_n
     << "  cell: coefficient|population_pct|n\n";
  os << "duration_min_s";
  for (double s : g.grid.size_thresholds_bytes) os << "\tsize>" << format_label(s);
  os << "\n";
  for (std::size_t row = 0; row < g.cells.size(); ++row) {
    os << format_label(g.grid.duration_thresholds_s[row]);
    for (const auto& cell : g.cells[row]) {
      os << '\t';
      if (cell.coefficient)
        os << format_fixed(*cell.coefficient, 6);
      else
        os << "NA";
      os << '|' << format_fixed(cell.population_pct, 2) << '|' << cell.n;
    }
    os << "\n";
  }
}

inline nlohmann::json grid_to_json(const CorrGrid& g) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& row : g.cells) {
    for (const auto& cell : row) {
      nlohmann::json jc{{"duration_min_s", cell.duration_min_s},
                        {"size_min_bytes", cell.size_min_bytes},
                        {"n", cell.n},
                        {"population_pct", cell.population_pct}};
      if (cell.coefficient)
        jc["coefficient"] = *cell.coefficient;
      else
        jc["coefficient"] = nullptr;
      cells.push_back(std::move(jc));
    }
  }
  return nlohmann::json{{"pair", pair_name(g.pair)},
                        {"total_n", g.total_n},
                        {"size_thresholds_bytes", g.grid.size_thresholds_bytes},
                        {"duration_thresholds_s", g.grid.duration_thresholds_s},
                        {"cells", std::move(cells)}};
}

}  // namespace flowdep::corr

#endif
